#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cho {

/// Tolerance policy of the adaptive integrator.
struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_panels = 4096;
  int base_order = 32;

  /// Throws DomainError unless rel_tol in [1e-14, 1e-6], base_order >= 16
  /// and max_panels >= 2.
  void validate() const;
};

/// Truncation of a semi-infinite integral at p_max together with a bound on
/// the omitted part.
struct SemiInfiniteSpec {
  double p_max = 0.0;
  double tail_bound = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double err_est = 0.0;
  int panels = 0;
};

struct SemiInfiniteResult {
  double value = 0.0;
  double err_est = 0.0;
  SemiInfiniteSpec truncation;
};

/// Nodes and weights of a quadrature rule, kept in ascending node order.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

using Integrand = std::function<double(double)>;

/// Gauss–Legendre rule of the given order mapped onto [lo, hi].
/// order must lie in [2, 256]; nodes come from Newton iteration on P_n.
QuadratureRule gauss_legendre_nodes(int order, double lo, double hi);

/// The [-1, 1] rule of the given order, computed once and shared read-only.
const QuadratureRule& reference_rule(int order);

/// Composite Gauss–Legendre rule: one panel of `order` points between each
/// pair of consecutive breakpoints (which must be strictly increasing).
QuadratureRule composite_rule(std::span<const double> breakpoints, int order);

/// Globally adaptive panel-halving Gauss–Legendre integration of f over
/// [lo, hi]. Interior `breakpoints` seed the initial panels (use them for
/// known kinks and zeros of the integrand). Throws AccuracyError with the
/// best estimate when spec.max_panels is exhausted.
QuadratureResult integrate_finite(const Integrand& f, double lo, double hi,
                                  const QuadratureSpec& spec = {},
                                  std::span<const double> breakpoints = {});

/// Integral over [0, inf) of an integrand with Gaussian-type decay,
/// |f(p)| <= C p^k exp(-p^2/decay_scale^2) beyond its oscillatory region.
/// p_max is grown until the estimated tail is below 1e-10 of the value.
SemiInfiniteResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec,
                                           double decay_scale);

}  // namespace cho
