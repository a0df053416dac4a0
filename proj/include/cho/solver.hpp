#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cho/quadrature.hpp"

namespace cho {

/// One eigenstate of the confined isotropic oscillator: quantum numbers plus
/// the confinement radius r_c (bohr) and frequency omega (atomic units).
struct QuantumState {
  int n_r = 0;
  int l = 0;
  int m = 0;
  double r_c = 1.0;
  double omega = 1.0;

  /// Spectroscopic label, n_r + 1 followed by s, p, d, f or g.
  std::string name() const;

  /// Parses labels such as "1s" or "2d"; throws DomainError on bad input.
  static QuantumState from_name(std::string_view label, double r_c, double omega = 1.0);

  /// Throws DomainError unless 0 <= n_r <= 4, 0 <= l <= 4, m == 0,
  /// r_c > 0 and omega > 0.
  void validate() const;

  /// Free-oscillator energy (2 n_r + l + 3/2) omega.
  double free_energy() const { return (2.0 * n_r + l + 1.5) * omega; }
};

/// The eight states studied by default, in presentation order.
const std::vector<std::string>& default_state_names();

/// r_c^l 1F1(a; l + 3/2; omega r_c^2) exp(-omega r_c^2 / 2) with
/// a = (l + 3/2 - epsilon/omega)/2; zero exactly at the eigenvalues.
double boundary_value(double epsilon, const QuantumState& state);

/// Energy-scan step used to bracket eigenvalues.
double energy_scan_step(const QuantumState& state);

/// The (n_r + 1)-th root of boundary_value, bracketed by an upward scan from
/// l + 3/2 - delta and polished by bisection to full double precision.
/// Throws SolverError when no bracket is found within the scan cap.
double solve_energy(const QuantumState& state);

/// Normalized radial function R(r) on [0, r_c] with weight r^2.
class RadialSolution {
 public:
  RadialSolution(QuantumState state, double energy, const QuadratureSpec& spec);

  const QuantumState& state() const { return state_; }
  double energy() const { return energy_; }
  double norm_const() const { return norm_; }
  /// First 1F1 parameter a = (l + 3/2 - energy/omega)/2.
  double kummer_a() const { return kummer_a_; }

  /// R(r) for r in [0, r_c].
  double operator()(double r) const;
  /// dR/dr for r in [0, r_c].
  double derivative(double r) const;
  /// Slope of u(r) = r R(r) at the wall, r_c R'(r_c).
  double wall_slope() const;

  /// Interior zeros, ascending; exactly n_r of them.
  const std::vector<double>& nodes() const { return nodes_; }
  /// Diagnostic grid (uniform points plus quadrature nodes) and R on it.
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  /// 0, the interior nodes and r_c: panel boundaries for integrals of R.
  std::vector<double> breakpoints() const;

  /// Integral of R^2 r^2 over [0, r_c] as recomputed by integrate_finite.
  double norm_check(const QuadratureSpec& spec) const;

 private:
  double unnormalized(double r) const;

  QuantumState state_;
  double energy_;
  double kummer_a_;
  double norm_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Solves the energy and builds the normalized radial function.
RadialSolution radial_wavefunction(const QuantumState& state, const QuadratureSpec& spec = {});
/// Builds the radial function for a known (e.g. cached) eigenvalue.
RadialSolution radial_wavefunction(const QuantumState& state, double energy,
                                   const QuadratureSpec& spec = {});

/// Large-p form of the momentum function,
/// |psi(p)|^2 ~ amplitude * sin^2(p r_c - l pi/2) / p^6, with the
/// coefficients of its 1/p^2 corrections.
struct WallAsymptotics {
  double amplitude = 0.0;  // (2/pi) u'(r_c)^2, in the normalization of the owner
  double r_c = 1.0;
  int l = 0;
  double c1 = 0.0;  // l(l+1)/2
  double d = 0.0;   // second-order envelope coefficient

  /// Integral over [p_max, inf) of the modelled |psi|^2 p^(k+2), valid when
  /// p_max sits on a zero of the asymptotic phase. k in {-2, 0, 2}.
  double moment_tail(int k, double p_max) const;
  /// Integral over [p_max, inf) of (|psi|^2)^q p^2, q > 1/2.
  double power_tail(double q, double p_max) const;
  /// Integral over [p_max, inf) of -|psi|^2 ln|psi|^2 p^2.
  double neg_entropy_tail(double p_max) const;
  /// Estimated residual of the corrected norm tail.
  double residual_bound(double p_max) const;
};

struct MomentumOptions {
  /// Truncation target for p_max * r_c before snapping to a phase zero.
  double span = 256.0;
  /// Largest number of span doublings used to meet the tail bound.
  int max_doublings = 3;
  int base_order = 32;
  bool parallel = true;
};

/// Normalized radial momentum function |psi(p)| tabulated on a composite
/// Gauss–Legendre rule over [0, p_max]; the (-i)^l phase is dropped.
class MomentumSolution {
 public:
  const QuantumState& state() const { return state_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  /// |psi(p)| on grid().
  const std::vector<double>& values() const { return values_; }
  /// |psi(p)|^2 on grid().
  std::vector<double> density() const;
  const SemiInfiniteSpec& truncation() const { return truncation_; }
  /// Norm before renormalization (tabulated part plus analytic tail).
  double parseval() const { return parseval_; }
  const WallAsymptotics& asymptotics() const { return asymptotics_; }

  /// Normalized psi(p) without the (-i)^l phase at any p >= 0.
  double operator()(double p) const;

 private:
  friend MomentumSolution momentum_wavefunction(const RadialSolution&, const MomentumOptions&);

  QuantumState state_;
  std::vector<double> grid_;
  std::vector<double> weights_;
  std::vector<double> values_;
  std::vector<double> r_nodes_;
  std::vector<double> r_weighted_;  // already divided by sqrt(parseval)
  SemiInfiniteSpec truncation_;
  double parseval_ = 1.0;
  WallAsymptotics asymptotics_;
};

/// psi(p) = sqrt(2/pi) int_0^{r_c} R(r) j_l(p r) r^2 dr, renormalized.
/// Throws NumericalError when the Parseval diagnostic leaves [1 - 1e-4, 1 + 1e-4].
MomentumSolution momentum_wavefunction(const RadialSolution& rs, const MomentumOptions& options = {});

}  // namespace cho
