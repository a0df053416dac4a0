#include "cho/measures.hpp"

#include <cmath>
#include <numbers>

#include "cho/eigen_cache.hpp"
#include "cho/error.hpp"
#include "cho/specfun.hpp"

namespace cho {
namespace {

constexpr double kPi = std::numbers::pi;

QuadratureSpec angular_spec() {
  QuadratureSpec s;
  s.rel_tol = 1e-13;
  s.abs_tol = 1e-15;
  return s;
}

// |Y_{l0}(theta)|^2 as a function of x = cos(theta).
double ylm_squared(int l, double x) {
  const double p = legendre_p(l, x);
  return (2.0 * l + 1.0) / (4.0 * kPi) * p * p;
}

// Zeros of P_l are the nodes of the l-point Gauss-Legendre rule.
std::vector<double> legendre_zeros(int l) {
  if (l == 0) return {};
  if (l == 1) return {0.0};
  return reference_rule(l).nodes;
}

template <class F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

void check_renyi_order(double q, const char* name) {
  if (!(q > 0.0) || q == 1.0 || !std::isfinite(q)) {
    throw DomainError(std::string("Renyi order ") + name + " must be positive and != 1");
  }
}

}  // namespace

AngularFactor::AngularFactor(int l, int m) : l_(l), m_(m) {
  if (l < 0 || l > 4) throw DomainError("AngularFactor: l must lie in [0, 4]");
  if (m != 0) throw DomainError("AngularFactor: only m = 0 is supported");
  if (l == 0) {
    shannon_ = std::log(4.0 * kPi);
    return;
  }
  const std::vector<double> zeros = legendre_zeros(l);
  const auto r = integrate_finite(
      [l](double x) {
        const double y = ylm_squared(l, x);
        return y > 1e-300 ? -y * std::log(y) : 0.0;
      },
      -1.0, 1.0, angular_spec(), zeros);
  shannon_ = 2.0 * kPi * r.value;
}

double AngularFactor::entropic_moment(double alpha) const {
  if (!(alpha > 0.0)) throw DomainError("entropic_moment: alpha must be positive");
  if (alpha == 1.0) return 1.0;
  if (l_ == 0) return std::pow(4.0 * kPi, 1.0 - alpha);
  const int l = l_;
  const std::vector<double> zeros = legendre_zeros(l);
  const auto r = integrate_finite(
      [l, alpha](double x) {
        const double y = ylm_squared(l, x);
        return y > 0.0 ? std::pow(y, alpha) : 0.0;
      },
      -1.0, 1.0, angular_spec(), zeros);
  return 2.0 * kPi * r.value;
}

Density::Density(const RadialSolution& rs, const QuadratureSpec& spec)
    : space_(Space::position), angular_(rs.state().l, rs.state().m), position_(&rs), spec_(spec) {}

Density::Density(const MomentumSolution& ms, bool parallel)
    : space_(Space::momentum),
      angular_(ms.state().l, ms.state().m),
      momentum_(&ms),
      parallel_(parallel) {}

double Density::radial_integral(const kernels::Functional& g) const {
  using Kind = kernels::Functional::Kind;
  if (space_ == Space::position) {
    const RadialSolution& rs = *position_;
    const std::vector<double> bps = rs.breakpoints();
    return integrate_finite(
               [&rs, &g](double r) {
                 const double v = rs(r);
                 return g(v * v, r);
               },
               0.0, rs.state().r_c, spec_, bps)
        .value;
  }

  const MomentumSolution& ms = *momentum_;
  const std::vector<double> rho = ms.density();
  const double tabulated =
      parallel_ ? kernels::functional_sum_parallel(g, ms.grid(), ms.weights(), rho)
                : kernels::functional_sum_serial(g, ms.grid(), ms.weights(), rho);
  const double p_max = ms.truncation().p_max;
  const WallAsymptotics& tail = ms.asymptotics();
  switch (g.kind) {
    case Kind::power:
      return tabulated + tail.power_tail(g.order, p_max);
    case Kind::neg_entropy:
      return tabulated + tail.neg_entropy_tail(p_max);
    case Kind::moment:
      return tabulated + tail.moment_tail(g.moment, p_max);
  }
  return tabulated;
}

double shannon_entropy(const Density& d) {
  return d.radial_integral(kernels::Functional::neg_entropy()) + d.angular().shannon_part();
}

double renyi_entropy(const Density& d, double order) {
  check_renyi_order(order, "order");
  const double moment =
      d.radial_integral(kernels::Functional::power(order)) * d.angular().entropic_moment(order);
  if (!(moment > 0.0) || !std::isfinite(moment)) {
    throw NumericalError("renyi_entropy: entropic moment is not positive");
  }
  return std::log(moment) / (1.0 - order);
}

double onicescu_energy(const Density& d) {
  return d.radial_integral(kernels::Functional::power(2.0)) * d.angular().entropic_moment(2.0);
}

double conjugate_order(double alpha) {
  if (!(alpha > 0.5)) throw DomainError("conjugate_order: alpha must exceed 1/2");
  return alpha / (2.0 * alpha - 1.0);
}

namespace {
void check_moment_order(int k) {
  if (k != -2 && k != 0 && k != 2) throw DomainError("moment order must be -2, 0 or 2");
}
}  // namespace

double radial_moment(const RadialSolution& rs, int k, const QuadratureSpec& spec) {
  check_moment_order(k);
  return Density(rs, spec).radial_integral(kernels::Functional::moment_of(k));
}

double momentum_moment(const MomentumSolution& ms, int k, bool parallel) {
  check_moment_order(k);
  return Density(ms, parallel).radial_integral(kernels::Functional::moment_of(k));
}

FisherPair fisher_information(const Moments& mom, int l, int m) {
  const double am = std::abs(m);
  FisherPair out;
  out.position = 4.0 * mom.p2 - 2.0 * (2 * l + 1) * am * mom.rm2;
  out.momentum = 4.0 * mom.r2 - 2.0 * (2 * l + 1) * am * mom.pm2;
  if (out.position < 0.0 || out.momentum < 0.0) {
    throw NumericalError("fisher_information: negative Fisher information");
  }
  return out;
}

double complexity(double order_val, double disorder_val, double b) {
  if (!(order_val > 0.0)) throw DomainError("complexity: order value must be positive");
  const double exponent = b * disorder_val;
  const double value = order_val * std::exp(exponent);
  if (!std::isfinite(value)) {
    throw NumericalError("complexity: exponent " + std::to_string(exponent) + " overflows");
  }
  return value;
}

MeasureSet measure_set(const QuantumState& state, double alpha, double beta,
                       const PipelineOptions& options, EigenvalueCache* cache) {
  check_renyi_order(alpha, "alpha");
  check_renyi_order(beta, "beta");
  state.validate();

  MeasureSet out;
  out.state = state;
  out.alpha = alpha;
  out.beta = beta;

  out.energy = in_stage("solve", [&] { return cache ? cache->energy(state) : solve_energy(state); });
  const RadialSolution rs =
      in_stage("radial", [&] { return radial_wavefunction(state, out.energy, options.quadrature); });
  const MomentumSolution ms =
      in_stage("momentum", [&] { return momentum_wavefunction(rs, options.momentum); });
  out.parseval = ms.parseval();
  out.p_max = ms.truncation().p_max;

  in_stage("position measures", [&] {
    const Density d(rs, options.quadrature);
    out.shannon.r = shannon_entropy(d);
    out.renyi.r = renyi_entropy(d, alpha);
    out.onicescu.r = onicescu_energy(d);
    out.moments.r2 = radial_moment(rs, 2, options.quadrature);
    out.moments.rm2 = radial_moment(rs, -2, options.quadrature);
    return 0;
  });
  in_stage("momentum measures", [&] {
    const Density d(ms, options.momentum.parallel);
    out.shannon.p = shannon_entropy(d);
    out.renyi.p = renyi_entropy(d, beta);
    out.onicescu.p = onicescu_energy(d);
    out.moments.p2 = momentum_moment(ms, 2, options.momentum.parallel);
    out.moments.pm2 = momentum_moment(ms, -2, options.momentum.parallel);
    return 0;
  });
  in_stage("fisher", [&] {
    const FisherPair f = fisher_information(out.moments, state.l, state.m);
    out.fisher.r = f.position;
    out.fisher.p = f.momentum;
    return 0;
  });

  out.shannon.t = out.shannon.r + out.shannon.p;
  out.renyi.t = out.renyi.r + out.renyi.p;
  out.onicescu.t = out.onicescu.r * out.onicescu.p;
  out.fisher.t = out.fisher.r * out.fisher.p;
  return out;
}

ComplexityReport complexity_report(const MeasureSet& m, double b) {
  auto triple = [b](const Triple& order, const Triple& disorder) {
    return Triple{complexity(order.r, disorder.r, b), complexity(order.p, disorder.p, b),
                  complexity(order.t, disorder.t, b)};
  };
  ComplexityReport out;
  out.b = b;
  out.es = triple(m.onicescu, m.shannon);
  out.er = triple(m.onicescu, m.renyi);
  out.is = triple(m.fisher, m.shannon);
  out.ir = triple(m.fisher, m.renyi);
  return out;
}

}  // namespace cho
