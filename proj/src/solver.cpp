#include "cho/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "cho/error.hpp"
#include "cho/kernels.hpp"
#include "cho/specfun.hpp"

namespace cho {
namespace {

constexpr char kLetters[] = "spdfg";
constexpr double kPi = std::numbers::pi;

double sign_of(double x) { return std::signbit(x) ? -1.0 : 1.0; }

// Bisection down to adjacent doubles; f(lo) and f(hi) differ in sign.
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (sign_of(f_mid) == sign_of(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Illinois variant of regula falsi; f_lo and f_hi differ in sign.
template <class F>
double illinois(F&& f, double lo, double hi, double f_lo, double f_hi) {
  const double tol = 1e-12 * (hi - lo) + 1e-300;
  int side = 0;
  for (int iter = 0; iter < 100 && hi - lo > tol; ++iter) {
    const double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) break;
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (sign_of(fx) == sign_of(f_lo)) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
  }
  return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
}

}  // namespace

std::string QuantumState::name() const {
  std::string out = std::to_string(n_r + 1);
  if (l >= 0 && l <= 4) {
    out += kLetters[l];
  } else {
    out += "?";
  }
  return out;
}

QuantumState QuantumState::from_name(std::string_view label, double r_c, double omega) {
  if (label.size() != 2 || label[0] < '1' || label[0] > '5') {
    throw DomainError("unknown state label '" + std::string(label) + "'");
  }
  const auto* pos = std::find(std::begin(kLetters), std::end(kLetters) - 1, label[1]);
  if (pos == std::end(kLetters) - 1) {
    throw DomainError("unknown state label '" + std::string(label) + "'");
  }
  QuantumState s;
  s.n_r = label[0] - '1';
  s.l = static_cast<int>(pos - std::begin(kLetters));
  s.r_c = r_c;
  s.omega = omega;
  s.validate();
  return s;
}

void QuantumState::validate() const {
  if (n_r < 0 || n_r > 4) throw DomainError("QuantumState: n_r must lie in [0, 4]");
  if (l < 0 || l > 4) throw DomainError("QuantumState: l must lie in [0, 4]");
  if (m != 0) throw DomainError("QuantumState: only m = 0 is supported");
  if (!(r_c > 0.0) || !std::isfinite(r_c)) throw DomainError("QuantumState: r_c must be positive");
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("QuantumState: omega must be positive");
  }
}

const std::vector<std::string>& default_state_names() {
  static const std::vector<std::string> names{"1s", "1p", "1d", "2s", "1f", "2p", "1g", "2d"};
  return names;
}

double boundary_value(double epsilon, const QuantumState& state) {
  if (!(epsilon > 0.0)) throw DomainError("boundary_value: epsilon must be positive");
  const double b = state.l + 1.5;
  const double a = 0.5 * (b - epsilon / state.omega);
  const double z = state.omega * state.r_c * state.r_c;
  return std::pow(state.r_c, state.l) * kummer_1f1({a, b, z}) * std::exp(-0.5 * z);
}

double energy_scan_step(const QuantumState& state) {
  const double box = kPi * kPi / (2.0 * state.r_c * state.r_c);
  return std::min(state.omega, box) / 8.0;
}

double solve_energy(const QuantumState& state) {
  state.validate();
  const double step = energy_scan_step(state);
  auto f = [&](double e) { return boundary_value(e, state); };

  // No eigenvalue lies below the free value (l + 3/2) omega of the lowest
  // state of this l; start just under it.
  double lo = (state.l + 1.5) * state.omega - 1e-3 * step;
  double f_lo = f(lo);
  int crossings = 0;
  constexpr long kScanCap = 50'000'000;
  for (long k = 0; k < kScanCap; ++k) {
    const double hi = lo + step;
    const double f_hi = f(hi);
    if (sign_of(f_hi) != sign_of(f_lo)) {
      if (crossings == state.n_r) return bisect(f, lo, hi, f_lo);
      ++crossings;
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw SolverError("solve_energy: no bracket found for " + state.name());
}

RadialSolution::RadialSolution(QuantumState state, double energy, const QuadratureSpec& spec)
    : state_(state), energy_(energy), kummer_a_(0.5 * (state.l + 1.5 - energy / state.omega)) {
  state_.validate();
  spec.validate();
  const double rc = state_.r_c;

  // Interior nodes from sign changes on a uniform grid, refined by bisection.
  // Far out in the classically forbidden region R is of the order of the
  // energy's rounding error, and sign flips there carry no information; a
  // change only counts when R reaches 1e-4 of its peak within 1% of r_c.
  for (int samples : {2000, 20000, 200000}) {
    nodes_.clear();
    std::vector<double> f(static_cast<std::size_t>(samples));
    double peak = 0.0;
    for (int i = 1; i < samples; ++i) {
      f[static_cast<std::size_t>(i)] = unnormalized(rc * i / samples);
      peak = std::max(peak, std::abs(f[static_cast<std::size_t>(i)]));
    }
    const int window = std::max(1, samples / 100);
    auto significant = [&](int i) {
      for (int j = std::max(1, i - window); j < std::min(samples, i + window + 1); ++j) {
        if (std::abs(f[static_cast<std::size_t>(j)]) > 1e-4 * peak) return true;
      }
      return false;
    };
    for (int i = 2; i < samples; ++i) {
      const double fp = f[static_cast<std::size_t>(i - 1)];
      const double fr = f[static_cast<std::size_t>(i)];
      const double r = rc * i / samples;
      if (fr == 0.0) {
        if (significant(i)) nodes_.push_back(r);
      } else if (fp != 0.0 && sign_of(fr) != sign_of(fp) && significant(i)) {
        nodes_.push_back(bisect([this](double x) { return unnormalized(x); }, rc * (i - 1) / samples, r, fp));
      }
    }
    if (static_cast<int>(nodes_.size()) == state_.n_r) break;
  }
  if (static_cast<int>(nodes_.size()) != state_.n_r) {
    throw NumericalError("radial_wavefunction: " + state_.name() + " has " +
                         std::to_string(nodes_.size()) + " interior zeros, expected " +
                         std::to_string(state_.n_r));
  }

  QuadratureSpec tight = spec;
  tight.rel_tol = std::min(spec.rel_tol, 1e-12);
  const std::vector<double> bps = breakpoints();
  const double norm2 = integrate_finite(
                           [this](double r) {
                             const double f = unnormalized(r);
                             return f * f * r * r;
                           },
                           0.0, rc, tight, bps)
                           .value;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw NumericalError("radial_wavefunction: non-positive norm for " + state_.name());
  }
  norm_ = 1.0 / std::sqrt(norm2);

  constexpr int kUniform = 2000;
  grid_.reserve(kUniform + 1 + bps.size() * spec.base_order);
  for (int i = 0; i <= kUniform; ++i) grid_.push_back(rc * i / kUniform);
  const QuadratureRule rule = composite_rule(bps, spec.base_order);
  grid_.insert(grid_.end(), rule.nodes.begin(), rule.nodes.end());
  std::sort(grid_.begin(), grid_.end());
  grid_.erase(std::unique(grid_.begin(), grid_.end()), grid_.end());
  values_.reserve(grid_.size());
  for (double r : grid_) values_.push_back((*this)(r));
}

double RadialSolution::unnormalized(double r) const {
  const double z = state_.omega * r * r;
  return std::pow(r, state_.l) * kummer_1f1({kummer_a_, state_.l + 1.5, z}) * std::exp(-0.5 * z);
}

double RadialSolution::operator()(double r) const {
  if (!(r >= 0.0) || r > state_.r_c * (1.0 + 1e-12)) {
    throw DomainError("RadialSolution: r outside [0, r_c]");
  }
  return norm_ * unnormalized(r);
}

double RadialSolution::derivative(double r) const {
  if (!(r >= 0.0) || r > state_.r_c * (1.0 + 1e-12)) {
    throw DomainError("RadialSolution: r outside [0, r_c]");
  }
  const int l = state_.l;
  const double w = state_.omega;
  const double z = w * r * r;
  const KummerParams kp{kummer_a_, l + 1.5, z};
  const double m = kummer_1f1(kp);
  const double dm = kummer_1f1_dz(kp);
  const double rl = std::pow(r, l);
  double d = rl * (2.0 * w * r * dm - w * r * m);
  if (l > 0) d += l * std::pow(r, l - 1) * m;
  return norm_ * d * std::exp(-0.5 * z);
}

double RadialSolution::wall_slope() const { return state_.r_c * derivative(state_.r_c); }

std::vector<double> RadialSolution::breakpoints() const {
  std::vector<double> out{0.0};
  out.insert(out.end(), nodes_.begin(), nodes_.end());
  out.push_back(state_.r_c);
  return out;
}

double RadialSolution::norm_check(const QuadratureSpec& spec) const {
  const std::vector<double> bps = breakpoints();
  return integrate_finite(
             [this](double r) {
               const double f = (*this)(r);
               return f * f * r * r;
             },
             0.0, state_.r_c, spec, bps)
      .value;
}

RadialSolution radial_wavefunction(const QuantumState& state, const QuadratureSpec& spec) {
  return RadialSolution(state, solve_energy(state), spec);
}

RadialSolution radial_wavefunction(const QuantumState& state, double energy,
                                   const QuadratureSpec& spec) {
  return RadialSolution(state, energy, spec);
}

// Tail integrals of the modelled density amplitude * [s^2 (1 - 2d/p^2)
// + (c1/(r_c p)) sin 2θ + c1^2/(r_c p)^2 c^2] / p^6 with θ = p r_c - l π/2,
// starting on a zero of sin θ. The oscillating parts contribute through
// their boundary terms only.
double WallAsymptotics::moment_tail(int k, double p_max) const {
  if (k < -2 || k > 2) throw DomainError("moment_tail: k must lie in [-2, 2]");
  if (amplitude == 0.0) return 0.0;
  const double n = 4.0 - k;
  const double rc2 = r_c * r_c;
  const double lead = 1.0 / (2.0 * (n - 1.0) * std::pow(p_max, n - 1.0));
  const double next = (-n / (8.0 * rc2) - d / (n + 1.0) + c1 / (2.0 * rc2) +
                       c1 * c1 / (2.0 * (n + 1.0) * rc2)) /
                      std::pow(p_max, n + 1.0);
  return amplitude * (lead + next);
}

double WallAsymptotics::power_tail(double q, double p_max) const {
  if (!(q > 0.5)) {
    throw NumericalError("power_tail: momentum entropic moment diverges for order <= 1/2");
  }
  if (amplitude == 0.0) return 0.0;
  // mean of sin^(2q) over a period
  const double mean = std::exp(std::lgamma(q + 0.5) - std::lgamma(q + 1.0)) / std::sqrt(kPi);
  return std::pow(amplitude, q) * mean * std::pow(p_max, 3.0 - 6.0 * q) / (6.0 * q - 3.0);
}

double WallAsymptotics::neg_entropy_tail(double p_max) const {
  if (amplitude == 0.0) return 0.0;
  const double mean_s2_log_s2 = 0.5 - std::numbers::ln2;
  const double p3 = p_max * p_max * p_max;
  return -amplitude / (3.0 * p3) *
         (0.5 * std::log(amplitude) + mean_s2_log_s2 - 3.0 * std::log(p_max) - 1.0);
}

double WallAsymptotics::residual_bound(double p_max) const {
  const double rc2 = r_c * r_c;
  const double coeff = std::abs(d) + (c1 * c1 + c1 + 1.0) / rc2;
  return amplitude * coeff / (10.0 * std::pow(p_max, 5.0));
}

std::vector<double> MomentumSolution::density() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return v * v; });
  return out;
}

double MomentumSolution::operator()(double p) const {
  if (!(p >= 0.0)) throw DomainError("MomentumSolution: p must be non-negative");
  double sum = 0.0;
  for (std::size_t i = 0; i < r_nodes_.size(); ++i) {
    sum += r_weighted_[i] * spherical_bessel_j(state_.l, p * r_nodes_[i]);
  }
  return sum;
}

MomentumSolution momentum_wavefunction(const RadialSolution& rs, const MomentumOptions& options) {
  const QuantumState& st = rs.state();
  const double rc = st.r_c;
  const int l = st.l;
  const double w = st.omega;
  const double eps = rs.energy();

  MomentumSolution out;
  out.state_ = st;

  WallAsymptotics asym;
  const double slope = rs.wall_slope();
  asym.amplitude = 2.0 / kPi * slope * slope;
  asym.r_c = rc;
  asym.l = l;
  asym.c1 = 0.5 * l * (l + 1);
  const double c2 = (l + 2.0) * (l + 1.0) * l * (l - 1.0) / 8.0;
  const double kappa = l * (l + 1.0) / (rc * rc) + w * w * rc * rc - 2.0 * eps;
  asym.d = c2 / (rc * rc) + kappa - 2.0 * asym.c1 / (rc * rc);

  const double p_gauss = std::sqrt(2.0 * eps) + 8.0 * std::sqrt(w);
  const double phase0 = 0.5 * l * kPi;
  // The tail bound is analytic, so p_max is fixed before any transform.
  double span = options.span;
  double p_max = 0.0;
  double residual = 0.0;
  for (int attempt = 0;; ++attempt) {
    const double target = std::max(span / rc, p_gauss);
    const double k = std::ceil((target * rc - phase0) / kPi);
    p_max = (k * kPi + phase0) / rc;
    residual = asym.residual_bound(p_max);
    if (residual <= 1e-10 || attempt >= options.max_doublings) break;
    span *= 2.0;
  }

  const int r_panels = static_cast<int>(std::ceil(p_max * rc / (2.0 * kPi))) + 8;
  std::vector<double> r_bps(r_panels + 1);
  for (int i = 0; i <= r_panels; ++i) r_bps[i] = rc * i / r_panels;
  QuadratureRule r_rule = composite_rule(r_bps, options.base_order);
  out.r_nodes_ = std::move(r_rule.nodes);
  out.r_weighted_.resize(out.r_nodes_.size());
  const double pref = std::sqrt(2.0 / kPi);
  for (std::size_t i = 0; i < out.r_nodes_.size(); ++i) {
    const double r = out.r_nodes_[i];
    out.r_weighted_[i] = pref * r_rule.weights[i] * rs(r) * r * r;
  }
  auto transform = [&](std::span<const double> p, std::span<double> v) {
    if (options.parallel) {
      kernels::bessel_transform_parallel(l, out.r_nodes_, out.r_weighted_, p, v);
    } else {
      kernels::bessel_transform_serial(l, out.r_nodes_, out.r_weighted_, p, v);
    }
  };
  auto psi = [&](double p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < out.r_nodes_.size(); ++i) {
      sum += out.r_weighted_[i] * spherical_bessel_j(l, p * out.r_nodes_[i]);
    }
    return sum;
  };

  // Panels end at zeros of the asymptotic phase.
  std::vector<double> p_bps{0.0};
  for (double j = 0.0;; j += 1.0) {
    const double p = (j * kPi + phase0) / rc;
    if (p > p_max * (1.0 + 1e-12)) break;
    if (p > p_bps.back() * (1.0 + 1e-12) + 1e-300) p_bps.push_back(p);
  }
  if (p_bps.back() < p_max) p_bps.push_back(p_max);

  // A zero of psi(p) inside a panel leaves rho ln rho and rho^q non-smooth
  // there, so panel edges are moved onto the true zeros. A coarse pass finds
  // the sign changes. Panels holding less than 1e-9 of the norm are left
  // alone: the effect there is below rounding, and it also skips sign flips
  // where psi is noise.
  {
    constexpr int coarse_order = 8;
    constexpr std::size_t n = coarse_order;
    QuadratureRule coarse = composite_rule(p_bps, coarse_order);
    std::vector<double> v(coarse.nodes.size(), 0.0);
    transform(coarse.nodes, v);
    const auto& g = coarse.nodes;
    const std::size_t panels = p_bps.size() - 1;
    std::vector<double> mass(panels, 0.0);
    for (std::size_t k = 0; k < panels; ++k) {
      for (std::size_t i = k * n; i < (k + 1) * n; ++i) mass[k] += coarse.weights[i] * v[i] * v[i] * g[i] * g[i];
    }
    std::vector<double> zeros;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i - 1] == 0.0 || v[i] == 0.0 || sign_of(v[i - 1]) == sign_of(v[i])) continue;
      if (std::max(mass[(i - 1) / n], mass[i / n]) < 1e-9) continue;
      zeros.push_back(illinois(psi, g[i - 1], g[i], v[i - 1], v[i]));
    }
    if (!zeros.empty()) {
      const double spacing = kPi / rc;
      std::vector<double> bps{0.0, p_max};
      for (double z : zeros) {
        if (z > 1e-9 * p_max && z < p_max * (1.0 - 1e-9)) bps.push_back(z);
      }
      for (std::size_t k = 1; k + 1 < p_bps.size(); ++k) {
        const double p = p_bps[k];
        const bool near = std::any_of(zeros.begin(), zeros.end(),
                                      [&](double z) { return std::abs(z - p) < 0.25 * spacing; });
        if (!near) bps.push_back(p);
      }
      std::sort(bps.begin(), bps.end());
      bps.erase(std::unique(bps.begin(), bps.end(),
                            [&](double a, double b) { return b - a <= 1e-12 * p_max; }),
                bps.end());
      p_bps = std::move(bps);
    }
  }

  QuadratureRule p_rule = composite_rule(p_bps, options.base_order);
  out.grid_ = std::move(p_rule.nodes);
  out.weights_ = std::move(p_rule.weights);
  out.values_.assign(out.grid_.size(), 0.0);
  transform(out.grid_, out.values_);

  std::vector<double> rho = out.density();
  const double tabulated =
      options.parallel
          ? kernels::functional_sum_parallel(kernels::Functional::moment_of(0), out.grid_,
                                             out.weights_, rho)
          : kernels::functional_sum_serial(kernels::Functional::moment_of(0), out.grid_,
                                           out.weights_, rho);
  out.parseval_ = tabulated + asym.moment_tail(0, p_max);
  if (!(std::abs(out.parseval_ - 1.0) <= 1e-4)) {
    throw NumericalError("momentum_wavefunction: Parseval diagnostic " +
                         std::to_string(out.parseval_) + " outside 1 +/- 1e-4 for " + st.name());
  }

  const double scale = 1.0 / std::sqrt(out.parseval_);
  for (double& v : out.values_) v = std::abs(v) * scale;
  for (double& v : out.r_weighted_) v *= scale;
  asym.amplitude /= out.parseval_;
  out.asymptotics_ = asym;
  out.truncation_ = {p_max, residual / out.parseval_};
  return out;
}

}  // namespace cho
