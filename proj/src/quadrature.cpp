#include "cho/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

#include "cho/error.hpp"

namespace cho {

void QuadratureSpec::validate() const {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-6)) {
    throw DomainError("QuadratureSpec: rel_tol must lie in [1e-14, 1e-6]");
  }
  if (!(abs_tol >= 0.0)) throw DomainError("QuadratureSpec: abs_tol must be >= 0");
  if (base_order < 16 || base_order > 256) {
    throw DomainError("QuadratureSpec: base_order must lie in [16, 256]");
  }
  if (max_panels < 2) throw DomainError("QuadratureSpec: max_panels must be >= 2");
}

namespace {

QuadratureRule compute_reference_rule(int order) {
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 1; k < order; ++k) {
        const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        // one more pass to refresh the derivative at the converged node
        p0 = 1.0;
        p1 = x;
        for (int k = 1; k < order; ++k) {
          const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
          p0 = p1;
          p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

double apply_rule(const QuadratureRule& ref, const Integrand& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    sum += ref.weights[i] * f(mid + half * ref.nodes[i]);
  }
  return sum * half;
}

struct Panel {
  double lo;
  double hi;
  double coarse;  // one rule over the panel
  double left;    // rule over the left half
  double right;   // rule over the right half
  double err() const { return std::abs(coarse - (left + right)); }
  double value() const { return left + right; }
};

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const { return a.err() < b.err(); }
};

}  // namespace

const QuadratureRule& reference_rule(int order) {
  if (order < 1 || order > 256) {
    throw DomainError("reference_rule: order must lie in [1, 256]");
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(compute_reference_rule(order));
  return *slot;
}

QuadratureRule gauss_legendre_nodes(int order, double lo, double hi) {
  if (order < 2 || order > 256) {
    throw DomainError("gauss_legendre_nodes: order must lie in [2, 256]");
  }
  const QuadratureRule& ref = reference_rule(order);
  QuadratureRule out;
  out.nodes.resize(order);
  out.weights.resize(order);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < order; ++i) {
    out.nodes[i] = mid + half * ref.nodes[i];
    out.weights[i] = half * ref.weights[i];
  }
  return out;
}

QuadratureRule composite_rule(std::span<const double> breakpoints, int order) {
  if (breakpoints.size() < 2) {
    throw DomainError("composite_rule: need at least two breakpoints");
  }
  const QuadratureRule& ref = reference_rule(order);
  QuadratureRule out;
  const std::size_t panels = breakpoints.size() - 1;
  out.nodes.reserve(panels * order);
  out.weights.reserve(panels * order);
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = breakpoints[k];
    const double hi = breakpoints[k + 1];
    if (!(hi > lo)) throw DomainError("composite_rule: breakpoints must increase");
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(mid + half * ref.nodes[i]);
      out.weights.push_back(half * ref.weights[i]);
    }
  }
  return out;
}

QuadratureResult integrate_finite(const Integrand& f, double lo, double hi,
                                  const QuadratureSpec& spec,
                                  std::span<const double> breakpoints) {
  spec.validate();
  if (!(lo < hi)) throw DomainError("integrate_finite: need lo < hi");
  const QuadratureRule& ref = reference_rule(spec.base_order);

  std::vector<double> edges{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  auto make_panel = [&](double a, double b, double coarse) {
    const double m = 0.5 * (a + b);
    return Panel{a, b, coarse, apply_rule(ref, f, a, m), apply_rule(ref, f, m, b)};
  };

  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    Panel p = make_panel(edges[k], edges[k + 1], apply_rule(ref, f, edges[k], edges[k + 1]));
    total += p.value();
    total_err += p.err();
    queue.push(p);
  }

  auto target = [&] { return std::max(spec.rel_tol * std::abs(total), spec.abs_tol); };
  int panels = static_cast<int>(queue.size());
  while (total_err > target()) {
    if (panels >= spec.max_panels) {
      throw AccuracyError("integrate_finite: max_panels exhausted", total, total_err);
    }
    Panel worst = queue.top();
    queue.pop();
    const double m = 0.5 * (worst.lo + worst.hi);
    if (!(m > worst.lo && m < worst.hi)) {
      throw AccuracyError("integrate_finite: panel width underflow", total, total_err);
    }
    Panel a = make_panel(worst.lo, m, worst.left);
    Panel b = make_panel(m, worst.hi, worst.right);
    total += a.value() + b.value() - worst.value();
    total_err += a.err() + b.err() - worst.err();
    queue.push(a);
    queue.push(b);
    ++panels;
    if (!std::isfinite(total)) {
      throw NumericalError("integrate_finite: non-finite integrand");
    }
  }

  // Re-sum from the panels to shed the drift of the running updates.
  double value = 0.0;
  double err = 0.0;
  while (!queue.empty()) {
    value += queue.top().value();
    err += queue.top().err();
    queue.pop();
  }
  return {value, err, panels};
}

SemiInfiniteResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec,
                                           double decay_scale) {
  if (!(decay_scale > 0.0)) {
    throw DomainError("integrate_semi_infinite: decay_scale must be positive");
  }
  // Tail estimate: the largest |f| sampled on [P, P + sigma] times the
  // Gaussian tail length sigma^2/(2P), doubled for the polynomial prefactor.
  auto tail_estimate = [&](double p) {
    double peak = 0.0;
    for (int i = 0; i <= 16; ++i) peak = std::max(peak, std::abs(f(p + decay_scale * i / 16.0)));
    return peak * decay_scale * decay_scale / p;
  };
  double p_max = 4.0 * decay_scale;
  for (int step = 0; step < 64; ++step, p_max += decay_scale) {
    const QuadratureResult r = integrate_finite(f, 0.0, p_max, spec);
    const double tail = tail_estimate(p_max);
    if (tail <= 1e-10 * std::abs(r.value) || tail < 1e-300) {
      return {r.value, r.err_est + tail, {p_max, tail}};
    }
  }
  throw NumericalError("integrate_semi_infinite: tail does not decay within 64 scales");
}

}  // namespace cho
