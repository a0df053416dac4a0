#include "oracles/fd_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace cho::oracle {
namespace {

struct Tridiagonal {
  std::vector<double> diag;
  double off = 0.0;  // constant off-diagonal
};

Tridiagonal build(const QuantumState& s, int mesh) {
  if (mesh < 500) throw std::invalid_argument("fd oracle: mesh must be >= 500");
  const double h = s.r_c / mesh;
  Tridiagonal t;
  t.diag.resize(static_cast<std::size_t>(mesh - 1));
  const double ll = s.l * (s.l + 1.0);
  for (int i = 1; i < mesh; ++i) {
    const double r = i * h;
    t.diag[static_cast<std::size_t>(i - 1)] = 1.0 / (h * h) + ll / (2.0 * r * r) + 0.5 * s.omega * s.omega * r * r;
  }
  t.off = -0.5 / (h * h);
  return t;
}

// Number of eigenvalues below x.
int sturm_count(const Tridiagonal& t, double x) {
  int count = 0;
  double q = 1.0;
  const double off2 = t.off * t.off;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    q = t.diag[i] - x - (i ? off2 / q : 0.0);
    if (q == 0.0) q = 1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

double kth_eigenvalue(const Tridiagonal& t, int k) {
  // Gershgorin bounds
  double lo = 1e300, hi = -1e300;
  for (double d : t.diag) {
    lo = std::min(lo, d - 2.0 * std::fabs(t.off));
    hi = std::max(hi, d + 2.0 * std::fabs(t.off));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::fabs(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double fd_eigenvalue(const QuantumState& state, int mesh) {
  return kth_eigenvalue(build(state, mesh), state.n_r);
}

double fd_oracle_energy(const QuantumState& state, int mesh) {
  const double coarse = fd_eigenvalue(state, mesh);
  const double fine = fd_eigenvalue(state, 2 * mesh);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> fd_nodes(const QuantumState& state, int mesh) {
  const Tridiagonal t = build(state, mesh);
  const double e = kth_eigenvalue(t, state.n_r);
  const std::size_t n = t.diag.size();
  // Inverse iteration with a slightly shifted eigenvalue; Thomas algorithm.
  const double shift = e * (1.0 - 1e-10) - 1e-12;
  std::vector<double> v(n, 1.0), c(n), d(n);
  for (int it = 0; it < 4; ++it) {
    c[0] = t.off / (t.diag[0] - shift);
    d[0] = v[0] / (t.diag[0] - shift);
    for (std::size_t i = 1; i < n; ++i) {
      const double m = (t.diag[i] - shift) - t.off * c[i - 1];
      c[i] = t.off / m;
      d[i] = (v[i] - t.off * d[i - 1]) / m;
    }
    v[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) v[i] = d[i] - c[i] * v[i + 1];
    double norm = 0.0;
    for (double x : v) norm = std::max(norm, std::fabs(x));
    for (double& x : v) x /= norm;
  }
  const double h = state.r_c / mesh;
  std::vector<double> nodes;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if ((v[i] > 0.0) != (v[i + 1] > 0.0)) {
      const double r0 = (static_cast<double>(i) + 1.0) * h;
      nodes.push_back(r0 + h * v[i] / (v[i] - v[i + 1]));
    }
  }
  return nodes;
}

}  // namespace cho::oracle
