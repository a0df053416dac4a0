#include "cho/kernels.hpp"

#include <array>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cho/error.hpp"
#include "cho/specfun.hpp"

namespace cho::kernels {
namespace {

constexpr std::size_t kBlocks = 64;

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DomainError(std::string(what) + ": span sizes differ");
}

}  // namespace

double Functional::operator()(double rho, double x) const {
  const double x2 = x * x;
  switch (kind) {
    case Kind::power:
      return rho > 0.0 ? std::pow(rho, order) * x2 : 0.0;
    case Kind::neg_entropy:
      return rho < 1e-300 ? 0.0 : -rho * std::log(rho) * x2;
    case Kind::moment:
      return rho * std::pow(x, moment) * x2;
  }
  return 0.0;
}

void bessel_transform_serial(int l, std::span<const double> r, std::span<const double> weighted,
                             std::span<const double> p, std::span<double> out) {
  check_sizes(r.size(), weighted.size(), "bessel_transform_serial");
  check_sizes(p.size(), out.size(), "bessel_transform_serial");
  for (std::size_t j = 0; j < p.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      sum += weighted[i] * spherical_bessel_j(l, p[j] * r[i]);
    }
    out[j] = sum;
  }
}

void bessel_transform_parallel(int l, std::span<const double> r, std::span<const double> weighted,
                               std::span<const double> p, std::span<double> out) {
  check_sizes(r.size(), weighted.size(), "bessel_transform_parallel");
  check_sizes(p.size(), out.size(), "bessel_transform_parallel");
  const auto np = static_cast<std::ptrdiff_t>(p.size());
  const std::size_t nr = r.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < np; ++j) {
    const double pj = p[j];
    double sum = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      sum += weighted[i] * spherical_bessel_j(l, pj * r[i]);
    }
    out[j] = sum;
  }
}

double functional_sum_serial(const Functional& g, std::span<const double> x,
                             std::span<const double> w, std::span<const double> rho) {
  check_sizes(x.size(), w.size(), "functional_sum_serial");
  check_sizes(x.size(), rho.size(), "functional_sum_serial");
  // Same block order as the parallel version, so the two agree bit for bit.
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t b = 0; b < kBlocks; ++b) {
    double sum = 0.0;
    for (std::size_t j = n * b / kBlocks; j < n * (b + 1) / kBlocks; ++j) sum += w[j] * g(rho[j], x[j]);
    total += sum;
  }
  return total;
}

double functional_sum_parallel(const Functional& g, std::span<const double> x,
                               std::span<const double> w, std::span<const double> rho) {
  check_sizes(x.size(), w.size(), "functional_sum_parallel");
  check_sizes(x.size(), rho.size(), "functional_sum_parallel");
  const std::size_t n = x.size();
  std::array<double, kBlocks> partial{};
  const auto blocks = static_cast<std::ptrdiff_t>(kBlocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t lo = n * b / kBlocks;
    const std::size_t hi = n * (b + 1) / kBlocks;
    double sum = 0.0;
    for (std::size_t j = lo; j < hi; ++j) sum += w[j] * g(rho[j], x[j]);
    partial[b] = sum;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace cho::kernels
