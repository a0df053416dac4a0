#include "cho/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cho/error.hpp"

namespace cho {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::string describe(const KummerParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << p.a << ", b=" << p.b << ", z=" << p.z << ")";
  return os.str();
}

bool is_nonpositive_integer(double b) {
  return b <= 0.0 && std::floor(b) == b;
}

// Direct power series.
double kummer_series(const KummerParams& p) {
  CompensatedSum sum;
  double term = 1.0;
  sum.add(term);
  if (p.z == 0.0) return 1.0;

  // Terms may grow while j < -a or while |(a+j) z| > (b+j)(j+1); only test
  // for convergence once the ratio has dropped below one for good.
  constexpr double eps = std::numeric_limits<double>::epsilon() * 0.25;
  int small_run = 0;
  for (int j = 0; j < kKummerMaxTerms; ++j) {
    const double aj = p.a + j;
    if (aj == 0.0) return sum.value();  // terminating polynomial
    term *= aj / (p.b + j) * p.z / (j + 1);
    sum.add(term);
    if (!std::isfinite(term)) break;
    const double ratio = std::abs((aj + 1.0) * p.z / ((p.b + j + 1.0) * (j + 2.0)));
    if (ratio < 1.0 && std::abs(term) <= eps * std::abs(sum.value())) {
      if (++small_run >= 2) return sum.value();
    } else {
      small_run = 0;
    }
  }
  throw NumericalError("kummer_1f1: series did not converge " + describe(p));
}

}  // namespace

double kummer_1f1(const KummerParams& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.z)) {
    throw DomainError("kummer_1f1: non-finite argument " + describe(p));
  }
  if (is_nonpositive_integer(p.b)) {
    throw DomainError("kummer_1f1: b is a non-positive integer " + describe(p));
  }
  if (std::abs(p.z) > kKummerSeriesZMax) {
    throw DomainError("kummer_1f1: z outside the series range " + describe(p));
  }
  // Negative z: the alternating series cancels badly, so apply Kummer's
  // transformation unless the series terminates (then every term is positive).
  if (p.z < 0.0 && !is_nonpositive_integer(p.a)) {
    return std::exp(p.z) * kummer_series({p.b - p.a, p.b, -p.z});
  }
  return kummer_series(p);
}

double kummer_1f1_dz(const KummerParams& p) {
  if (p.a == 0.0) return 0.0;
  return p.a / p.b * kummer_1f1({p.a + 1.0, p.b + 1.0, p.z});
}

double spherical_bessel_crossover(int l) {
  return l <= 1 ? 0.5 : 0.5 * l + 0.5;
}

double spherical_bessel_j(int l, double x) {
  if (l < 0 || l > 4) {
    throw DomainError("spherical_bessel_j: l must be in [0, 4]");
  }
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("spherical_bessel_j: x must be finite and non-negative");
  }

  if (x < spherical_bessel_crossover(l)) {
    // x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    double lead = 1.0;
    for (int k = 0; k < l; ++k) lead *= x / (2 * k + 3);
    const double h = -0.5 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 40; ++k) {
      term *= h / ((k + 1) * (2.0 * l + 2 * k + 3));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return lead * sum;
  }

  const double s = std::sin(x);
  const double c = std::cos(x);
  const double inv = 1.0 / x;
  switch (l) {
    case 0:
      return s * inv;
    case 1:
      return (s * inv - c) * inv;
    case 2: {
      const double i2 = inv * inv;
      return (3.0 * i2 - 1.0) * s * inv - 3.0 * c * i2;
    }
    case 3: {
      const double i2 = inv * inv;
      return ((15.0 * i2 - 6.0) * s * inv - (15.0 * i2 - 1.0) * c) * inv;
    }
    default: {
      const double i2 = inv * inv;
      return ((105.0 * i2 * i2 - 45.0 * i2 + 1.0) * s - (105.0 * i2 - 10.0) * c * inv) * inv;
    }
  }
}

double legendre_p(int l, double x) {
  if (l < 0) throw DomainError("legendre_p: l must be non-negative");
  if (!(std::abs(x) <= 1.0)) throw DomainError("legendre_p: |x| must be <= 1");
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < l; ++k) {
    const double next = ((2 * k + 1) * x * cur - k * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace cho
