#pragma once

// Data-parallel inner loops of the momentum-space pipeline. Every kernel has
// a serial reference version, kept for testing and benchmarking, and an
// OpenMP version used in production. Both produce results that do not
// depend on the number of threads.

#include <span>

namespace cho::kernels {

/// out[j] = sum_i weighted[i] * j_l(p[j] * r[i]).
///
/// `weighted` carries everything but the Bessel kernel (quadrature weight,
/// radial function, r^2 and normalization prefactor).
void bessel_transform_serial(int l, std::span<const double> r, std::span<const double> weighted,
                             std::span<const double> p, std::span<double> out);
void bessel_transform_parallel(int l, std::span<const double> r, std::span<const double> weighted,
                               std::span<const double> p, std::span<double> out);

/// Pointwise radial functional g(rho, x) of a tabulated density.
struct Functional {
  enum class Kind { power, neg_entropy, moment };
  Kind kind = Kind::power;
  double order = 1.0;  // exponent q of rho^q
  int moment = 0;      // k of rho x^k

  static Functional power(double q) { return {Kind::power, q, 0}; }
  static Functional neg_entropy() { return {Kind::neg_entropy, 1.0, 0}; }
  static Functional moment_of(int k) { return {Kind::moment, 1.0, k}; }

  /// g(rho, x) * x^2.
  double operator()(double rho, double x) const;
};

/// sum_j w[j] * g(rho[j], x[j]) * x[j]^2, accumulated over 64 fixed
/// contiguous blocks that are then added in order.
double functional_sum_serial(const Functional& g, std::span<const double> x,
                             std::span<const double> w, std::span<const double> rho);
/// Same blocks computed concurrently; bitwise equal to the serial version
/// for every thread count.
double functional_sum_parallel(const Functional& g, std::span<const double> x,
                               std::span<const double> w, std::span<const double> rho);

/// Number of threads an OpenMP parallel region would use (1 without OpenMP).
int max_threads();
/// Sets the OpenMP thread count; ignored without OpenMP.
void set_threads(int n);

}  // namespace cho::kernels
