#pragma once

// Real-argument special functions used by the exact confined-oscillator
// solution: Kummer's 1F1, spherical Bessel j_l and Legendre P_l.

namespace cho {

/// Arguments of 1F1(a; b; z).
struct KummerParams {
  double a = 0.0;
  double b = 1.0;
  double z = 0.0;
};

/// Largest |z| served by the power series.
inline constexpr double kKummerSeriesZMax = 500.0;
/// Iteration cap of the series; reaching it raises NumericalError.
inline constexpr int kKummerMaxTerms = 10000;

/// Confluent hypergeometric function 1F1(a; b; z) by direct power series
/// with Neumaier-compensated summation. Negative z goes through Kummer's
/// transformation e^z 1F1(b-a; b; -z) unless the series terminates.
///
/// Valid for b not a non-positive integer and |z| <= 500. Throws
/// DomainError outside that range and NumericalError (with a, b, z in the
/// message) when the series does not settle within kKummerMaxTerms.
double kummer_1f1(const KummerParams& p);

/// d/dz 1F1(a; b; z) = (a/b) 1F1(a+1; b+1; z).
double kummer_1f1_dz(const KummerParams& p);

/// Spherical Bessel function of the first kind for l in [0, 4] and x >= 0.
///
/// Closed trigonometric forms above an l-dependent crossover, Taylor series
/// below it (see spherical_bessel_crossover).
double spherical_bessel_j(int l, double x);

/// Crossover point between the Taylor branch and the closed form.
double spherical_bessel_crossover(int l);

/// Legendre polynomial P_l(x), |x| <= 1, by the three-term upward recurrence.
double legendre_p(int l, double x);

}  // namespace cho
