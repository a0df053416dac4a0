#pragma once

#include <optional>

#include "cho/kernels.hpp"
#include "cho/quadrature.hpp"
#include "cho/solver.hpp"

namespace cho {

class EigenvalueCache;

enum class Space { position, momentum };

/// Angular contribution of |Y_{l,0}|^2 to the 3D information measures.
class AngularFactor {
 public:
  explicit AngularFactor(int l, int m = 0);

  int l() const { return l_; }
  int m() const { return m_; }
  /// -int |Y|^2 ln |Y|^2 dOmega.
  double shannon_part() const { return shannon_; }
  /// Lambda_l(alpha) = int |Y|^(2 alpha) dOmega.
  double entropic_moment(double alpha) const;

 private:
  int l_;
  int m_;
  double shannon_;
};

/// View of a normalized 3D density rho(x) = rho_rad(x) |Y_{l0}|^2 in one
/// space. It refers to the solution it was built from, which must outlive it.
class Density {
 public:
  explicit Density(const RadialSolution& rs, const QuadratureSpec& spec = {});
  explicit Density(const MomentumSolution& ms, bool parallel = true);

  Space space() const { return space_; }
  const AngularFactor& angular() const { return angular_; }

  /// int g(rho_rad(x), x) x^2 dx over the whole radial axis. Position
  /// space uses adaptive quadrature with panels split at the radial nodes;
  /// momentum space sums the tabulated grid and adds the analytic tail.
  double radial_integral(const kernels::Functional& g) const;

 private:
  Space space_;
  AngularFactor angular_;
  const RadialSolution* position_ = nullptr;
  const MomentumSolution* momentum_ = nullptr;
  QuadratureSpec spec_;
  bool parallel_ = true;
};

/// Full 3D Shannon entropy in nats.
double shannon_entropy(const Density& d);
/// Full 3D Renyi entropy of the given order (> 0, != 1).
double renyi_entropy(const Density& d, double order);
/// Onicescu energy int rho^2.
double onicescu_energy(const Density& d);
/// beta = alpha / (2 alpha - 1), the order paired with alpha by
/// 1/alpha + 1/beta = 2; alpha must exceed 1/2.
double conjugate_order(double alpha);

/// <r^k> for k in {-2, 0, 2}.
double radial_moment(const RadialSolution& rs, int k, const QuadratureSpec& spec = {});
/// <p^k> for k in {-2, 0, 2}, including the analytic large-p tail.
double momentum_moment(const MomentumSolution& ms, int k, bool parallel = true);

struct Moments {
  double r2 = 0.0;   // <r^2>
  double rm2 = 0.0;  // <r^-2>
  double p2 = 0.0;   // <p^2>
  double pm2 = 0.0;  // <p^-2>
};

struct FisherPair {
  double position = 0.0;
  double momentum = 0.0;
};

/// I_r = 4<p^2> - 2(2l+1)|m|<r^-2>, I_p = 4<r^2> - 2(2l+1)|m|<p^-2>.
/// A negative result raises NumericalError.
FisherPair fisher_information(const Moments& mom, int l, int m);

/// order * exp(b * disorder). order must be positive; an exponent beyond
/// the double range raises NumericalError carrying it.
double complexity(double order_val, double disorder_val, double b);

/// Values of one measure in position, momentum and total space.
struct Triple {
  double r = 0.0;
  double p = 0.0;
  double t = 0.0;
};

/// Every information measure of one state at one r_c.
struct MeasureSet {
  QuantumState state;
  double energy = 0.0;
  double alpha = 0.6;
  double beta = 3.0;
  Triple shannon;  // S
  Triple renyi;    // R^alpha, R^beta, sum
  Triple onicescu; // E
  Triple fisher;   // I
  Moments moments;
  double parseval = 1.0;
  double p_max = 0.0;
};

/// C = A exp(b B) for A in {E, I} and B in {S, R}, per space and total.
struct ComplexityReport {
  double b = 1.0;
  Triple es;
  Triple er;
  Triple is;
  Triple ir;
};

struct PipelineOptions {
  QuadratureSpec quadrature{};
  MomentumOptions momentum{};
};

/// Solve, transform, and evaluate all measures for one state. Errors are
/// rethrown as StageError naming the failing stage. When `cache` is given
/// the eigenvalue is taken from (and stored into) it.
MeasureSet measure_set(const QuantumState& state, double alpha, double beta,
                       const PipelineOptions& options = {}, EigenvalueCache* cache = nullptr);

/// Assembles the four complexities; totals use S_t, R_t, E_t and I_t.
ComplexityReport complexity_report(const MeasureSet& mset, double b);

}  // namespace cho
