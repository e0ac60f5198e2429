#pragma once

#include <limits>

namespace igdcert {

/// Problem data for one certification: sector/convexity moduli 0 < m < L,
/// step size alpha > 0, and relative noise level delta in [0, 1) bounding
/// |e(k)| <= delta |grad f(x(k))|.
struct ProblemSpec {
  double m;
  double L;
  double alpha;
  double delta;

  ProblemSpec(double m_, double L_, double alpha_, double delta_ = 0.0);

  double kappa() const { return L / m; }
};

enum class FunctionClass { Sector, StronglyConvex };

enum class RegimeKind {
  NoiselessSector,
  Prop1SmallStep,
  Prop1LargeStep,
  Prop2Interior,
  Prop3StronglyConvex,
  Uncertifiable,
};

const char* regime_name(RegimeKind k);

/// Certified worst-case rate together with the branch that produced it.
/// certified_rho >= 1 is reported as-is (divergence is informative in
/// sweeps), never clamped. Uncertifiable carries +infinity.
struct RateRegime {
  RegimeKind kind;
  double certified_rho;

  bool divergent() const { return certified_rho >= 1.0; }
  bool certifiable() const { return certified_rho < std::numeric_limits<double>::infinity(); }
};

/// Absolute tolerance for step-size branch comparisons (alpha vs alpha_-,
/// alpha_+); ties resolve toward the exactly-characterized branch.
inline constexpr double kBranchTol = 1e-12;

/// Noiseless worst-case rate max(1 - alpha m, alpha L - 1). Requires
/// 0 < m < L (throws std::domain_error otherwise) and alpha >= 0.
double rho_gd(double m, double L, double alpha);

/// Quadratic lower bound under relative noise:
/// max(1 - (1-delta) alpha m, (1+delta) alpha L - 1).
double rho_gd_noisy(const ProblemSpec& spec);

/// Largest small step size for which the noisy rate is achieved over the
/// sector class; may be <= 0 (positive iff delta < 2/(kappa+1)).
double alpha_minus(double m, double L, double delta);

/// Smallest large step size for which the noisy rate is achieved; always > 0
/// and < 2/(L+m) for delta > 0.
double alpha_plus(double m, double L, double delta);

/// Interior-regime certified rate; requires alpha < 2/(L+m) (throws
/// std::domain_error otherwise, the square-root argument is no longer
/// guaranteed positive).
double prop2_rate(const ProblemSpec& spec);

/// Best achievable noisy rate over all step sizes:
/// ((1+delta) kappa - (1-delta)) / ((1+delta) kappa + (1-delta)).
double prop3_sharp_rate(double m, double L, double delta);

/// Dispatches the spec to the matching certification branch. Never returns a
/// rate below rho_gd_noisy(spec). The strongly convex class falls back to the
/// sector result outside the proven step-size window.
RateRegime classify_regime(const ProblemSpec& spec, FunctionClass cls);

}  // namespace igdcert
