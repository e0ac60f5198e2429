#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "igdcert/iqc.hpp"
#include "igdcert/rates.hpp"

namespace igdcert {

/// Function zoo for the adversarial harness. All members lie in S(m, L)
/// about x_star; all except GainOscillator (for large frequency) also lie in
/// F(m, L). Only gradients are ever evaluated.
struct TestFunction {
  enum class Kind { QuadraticGain, DiagonalQuadratic, SlopeZigzag, GainOscillator };

  Kind kind;
  double m, L;
  std::size_t dim;
  std::vector<double> x_star;

  double gain = 0.0;                 // QuadraticGain
  std::vector<double> spectrum;      // DiagonalQuadratic
  std::vector<double> breakpoints;   // SlopeZigzag (positive, ascending)
  double frequency = 0.0;            // GainOscillator

  static TestFunction quadratic_gain(double k, double m, double L, std::size_t dim = 1,
                                     std::vector<double> x_star = {});
  static TestFunction diagonal_quadratic(std::vector<double> spectrum, double m, double L,
                                         std::vector<double> x_star = {});
  static TestFunction slope_zigzag(std::vector<double> breakpoints, double m, double L,
                                   double x_star = 0.0);
  static TestFunction gain_oscillator(double frequency, double m, double L, double x_star = 0.0);

  /// Gradient at a raw (unshifted) point.
  std::vector<double> gradient(const std::vector<double>& x) const;
  /// Gradient as a function of the offset y = x - x_star.
  std::vector<double> gradient_at_offset(const std::vector<double>& y) const;

  const char* kind_name() const;
};

struct NoisePolicy {
  enum class Kind { Zero, ScaledPlus, ScaledMinus, RandomSphere, GreedyAdversary };

  Kind kind = Kind::Zero;
  double delta = 0.0;
  std::uint64_t seed = 0;  // RandomSphere; recorded in every output

  const char* kind_name() const;
  static std::optional<NoisePolicy> parse(const std::string& name, double delta,
                                          std::uint64_t seed);
};

/// Worst one-step adversary: e = -delta |grad| w/|w| with w = y - alpha*grad
/// (y the offset from x_star), which maximizes |y - alpha(grad + e)| over the
/// ball |e| <= delta |grad|. w = 0 ties break along the first coordinate.
std::vector<double> greedy_noise(const std::vector<double>& y, const std::vector<double>& grad,
                                 double alpha, double delta);

/// Runs x(k+1) = x(k) - alpha (grad f(x(k)) + e(k)) for `steps` steps and
/// fills the off-by-one sequence v(k+1) = L (x(k)-x*) - u(k), v(0) = 0.
/// States above 1e12 in norm abort the run early with traj.diverged set.
Trajectory run_inexact_gd(const TestFunction& f, const std::vector<double>& x0, double alpha,
                          const NoisePolicy& policy, int steps);

struct RateEstimate {
  double rate;
  bool reached_fixed_point;
};

/// Sup-norm estimator matching the c * rho^k envelope: the max over
/// k > burn_in of (|x(k)-x*| / |x(burn_in)-x*|)^(1/(k-burn_in)).
RateEstimate empirical_rate(const Trajectory& traj, int burn_in);

/// Empirical envelope constant max_k |x(k)-x*| / (rho^k |x(0)-x*|).
double empirical_envelope_constant(const Trajectory& traj, double rho);

struct WitnessResult {
  Trajectory traj;
  double rate;           // max(|1-(1+d)aL|, |1-(1-d)am|), achieved exactly
  bool l_branch_won;
};

/// Quadratic lower-bound witness: scaled noise e = +-delta grad on the
/// extreme quadratics turns the iteration into an exactly linear recursion
/// with rate matching the corresponding rho_gd_noisy branch.
WitnessResult lower_bound_witness(const ProblemSpec& spec);

struct LyapunovReport {
  bool ok;
  std::ptrdiff_t first_violation;  // -1 when ok
  double worst_residual;           // max over steps of (lhs - rhs)/scale
};

/// One-step dissipation consequence along a stored trajectory:
/// <P z(k+1), z(k+1)> <= rho^2 <P z(k), z(k)> - sigma_M(k), where z stacks
/// (x) or (x, v) per coordinate and P acts blockwise (1x1 or 2x2).
LyapunovReport lyapunov_decay_check(const Trajectory& traj, const BlockIqc& m_aug, double rho,
                                    const Mat& p);

struct SeparationWitness {
  Trajectory sequence;     // two-point free state sequence
  double min_scaled_sum;   // negative partial sum certifying non-membership
  double x_low_gain;       // point with gain ratio near m
  double x_high_gain;      // point with gain ratio near L
};

/// Searches for a state sequence of f whose off-by-one partial sums go
/// negative (IQC membership failure), separating S(m,L) from F(m,L). The
/// IQC is a statement over arbitrary state sequences, so two-point sequences
/// built from the function's gain structure suffice.
std::optional<SeparationWitness> find_offbyone_violation(const TestFunction& f, double rho,
                                                         double gamma);

inline constexpr double kDivergenceGuard = 1e12;

}  // namespace igdcert
