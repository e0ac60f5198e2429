#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "igdcert/matrix.hpp"

namespace igdcert {

/// Discrete LTI plant x(k+1) = A x(k) + B u(k) with measured output y = C x.
struct LtiSystem {
  Mat A;  // state_dim x state_dim
  Mat B;  // state_dim x input_dim
  Mat C;  // output_dim x state_dim

  LtiSystem(Mat a, Mat b, Mat c);

  std::size_t state_dim() const { return A.rows(); }
  std::size_t input_dim() const { return B.cols(); }
};

/// Symmetric quadratic-constraint matrix M = [[Q, S^T], [S, R]] acting on
/// (state, input) pairs.
struct BlockIqc {
  Mat Q;  // state_dim x state_dim, symmetric
  Mat S;  // input_dim x state_dim
  Mat R;  // input_dim x input_dim, symmetric

  BlockIqc(Mat q, Mat s, Mat r);

  std::size_t state_dim() const { return Q.rows(); }
  std::size_t input_dim() const { return R.rows(); }

  Mat assembled() const;
  /// <Qx,x> + 2<Sx,u> + <Ru,u>
  double form(const std::vector<double>& x, const std::vector<double>& u) const;
};

/// Sector IQC matrix of the constraint <Ly - u, u - my> >= 0 with y = Cx:
/// Q = -2LmC^TC, S = (L+m)C, R = -2I.
BlockIqc sector_matrix(const Mat& C, double m, double L);

/// Weighted off-by-one IQC over the augmented state (x, v) and input u,
/// where v(k+1) = L C x(k) - u(k). gamma = 0 reduces to the sector matrix
/// padded with zero v-blocks.
BlockIqc off_by_one_matrix(const Mat& C, double m, double L, double gamma);

struct NoiseAugmented {
  BlockIqc M;              // input doubled to (u, e)
  bool r_block_admissible;  // R + lambda delta^2 I <= 0
  double r_block_max_eig;
};

/// S-procedure combination of a base IQC with the relative-error bound
/// |e| <= delta |u|: input blocks become [[R + lambda delta^2 I, 0], [0, -lambda I]].
NoiseAugmented noise_augment(const BlockIqc& m, double delta, double lambda);

/// One simulated or constructed run. States are stored relative to x_star
/// (the IQC machinery assumes the equilibrium sits at the origin); public
/// entry points accept arbitrary x_star and shift.
struct Trajectory {
  std::vector<std::vector<double>> x;  // shifted states
  std::vector<std::vector<double>> u;  // gradient inputs
  std::vector<std::vector<double>> e;  // noise terms (may be empty)
  std::vector<std::vector<double>> v;  // off-by-one states, v[0] = 0 (may be empty)
  std::vector<double> x_star;
  std::uint64_t seed = 0;
  bool diverged = false;

  std::size_t length() const { return x.size(); }
  std::size_t dim() const { return x.empty() ? 0 : x[0].size(); }
};

/// Rescaled partial sums of the rho-IQC: returns T_N = rho^{2N} S_N computed
/// by T_N = rho^2 T_{N-1} + sigma(N), which has the same sign as the true
/// weighted sum S_N and avoids rho^{-2k} blowup on long horizons.
/// State/input columns are stacked from the trajectory to match the matrix
/// dimensions: (x) or (x,v) states, (u) or (u,e) inputs.
std::vector<double> iqc_partial_sums(const Trajectory& traj, const BlockIqc& m, double rho);

struct IqcMembership {
  bool member;
  double min_scaled_sum;
  std::ptrdiff_t first_violation;  // -1 when member
};

IqcMembership iqc_member(const Trajectory& traj, const BlockIqc& m, double rho);

using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct MembershipReport {
  bool ok;
  double worst_violation;      // max of the sector/monotone form, relative scale
  std::vector<double> worst_x;  // witness point (or first element of the pair)
  std::vector<double> worst_y;  // second element of the pair (monotone check)
};

/// Sample-based check of <m(x-x*) - g(x), L(x-x*) - g(x)> <= 0. Violations
/// are measured relative to L^2 |x-x*|^2 with tolerance 1e-9.
MembershipReport sector_membership_check(const GradientFn& grad,
                                         const std::vector<std::vector<double>>& points,
                                         double m, double L, const std::vector<double>& x_star);

/// Pairwise strong-monotonicity / co-coercivity check of
/// <g(x)-g(y) - m(x-y), g(x)-g(y) - L(x-y)> <= 0.
MembershipReport monotone_membership_check(
    const GradientFn& grad,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs, double m,
    double L);

inline constexpr double kMembershipTol = 1e-9;

}  // namespace igdcert
