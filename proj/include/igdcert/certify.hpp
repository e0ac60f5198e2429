#pragma once

#include <array>
#include <complex>
#include <optional>

#include "igdcert/iqc.hpp"
#include "igdcert/matrix.hpp"
#include "igdcert/rates.hpp"

namespace igdcert {

enum class CertificateKind { SectorNoiseless, SectorNoisy, OffByOneNoisy };

const char* certificate_kind_name(CertificateKind k);

struct StabilityWitness {
  double n_scalar;  // linear feedback gain, u = n_scalar * C x
  double epsilon;   // interpolation weight of the perturbed closed loop
};

/// A verified frequency-domain certificate for one spec: the rate, the
/// S-procedure multiplier lambda, the off-by-one weight gamma when used, and
/// the endpoint diagnostics F(+rho), F(-rho) that decided feasibility.
struct Certificate {
  double rho;
  double lambda;
  std::optional<double> gamma;
  CertificateKind kind;
  std::array<double, 2> endpoint_values;  // {F(+rho), F(-rho)}
  std::optional<StabilityWitness> witness;
};

/// Hermitian frequency sample of the Popov function at one circle point.
struct PopovSample {
  std::complex<double> z;
  CMat value;
};

// ---------------------------------------------------------------------------
// Plants. The gradient-descent loop x(k+1) = x(k) - alpha * grad is the
// feedback of (A, B, C) = (I, -alpha I, I); the off-by-one analysis augments
// the state with v(k+1) = L C x(k) - u(k).
// ---------------------------------------------------------------------------

LtiSystem gd_plant(double alpha, std::size_t dim = 1);
LtiSystem gd_plant_augmented(double alpha, double L, std::size_t dim = 1);

/// Input matrix for the noisy triple. The noise term enters the plant through
/// the same column as u in the x-rows; it does not drive the analysis state v
/// (v is built from the exact gradient only).
Mat noisy_input_matrix(const LtiSystem& sys, bool augmented);

// ---------------------------------------------------------------------------
// Frequency-domain evaluation
// ---------------------------------------------------------------------------

/// Popov function Pi(conj(z), z) = [G; I]^* M [G; I] with G = (zI-A)^{-1} B.
/// Throws std::domain_error when z is (numerically) an eigenvalue of A.
CMat popov_value(const LtiSystem& sys, const BlockIqc& m, std::complex<double> z);

PopovSample popov_sample(const LtiSystem& sys, const BlockIqc& m, std::complex<double> z);

struct FdiReport {
  bool holds;
  std::complex<double> worst_z;
  double worst_eig;
};

/// Samples max eig of Pi(conj(z), z) at n_samples equispaced points on
/// |z| = rho, skipping eigenvalues of A.
FdiReport fdi_sampled(const LtiSystem& sys, const BlockIqc& m, double rho, int n_samples);

/// Schur-complement form of the noisy FDI: with T = lambda(1-delta^2) I - R,
/// returns [G; lambda I]^* [[S^T T^{-1} S + Q, (T^{-1}S)^*],
///                          [T^{-1} S, T^{-1} - lambda^{-1} I]] [G; lambda I].
/// Requires lambda > 0 and T positive definite.
CMat noisy_fdi_value(const LtiSystem& sys, const BlockIqc& base, double delta, double lambda,
                     std::complex<double> z);

// ---------------------------------------------------------------------------
// Specialized endpoint polynomials for the gradient-descent plant
// ---------------------------------------------------------------------------

/// F(t, lambda) = -a^2(L-m)^2 + 2mL a^2 lambda (1-d^2)
///              + 2 a lambda (m+L)(t-1) + lambda (2 - d^2 lambda)(t-1)^2.
double f_sector(double t, double lambda, const ProblemSpec& spec);

/// Six-term polynomial F(t, rho, lambda, gamma) of the noisy off-by-one
/// frequency inequality.
double f_offbyone(double t, double rho, double lambda, double gamma, const ProblemSpec& spec);

/// Value of the noisy sector FDI on the circle |z| = rho as a function of
/// t = Re z (multiplied through by |z-1|^2 (2 + lambda(1-delta^2))): affine
/// in t, equal to f_sector at t = +-rho.
double sector_circle_value(double t, double rho, double lambda, const ProblemSpec& spec);

/// Same for the noisy off-by-one FDI (multiplied by |(z-1)z|^2 scaling):
/// quadratic in t, concave when alpha >= 1/L, equal to f_offbyone at +-rho.
double offbyone_circle_value(double t, double rho, double lambda, double gamma,
                             const ProblemSpec& spec);

/// Noiseless circle value Re((z-1+La)(conj(z)-1+ma)) as a function of t = Re z.
double noiseless_circle_value(double t, double rho, const ProblemSpec& spec);

/// Endpoint factor (t - 1 + L a)(t - 1 + m a) of the noiseless one-point FDI.
double noiseless_endpoint(double t, const ProblemSpec& spec);

/// F is quadratic in lambda at fixed t; the feasible set {F(t, .) >= 0} is a
/// closed interval (possibly empty or unbounded when delta = 0 or t = 1).
struct LambdaInterval {
  double lo, hi;
  bool empty;
};
LambdaInterval lambda_interval(double t, const ProblemSpec& spec);

/// Certificate tolerance scale: endpoint values are accepted down to
/// -1e-9 * fdi_scale.
inline double fdi_scale(const ProblemSpec& s, double lambda) {
  return s.alpha * s.alpha * s.L * s.L * (1.0 + lambda);
}
inline constexpr double kEndpointTol = 1e-9;

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

std::optional<Certificate> certify_sector_noiseless(const ProblemSpec& spec, double rho);

/// Searches lambda in [0, 2/delta^2] with F(+-rho, lambda) >= -tol by exact
/// quadratic algebra (candidate vertices and parabola crossings, no grid).
/// delta = 0 dispatches to the noiseless endpoint test.
std::optional<Certificate> certify_sector_noisy(const ProblemSpec& spec, double rho);

/// Least certifiable rate over the sector class, by bisection (to 1e-10)
/// against the exact lambda feasibility test. The bracket starts at
/// rho_gd_noisy(spec) and the top grows geometrically until feasible.
std::optional<Certificate> rho_star_sector(const ProblemSpec& spec);

/// Off-by-one certificate at rho = rho_gd_noisy(spec) with the closed-form
/// multipliers lambda* = (2 - alpha(L+m))/delta^2 and gamma* from the
/// endpoint constraint. Requires 1/L <= alpha <= 2/((1+d)L + (1-d)m); outside
/// the window it falls back to sector certification unless
/// allow_outside_window is set (experimental; reports endpoint values
/// without a supporting theorem).
std::optional<Certificate> certify_strongly_convex(const ProblemSpec& spec,
                                                   bool allow_outside_window = false);

// ---------------------------------------------------------------------------
// Stability and dissipation checks
// ---------------------------------------------------------------------------

/// Both eigenvalues of a real 2x2 matrix strictly inside the disk of radius
/// rho, decided by the two scalar Jury inequalities on the rescaled
/// characteristic polynomial (exact for 2x2).
bool schur_test(const Mat& a2, double rho);

/// Linear-feedback minimal-stability witness N = m C for the GD plant (or
/// its off-by-one augmentation), with the smallest epsilon from
/// {0} u {2^-j} making the perturbed closed loop rho-Schur. Noisy triples
/// use the control (u, e) = (N x, 0).
std::optional<StabilityWitness> minimal_stability_witness(const ProblemSpec& spec,
                                                          CertificateKind kind, double rho,
                                                          double gamma);

struct DissipationReport {
  bool ok;
  double max_eig;
};

/// Checks P > 0 and [[A^T P A - rho^2 P, A^T P B], [B^T P A, B^T P B]] + M <= 0.
DissipationReport dissipation_verify(const Mat& a, const Mat& b, const BlockIqc& m, double rho,
                                     const Mat& p);

/// Scalar-reduced feasibility search for the dissipation LMI: scalar p for
/// sector kinds, 2x2 symmetric P (per coordinate of the augmented state) for
/// the off-by-one kind. Returns a strictly feasible P (margin 1e-6) or
/// nothing; used as a certificate cross-check, not the decision procedure.
std::optional<Mat> dissipation_search_scalar(const ProblemSpec& spec, double rho,
                                             CertificateKind kind);

/// Multipliers used for building the noise-augmented IQC of a certificate.
struct CertificateMultipliers {
  double lambda;
  double gamma;  // 0 for sector kinds
};
std::optional<CertificateMultipliers> certificate_multipliers(const ProblemSpec& spec, double rho,
                                                              CertificateKind kind);

inline constexpr double kLmiMargin = 1e-6;

}  // namespace igdcert
