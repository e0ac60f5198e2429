#include "igdcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace igdcert {

const char* certificate_kind_name(CertificateKind k) {
  switch (k) {
    case CertificateKind::SectorNoiseless: return "sector-noiseless";
    case CertificateKind::SectorNoisy: return "sector-noisy";
    case CertificateKind::OffByOneNoisy: return "off-by-one-noisy";
  }
  return "unknown";
}

LtiSystem gd_plant(double alpha, std::size_t dim) {
  Mat a = Mat::identity(dim);
  Mat b = (-alpha) * Mat::identity(dim);
  Mat c = Mat::identity(dim);
  return {std::move(a), std::move(b), std::move(c)};
}

LtiSystem gd_plant_augmented(double alpha, double L, std::size_t dim) {
  Mat a(2 * dim, 2 * dim);
  a.set_block(0, 0, Mat::identity(dim));
  a.set_block(dim, 0, L * Mat::identity(dim));
  Mat b(2 * dim, dim);
  b.set_block(0, 0, (-alpha) * Mat::identity(dim));
  b.set_block(dim, 0, (-1.0) * Mat::identity(dim));
  Mat c(dim, 2 * dim);
  c.set_block(0, 0, Mat::identity(dim));
  return {std::move(a), std::move(b), std::move(c)};
}

Mat noisy_input_matrix(const LtiSystem& sys, bool augmented) {
  const std::size_t n = sys.input_dim();
  Mat b2(sys.state_dim(), 2 * n);
  b2.set_block(0, 0, sys.B);
  if (!augmented) {
    b2.set_block(0, n, sys.B);
  } else {
    // noise reaches the x-rows only; v is an analysis variable driven by the
    // exact gradient
    Mat be(sys.state_dim(), n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) be(i, j) = sys.B(i, j);
    b2.set_block(0, n, be);
  }
  return b2;
}

namespace {

CMat resolvent_input(const Mat& a, const Mat& b, cplx z) {
  const std::size_t d = a.rows();
  CMat za = CMat::identity(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) za(i, j) = (i == j ? z : cplx{}) - a(i, j);
  const double scale = std::max(1.0, std::pow(std::abs(z) + a.max_abs(), static_cast<double>(d)));
  if (abs_det(za) <= 1e-12 * scale)
    throw std::domain_error("popov_value: z is an eigenvalue of A on the sampling circle");
  return lu_solve(za, CMat::from_real(b));
}

CMat hermitize(const CMat& a) {
  CMat h(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return h;
}

}  // namespace

CMat popov_value(const LtiSystem& sys, const BlockIqc& m, cplx z) {
  if (m.state_dim() != sys.state_dim() || m.input_dim() != sys.input_dim())
    throw std::invalid_argument("popov_value: IQC/plant dimension mismatch");
  const CMat g = resolvent_input(sys.A, sys.B, z);
  const std::size_t d = sys.state_dim(), n = sys.input_dim();
  CMat top(d + n, n);
  top.set_block(0, 0, g);
  top.set_block(d, 0, CMat::identity(n));
  return hermitize(top.adjoint() * CMat::from_real(m.assembled()) * top);
}

PopovSample popov_sample(const LtiSystem& sys, const BlockIqc& m, cplx z) {
  return {z, popov_value(sys, m, z)};
}

FdiReport fdi_sampled(const LtiSystem& sys, const BlockIqc& m, double rho, int n_samples) {
  if (n_samples < 16) throw std::invalid_argument("fdi_sampled: n_samples >= 16 required");
  if (!(rho > 0.0)) throw std::invalid_argument("fdi_sampled: rho > 0 required");
  FdiReport rep{true, {}, -std::numeric_limits<double>::infinity()};
  const double tol = 1e-9 * (1.0 + m.assembled().max_abs());
  for (int j = 0; j < n_samples; ++j) {
    const double th = 2.0 * M_PI * j / n_samples;
    const cplx z = rho * cplx(std::cos(th), std::sin(th));
    CMat pi;
    try {
      pi = popov_value(sys, m, z);
    } catch (const std::domain_error&) {
      continue;  // excluded circle point
    }
    const auto eigs = hermitian_eigenvalues(pi);
    if (eigs.back() > rep.worst_eig) {
      rep.worst_eig = eigs.back();
      rep.worst_z = z;
    }
  }
  rep.holds = rep.worst_eig <= tol;
  return rep;
}

CMat noisy_fdi_value(const LtiSystem& sys, const BlockIqc& base, double delta, double lambda,
                     cplx z) {
  if (!(lambda > 0.0)) throw std::invalid_argument("noisy_fdi_value: lambda > 0 required");
  const std::size_t d = base.state_dim(), n = base.input_dim();
  Mat t = lambda * (1.0 - delta * delta) * Mat::identity(n) - base.R;
  if (symmetric_eigenvalues(t).front() <= 0.0)
    throw std::invalid_argument("noisy_fdi_value: T = lambda(1-delta^2)I - R must be positive");
  const CMat tinv = lu_solve(CMat::from_real(t), CMat::identity(n));
  const CMat s = CMat::from_real(base.S);
  const CMat q = CMat::from_real(base.Q);
  CMat mid(d + n, d + n);
  const CMat ts = tinv * s;
  mid.set_block(0, 0, s.adjoint() * ts + q);
  mid.set_block(0, d, ts.adjoint());
  mid.set_block(d, 0, ts);
  CMat lowright = tinv - (cplx(1.0 / lambda)) * CMat::identity(n);
  mid.set_block(d, d, lowright);
  const CMat g = resolvent_input(sys.A, sys.B, z);
  CMat top(d + n, n);
  top.set_block(0, 0, g);
  top.set_block(d, 0, cplx(lambda) * CMat::identity(n));
  return hermitize(top.adjoint() * mid * top);
}

double f_sector(double t, double lambda, const ProblemSpec& s) {
  const double a = s.alpha, d = s.delta;
  return -a * a * (s.L - s.m) * (s.L - s.m) + 2.0 * s.m * s.L * a * a * lambda * (1.0 - d * d) +
         2.0 * a * lambda * (s.m + s.L) * (t - 1.0) +
         lambda * (2.0 - d * d * lambda) * (t - 1.0) * (t - 1.0);
}

double f_offbyone(double t, double rho, double lambda, double gamma, const ProblemSpec& s) {
  const double a = s.alpha, d = s.delta, m = s.m, L = s.L;
  const double r2 = rho * rho;
  return -a * a * ((L - m) * (L - m) - 2.0 * m * L * lambda * (1.0 - d * d)) * r2 -
         gamma * gamma * (t - 1.0 + L * a) * (t - 1.0 + L * a) +
         2.0 * lambda * a * r2 * (L + m) * (t - 1.0) +
         lambda * r2 * (2.0 - lambda * d * d) * (t - 1.0) * (t - 1.0) -
         2.0 * a * gamma * ((L - m) - m * lambda * (1.0 - d * d)) * (1.0 - a * L - t) * t +
         2.0 * lambda * gamma * ((1.0 - a * L) * t - r2) * (t - 1.0);
}

double sector_circle_value(double t, double rho, double lambda, const ProblemSpec& s) {
  // on |z| = rho, |z-1|^2 = rho^2 - 2t + 1 = (t-1)^2 + (rho^2 - t^2)
  return f_sector(t, lambda, s) +
         lambda * (2.0 - s.delta * s.delta * lambda) * (rho * rho - t * t);
}

double offbyone_circle_value(double t, double rho, double lambda, double gamma,
                             const ProblemSpec& s) {
  const double a = s.alpha, d = s.delta, m = s.m, L = s.L;
  const double corr = lambda * rho * rho * (2.0 - lambda * d * d) - gamma * gamma +
                      2.0 * a * gamma * ((L - m) - m * lambda * (1.0 - d * d)) -
                      2.0 * lambda * gamma * (1.0 - a * L);
  return f_offbyone(t, rho, lambda, gamma, s) + (rho * rho - t * t) * corr;
}

double noiseless_endpoint(double t, const ProblemSpec& s) {
  return (t - 1.0 + s.L * s.alpha) * (t - 1.0 + s.m * s.alpha);
}

double noiseless_circle_value(double t, double rho, const ProblemSpec& s) {
  return (rho * rho - 2.0 * t + 1.0) + (s.L + s.m) * s.alpha * (t - 1.0) +
         s.L * s.m * s.alpha * s.alpha;
}

namespace {

constexpr double kHuge = 1e300;

struct FQuadratic {
  double c0, c1, c2;  // F(t, lambda) = c0 + c1 lambda - c2 lambda^2
};

FQuadratic f_lambda_coeffs(double t, const ProblemSpec& s) {
  const double a = s.alpha, d = s.delta;
  FQuadratic q;
  q.c0 = -a * a * (s.L - s.m) * (s.L - s.m);
  q.c1 = 2.0 * s.m * s.L * a * a * (1.0 - d * d) + 2.0 * a * (s.m + s.L) * (t - 1.0) +
         2.0 * (t - 1.0) * (t - 1.0);
  q.c2 = d * d * (t - 1.0) * (t - 1.0);
  return q;
}

}  // namespace

LambdaInterval lambda_interval(double t, const ProblemSpec& s) {
  const auto [c0, c1, c2] = f_lambda_coeffs(t, s);
  if (c2 > 0.0) {
    const double disc = c1 * c1 + 4.0 * c2 * c0;
    if (disc < 0.0) return {0.0, 0.0, true};
    const double sq = std::sqrt(disc);
    return {(c1 - sq) / (2.0 * c2), (c1 + sq) / (2.0 * c2), false};
  }
  if (c1 > 0.0) return {-c0 / c1, kHuge, false};
  if (c1 < 0.0) return {-kHuge, -c0 / c1, false};
  return {0.0, 0.0, c0 < 0.0};
}

namespace {

struct SectorFeasibility {
  double lambda;
  double f_plus;
  double f_minus;
  double margin;  // min(f_plus, f_minus) / fdi_scale; feasible iff >= -kEndpointTol
};

// Exact feasibility in lambda: maximize min(F(+rho, .), F(-rho, .)) over
// [0, 2/delta^2]. Both branches are concave parabolas in lambda, so the
// maximizer is a vertex, a crossing of the two parabolas, or a bound.
SectorFeasibility best_sector_lambda(const ProblemSpec& s, double rho) {
  const double lam_max = 2.0 / (s.delta * s.delta);
  const auto qp = f_lambda_coeffs(rho, s);
  const auto qm = f_lambda_coeffs(-rho, s);
  std::vector<double> cands = {0.0, lam_max};
  if (qp.c2 > 0.0) cands.push_back(qp.c1 / (2.0 * qp.c2));
  if (qm.c2 > 0.0) cands.push_back(qm.c1 / (2.0 * qm.c2));
  const double dc2 = qp.c2 - qm.c2;
  if (dc2 != 0.0) cands.push_back((qp.c1 - qm.c1) / dc2);
  SectorFeasibility best{0.0, 0.0, 0.0, -kHuge};
  for (double lam : cands) {
    lam = std::clamp(lam, 0.0, lam_max);
    const double fp = f_sector(rho, lam, s);
    const double fm = f_sector(-rho, lam, s);
    const double margin = std::min(fp, fm) / fdi_scale(s, lam);
    if (margin > best.margin) best = {lam, fp, fm, margin};
  }
  return best;
}

bool sector_feasible(const ProblemSpec& s, double rho) {
  if (s.delta == 0.0) {
    const double tol = kEndpointTol * fdi_scale(s, 0.0);
    return noiseless_endpoint(rho, s) >= -tol && noiseless_endpoint(-rho, s) >= -tol;
  }
  return best_sector_lambda(s, rho).margin >= -kEndpointTol;
}

}  // namespace

std::optional<Certificate> certify_sector_noiseless(const ProblemSpec& s, double rho) {
  const double fp = noiseless_endpoint(rho, s);
  const double fm = noiseless_endpoint(-rho, s);
  const double tol = kEndpointTol * fdi_scale(s, 0.0);
  if (fp < -tol || fm < -tol) return std::nullopt;
  auto w = minimal_stability_witness(s, CertificateKind::SectorNoiseless, rho, 0.0);
  if (!w) return std::nullopt;
  return Certificate{rho, 0.0, std::nullopt, CertificateKind::SectorNoiseless, {fp, fm}, w};
}

std::optional<Certificate> certify_sector_noisy(const ProblemSpec& s, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("certify_sector_noisy: rho > 0 required");
  if (s.delta == 0.0) return certify_sector_noiseless(s, rho);
  const auto best = best_sector_lambda(s, rho);
  if (best.margin < -kEndpointTol) return std::nullopt;
  auto w = minimal_stability_witness(s, CertificateKind::SectorNoisy, rho, 0.0);
  if (!w) return std::nullopt;
  return Certificate{rho,       best.lambda, std::nullopt, CertificateKind::SectorNoisy,
                     {best.f_plus, best.f_minus}, w};
}

std::optional<Certificate> rho_star_sector(const ProblemSpec& s) {
  double lo = rho_gd_noisy(s);
  if (sector_feasible(s, lo)) return certify_sector_noisy(s, lo);
  // grow the bracket top geometrically until feasible; the interior-regime
  // rate can exceed any fixed cap as alpha approaches 2/(L+m)
  double hi = lo;
  double step = 0.25 * std::max(1.0, lo);
  while (!sector_feasible(s, hi)) {
    hi += step;
    step *= 2.0;
    if (hi > lo + 1e7) return std::nullopt;
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (sector_feasible(s, mid))
      hi = mid;
    else
      lo = mid;
  }
  return certify_sector_noisy(s, hi);
}

std::optional<Certificate> certify_strongly_convex(const ProblemSpec& s,
                                                   bool allow_outside_window) {
  if (s.delta == 0.0) return rho_star_sector(s);
  const double top = 2.0 / ((1.0 + s.delta) * s.L + (1.0 - s.delta) * s.m);
  const bool inside = s.alpha >= 1.0 / s.L - kBranchTol && s.alpha <= top + kBranchTol;
  if (!inside && !allow_outside_window) return rho_star_sector(s);

  const double rho = rho_gd_noisy(s);
  const double d2 = s.delta * s.delta;
  const double lambda = (2.0 - s.alpha * (s.L + s.m)) / d2;
  const double k = s.kappa();
  const double gamma = rho * (k - 1.0 + (k + 1.0) * (s.delta - rho)) /
                       ((k - (1.0 - s.delta)) * s.delta);
  const bool multipliers_ok =
      lambda > 0.0 && lambda < 2.0 / d2 && gamma > 0.0 && gamma < rho * rho;
  if (!multipliers_ok) {
    // alpha <= alpha_- makes gamma* <= 0; there the sector machinery already
    // certifies the same rate
    if (!inside) return std::nullopt;
    return rho_star_sector(s);
  }
  const double fp = f_offbyone(rho, rho, lambda, gamma, s);
  const double fm = f_offbyone(-rho, rho, lambda, gamma, s);
  const double tol = kEndpointTol * fdi_scale(s, lambda);
  if (fp < -tol || fm < -tol) return std::nullopt;
  // concavity of the circle value in Re z (quadratic coefficient
  // 4 lambda gamma (1 - alpha L) must be nonpositive)
  const double quad_coeff = 4.0 * lambda * gamma * (1.0 - s.alpha * s.L);
  if (quad_coeff > tol) return std::nullopt;
  auto w = minimal_stability_witness(s, CertificateKind::OffByOneNoisy, rho, gamma);
  if (!w) return std::nullopt;
  return Certificate{rho, lambda, gamma, CertificateKind::OffByOneNoisy, {fp, fm}, w};
}

bool schur_test(const Mat& a2, double rho) {
  if (a2.rows() != 2 || a2.cols() != 2) throw std::invalid_argument("schur_test: 2x2 only");
  if (!(rho > 0.0)) throw std::invalid_argument("schur_test: rho > 0 required");
  const double tr = (a2(0, 0) + a2(1, 1)) / rho;
  const double det = (a2(0, 0) * a2(1, 1) - a2(0, 1) * a2(1, 0)) / (rho * rho);
  return std::abs(det) < 1.0 && std::abs(tr) < 1.0 + det;
}

std::optional<StabilityWitness> minimal_stability_witness(const ProblemSpec& s,
                                                          CertificateKind kind, double rho,
                                                          double gamma) {
  const double n = s.m;  // feedback u = m C x zeroes Q + 2 Re S*N + N*RN exactly
  if (kind == CertificateKind::OffByOneNoisy && gamma > rho * rho + 1e-12)
    return std::nullopt;
  if (kind != CertificateKind::SectorNoiseless) {
    // noisy triples: control (u, e) = (Nx, 0); the unperturbed loop must be
    // rho-Schur, which holds strictly whenever delta > 0
    if (std::abs(1.0 - s.alpha * s.m) < rho) return {{n, 0.0}};
    return std::nullopt;
  }
  // noiseless: interpolate k = (1-eps)m + eps L, smallest workable eps from
  // {0} u {2^-j}
  std::vector<double> grid = {0.0};
  for (int j = 60; j >= 0; --j) grid.push_back(std::ldexp(1.0, -j));
  std::sort(grid.begin(), grid.end());
  for (double eps : grid) {
    if (eps > 1.0) break;  // eps <= 2/||R|| = 1
    const double k = (1.0 - eps) * s.m + eps * s.L;
    if (std::abs(1.0 - s.alpha * k) < rho) return {{n, eps}};
  }
  return std::nullopt;
}

DissipationReport dissipation_verify(const Mat& a, const Mat& b, const BlockIqc& m, double rho,
                                     const Mat& p) {
  if (!p.is_symmetric()) throw std::invalid_argument("dissipation_verify: P must be symmetric");
  const std::size_t d = a.rows(), nin = b.cols();
  if (m.state_dim() != d || m.input_dim() != nin)
    throw std::invalid_argument("dissipation_verify: dimension mismatch");
  const Mat at = a.transposed(), bt = b.transposed();
  Mat k(d + nin, d + nin);
  k.set_block(0, 0, at * p * a - (rho * rho) * p);
  k.set_block(0, d, at * p * b);
  k.set_block(d, 0, bt * p * a);
  k.set_block(d, d, bt * p * b);
  k = k + m.assembled();
  const double max_eig = symmetric_eigenvalues(k).back();
  const double p_min = symmetric_eigenvalues(p).front();
  const bool ok = p_min > 0.0 && max_eig <= 1e-9 * (1.0 + k.max_abs());
  return {ok, max_eig};
}

std::optional<CertificateMultipliers> certificate_multipliers(const ProblemSpec& s, double rho,
                                                              CertificateKind kind) {
  switch (kind) {
    case CertificateKind::SectorNoiseless:
      return CertificateMultipliers{0.0, 0.0};
    case CertificateKind::SectorNoisy: {
      if (s.delta == 0.0) return CertificateMultipliers{0.0, 0.0};
      const auto best = best_sector_lambda(s, rho);
      if (best.margin < -kEndpointTol) return std::nullopt;
      return CertificateMultipliers{best.lambda, 0.0};
    }
    case CertificateKind::OffByOneNoisy: {
      if (s.delta == 0.0) return std::nullopt;
      const double d2 = s.delta * s.delta;
      const double lambda = (2.0 - s.alpha * (s.L + s.m)) / d2;
      const double rs = rho_gd_noisy(s);
      const double k = s.kappa();
      const double gamma =
          rs * (k - 1.0 + (k + 1.0) * (s.delta - rs)) / ((k - (1.0 - s.delta)) * s.delta);
      if (!(lambda > 0.0 && lambda < 2.0 / d2 && gamma > 0.0 && gamma < rs * rs))
        return std::nullopt;
      return CertificateMultipliers{lambda, gamma};
    }
  }
  return std::nullopt;
}

namespace {

struct LmiProblem {
  Mat a;
  Mat b;
  BlockIqc m;
};

std::optional<LmiProblem> build_lmi_problem(const ProblemSpec& s, double rho,
                                            CertificateKind kind) {
  const Mat c1 = Mat::identity(1);
  switch (kind) {
    case CertificateKind::SectorNoiseless: {
      LtiSystem plant = gd_plant(s.alpha, 1);
      return LmiProblem{plant.A, plant.B, sector_matrix(c1, s.m, s.L)};
    }
    case CertificateKind::SectorNoisy: {
      const auto mult = certificate_multipliers(s, rho, kind);
      if (!mult) return std::nullopt;  // no feasible multiplier at this rate
      LtiSystem plant = gd_plant(s.alpha, 1);
      Mat b2 = noisy_input_matrix(plant, /*augmented=*/false);
      return LmiProblem{plant.A, std::move(b2),
                        noise_augment(sector_matrix(c1, s.m, s.L), s.delta, mult->lambda).M};
    }
    case CertificateKind::OffByOneNoisy: {
      const auto mult = certificate_multipliers(s, rho, kind);
      if (!mult) return std::nullopt;
      LtiSystem plant = gd_plant_augmented(s.alpha, s.L, 1);
      Mat b2 = noisy_input_matrix(plant, /*augmented=*/true);
      return LmiProblem{
          plant.A, std::move(b2),
          noise_augment(off_by_one_matrix(c1, s.m, s.L, mult->gamma), s.delta, mult->lambda).M};
    }
  }
  return std::nullopt;
}

double lmi_max_eig(const LmiProblem& prob, double rho, const Mat& p) {
  const std::size_t d = prob.a.rows(), nin = prob.b.cols();
  const Mat at = prob.a.transposed(), bt = prob.b.transposed();
  Mat k(d + nin, d + nin);
  k.set_block(0, 0, at * p * prob.a - (rho * rho) * p);
  k.set_block(0, d, at * p * prob.b);
  k.set_block(d, 0, bt * p * prob.a);
  k.set_block(d, d, bt * p * prob.b);
  k = k + prob.m.assembled();
  return symmetric_eigenvalues(k).back();
}

std::optional<Mat> search_scalar_p(const LmiProblem& prob, double rho) {
  double best_p = 0.0;
  double best_v = kHuge;
  for (int i = 0; i <= 280; ++i) {
    const double p = 1e-6 * std::pow(10.0, 14.0 * i / 280.0);
    Mat pm(1, 1);
    pm(0, 0) = p;
    const double v = lmi_max_eig(prob, rho, pm);
    if (v < best_v) {
      best_v = v;
      best_p = p;
    }
  }
  // golden-section refine; max-eig is convex in p
  double lo = best_p / 1.5, hi = best_p * 1.5;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 120; ++it) {
    const double m1 = hi - gr * (hi - lo);
    const double m2 = lo + gr * (hi - lo);
    Mat p1(1, 1), p2(1, 1);
    p1(0, 0) = m1;
    p2(0, 0) = m2;
    if (lmi_max_eig(prob, rho, p1) < lmi_max_eig(prob, rho, p2))
      hi = m2;
    else
      lo = m1;
  }
  Mat p(1, 1);
  p(0, 0) = 0.5 * (lo + hi);
  if (lmi_max_eig(prob, rho, p) <= -kLmiMargin && p(0, 0) > 0.0) return p;
  return std::nullopt;
}

std::optional<Mat> search_2x2_p(const LmiProblem& prob, double rho) {
  Mat best(2, 2);
  double best_v = kHuge;
  for (int i = 0; i <= 27; ++i) {
    const double p11 = 1e-3 * std::pow(10.0, 9.0 * i / 27.0);
    for (int j = 0; j <= 27; ++j) {
      const double p22 = 1e-3 * std::pow(10.0, 9.0 * j / 27.0);
      for (int r = 0; r <= 12; ++r) {
        const double rho12 = -0.9 + 1.8 * r / 12.0;
        Mat p = Mat::from_rows({{p11, rho12 * std::sqrt(p11 * p22)},
                                {rho12 * std::sqrt(p11 * p22), p22}});
        const double v = lmi_max_eig(prob, rho, p);
        if (v < best_v) {
          best_v = v;
          best = p;
        }
      }
    }
  }
  // cyclic coordinate refinement with shrinking multiplicative steps
  double step = 0.5;
  while (step > 1e-12) {
    bool improved = false;
    for (int coord = 0; coord < 3; ++coord) {
      for (int sgn : {+1, -1}) {
        Mat p2 = best;
        if (coord == 0)
          p2(0, 0) = best(0, 0) * (1.0 + sgn * step);
        else if (coord == 1)
          p2(1, 1) = best(1, 1) * (1.0 + sgn * step);
        else {
          const double off = best(0, 1) + sgn * step * std::sqrt(best(0, 0) * best(1, 1));
          p2(0, 1) = p2(1, 0) = off;
        }
        if (symmetric_eigenvalues(p2).front() <= 0.0) continue;
        const double v = lmi_max_eig(prob, rho, p2);
        if (v < best_v) {
          best_v = v;
          best = p2;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  const double p_min = symmetric_eigenvalues(best).front();
  if (best_v <= -kLmiMargin && p_min >= 1e-9 * std::max(best(0, 0), best(1, 1))) return best;
  return std::nullopt;
}

}  // namespace

std::optional<Mat> dissipation_search_scalar(const ProblemSpec& s, double rho,
                                             CertificateKind kind) {
  const auto prob = build_lmi_problem(s, rho, kind);
  if (!prob) return std::nullopt;
  if (kind == CertificateKind::OffByOneNoisy) return search_2x2_p(*prob, rho);
  return search_scalar_p(*prob, rho);
}

}  // namespace igdcert
