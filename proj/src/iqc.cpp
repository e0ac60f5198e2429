#include "igdcert/iqc.hpp"

#include <cmath>
#include <stdexcept>

namespace igdcert {

LtiSystem::LtiSystem(Mat a, Mat b, Mat c) : A(std::move(a)), B(std::move(b)), C(std::move(c)) {
  if (A.rows() != A.cols()) throw std::invalid_argument("LtiSystem: A must be square");
  if (B.rows() != A.rows()) throw std::invalid_argument("LtiSystem: B row mismatch");
  if (C.cols() != A.rows()) throw std::invalid_argument("LtiSystem: C column mismatch");
  if (B.max_abs() == 0.0) throw std::invalid_argument("LtiSystem: B must be nonzero");
}

BlockIqc::BlockIqc(Mat q, Mat s, Mat r) : Q(std::move(q)), S(std::move(s)), R(std::move(r)) {
  if (Q.rows() != Q.cols() || R.rows() != R.cols())
    throw std::invalid_argument("BlockIqc: Q and R must be square");
  if (S.rows() != R.rows() || S.cols() != Q.rows())
    throw std::invalid_argument("BlockIqc: S dimension mismatch");
  if (!Q.is_symmetric() || !R.is_symmetric())
    throw std::invalid_argument("BlockIqc: Q and R must be symmetric");
}

Mat BlockIqc::assembled() const {
  const std::size_t d = state_dim(), n = input_dim();
  Mat m(d + n, d + n);
  m.set_block(0, 0, Q);
  m.set_block(0, d, S.transposed());
  m.set_block(d, 0, S);
  m.set_block(d, d, R);
  return m;
}

double BlockIqc::form(const std::vector<double>& x, const std::vector<double>& u) const {
  const std::size_t d = state_dim(), n = input_dim();
  if (x.size() != d || u.size() != n) throw std::invalid_argument("BlockIqc::form: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s += x[i] * Q(i, j) * x[j];
  for (std::size_t i = 0; i < n; ++i) {
    double sx = 0.0;
    for (std::size_t j = 0; j < d; ++j) sx += S(i, j) * x[j];
    s += 2.0 * u[i] * sx;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += u[i] * R(i, j) * u[j];
  return s;
}

BlockIqc sector_matrix(const Mat& C, double m, double L) {
  if (!(m > 0.0) || !(L > m)) throw std::invalid_argument("sector_matrix: need 0 < m < L");
  const std::size_t n = C.rows();
  Mat q = (-2.0 * L * m) * (C.transposed() * C);
  Mat s = (L + m) * C;
  Mat r = -2.0 * Mat::identity(n);
  return {std::move(q), std::move(s), std::move(r)};
}

BlockIqc off_by_one_matrix(const Mat& C, double m, double L, double gamma) {
  if (!(m > 0.0) || !(L > m)) throw std::invalid_argument("off_by_one_matrix: need 0 < m < L");
  if (gamma < 0.0) throw std::invalid_argument("off_by_one_matrix: need gamma >= 0");
  const std::size_t d = C.cols(), n = C.rows();
  Mat q(d + n, d + n);
  q.set_block(0, 0, (-2.0 * L * m) * (C.transposed() * C));
  q.set_block(0, d, (m * gamma) * C.transposed());
  q.set_block(d, 0, (m * gamma) * C);
  Mat s(n, d + n);
  s.set_block(0, 0, (L + m) * C);
  s.set_block(0, d, (-gamma) * Mat::identity(n));
  Mat r = -2.0 * Mat::identity(n);
  return {std::move(q), std::move(s), std::move(r)};
}

NoiseAugmented noise_augment(const BlockIqc& m, double delta, double lambda) {
  if (!(delta >= 0.0) || !(delta < 1.0)) throw std::invalid_argument("noise_augment: delta in [0,1)");
  if (!(lambda >= 0.0)) throw std::invalid_argument("noise_augment: lambda >= 0");
  const std::size_t d = m.state_dim(), n = m.input_dim();
  Mat s2(2 * n, d);
  s2.set_block(0, 0, m.S);
  Mat r_u = m.R + (lambda * delta * delta) * Mat::identity(n);
  Mat r2(2 * n, 2 * n);
  r2.set_block(0, 0, r_u);
  r2.set_block(n, n, (-lambda) * Mat::identity(n));
  const auto eigs = symmetric_eigenvalues(r_u);
  const double max_eig = eigs.back();
  return {BlockIqc(m.Q, std::move(s2), std::move(r2)), max_eig <= 1e-12 * (1.0 + r_u.max_abs()),
          max_eig};
}

namespace {

// Builds the (state, input) stacking demanded by the matrix dimensions.
void stack_for(const Trajectory& t, const BlockIqc& m, std::size_t k, std::vector<double>& xs,
               std::vector<double>& us) {
  const std::size_t d = t.dim();
  const std::size_t md = m.state_dim(), mn = m.input_dim();
  xs.clear();
  us.clear();
  if (md == d) {
    xs = t.x[k];
  } else if (md == 2 * d && t.v.size() == t.x.size()) {
    xs = t.x[k];
    xs.insert(xs.end(), t.v[k].begin(), t.v[k].end());
  } else {
    throw std::invalid_argument("iqc_partial_sums: trajectory/state dimension mismatch");
  }
  if (mn == d) {
    us = t.u[k];
  } else if (mn == 2 * d && t.e.size() == t.u.size()) {
    us = t.u[k];
    us.insert(us.end(), t.e[k].begin(), t.e[k].end());
  } else {
    throw std::invalid_argument("iqc_partial_sums: trajectory/input dimension mismatch");
  }
}

}  // namespace

std::vector<double> iqc_partial_sums(const Trajectory& traj, const BlockIqc& m, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("iqc_partial_sums: rho > 0 required");
  if (traj.u.size() != traj.x.size())
    throw std::invalid_argument("iqc_partial_sums: x/u length mismatch");
  std::vector<double> sums;
  sums.reserve(traj.length());
  std::vector<double> xs, us;
  double t = 0.0;
  double scale = 1.0;  // guards |T| overflow for rho > 1 runs
  const double r2 = rho * rho;
  for (std::size_t k = 0; k < traj.length(); ++k) {
    stack_for(traj, m, k, xs, us);
    const double sigma = m.form(xs, us);
    t = (k == 0) ? sigma : r2 * t + scale * sigma;
    if (std::abs(t) > 1e290) {
      t *= 1e-290;
      scale *= 1e-290;
    }
    sums.push_back(t);
  }
  return sums;
}

IqcMembership iqc_member(const Trajectory& traj, const BlockIqc& m, double rho) {
  const auto sums = iqc_partial_sums(traj, m, rho);
  double scale = 1.0;
  for (double s : sums) scale = std::max(scale, std::abs(s));
  IqcMembership out{true, 0.0, -1};
  for (std::size_t k = 0; k < sums.size(); ++k) {
    out.min_scaled_sum = std::min(out.min_scaled_sum, sums[k]);
    if (out.member && sums[k] < -kMembershipTol * scale) {
      out.member = false;
      out.first_violation = static_cast<std::ptrdiff_t>(k);
    }
  }
  return out;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

MembershipReport sector_membership_check(const GradientFn& grad,
                                         const std::vector<std::vector<double>>& points,
                                         double m, double L,
                                         const std::vector<double>& x_star) {
  MembershipReport rep{true, 0.0, {}, {}};
  for (const auto& p : points) {
    std::vector<double> dx(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) dx[i] = p[i] - x_star[i];
    const auto g = grad(p);
    std::vector<double> a(p.size()), b(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      a[i] = m * dx[i] - g[i];
      b[i] = L * dx[i] - g[i];
    }
    const double s = dot(a, b);
    const double scale = L * L * dot(dx, dx);
    const double rel = s / std::max(scale, 1e-300);
    if (rel > rep.worst_violation) {
      rep.worst_violation = rel;
      rep.worst_x = p;
    }
    if (rel > kMembershipTol) rep.ok = false;
  }
  return rep;
}

MembershipReport monotone_membership_check(
    const GradientFn& grad,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs, double m,
    double L) {
  MembershipReport rep{true, 0.0, {}, {}};
  for (const auto& [x, y] : pairs) {
    const auto gx = grad(x);
    const auto gy = grad(y);
    std::vector<double> dg(x.size()), dx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      dg[i] = gx[i] - gy[i];
      dx[i] = x[i] - y[i];
    }
    std::vector<double> a(x.size()), b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      a[i] = dg[i] - m * dx[i];
      b[i] = dg[i] - L * dx[i];
    }
    const double s = dot(a, b);
    const double scale = L * L * dot(dx, dx);
    const double rel = s / std::max(scale, 1e-300);
    if (rel > rep.worst_violation) {
      rep.worst_violation = rel;
      rep.worst_x = x;
      rep.worst_y = y;
    }
    if (rel > kMembershipTol) rep.ok = false;
  }
  return rep;
}

}  // namespace igdcert
