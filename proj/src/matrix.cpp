#include "igdcert/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace igdcert {

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  Mat m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("Mat::from_rows: ragged rows");
    std::size_t j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Mat::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  const double scale = 1.0 + max_abs();
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol * scale) return false;
  return true;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

void Mat::set_block(std::size_t r0, std::size_t c0, const Mat& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw std::invalid_argument("Mat::set_block: block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Mat multiply: dimension mismatch");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("Mat add: dimension mismatch");
  Mat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("Mat subtract: dimension mismatch");
  Mat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Mat operator*(double s, const Mat& a) {
  Mat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

CMat CMat::identity(std::size_t n) {
  CMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMat CMat::from_real(const Mat& m) {
  CMat c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j);
  return c;
}

CMat CMat::adjoint() const {
  CMat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

double CMat::max_abs() const {
  double m = 0.0;
  for (const cplx& x : a_) m = std::max(m, std::abs(x));
  return m;
}

void CMat::set_block(std::size_t r0, std::size_t c0, const CMat& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw std::invalid_argument("CMat::set_block: block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

CMat operator*(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("CMat multiply: dimension mismatch");
  CMat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CMat operator+(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("CMat add: dimension mismatch");
  CMat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

CMat operator-(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("CMat subtract: dimension mismatch");
  CMat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

CMat operator*(cplx s, const CMat& a) {
  CMat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

namespace {

// LU with partial pivoting in place; returns the pivot permutation sign slot
// unused, the |det| accumulator, and throws on exact singularity if
// `require_nonsingular`.
double lu_decompose(CMat& a, std::vector<std::size_t>& perm, bool require_nonsingular) {
  const std::size_t n = a.rows();
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double absdet = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    const cplx akk = a(k, k);
    absdet *= std::abs(akk);
    if (best == 0.0) {
      if (require_nonsingular) throw std::domain_error("lu_solve: singular matrix");
      return 0.0;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / akk;
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return absdet;
}

}  // namespace

CMat lu_solve(CMat a, CMat b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw std::invalid_argument("lu_solve: dimension mismatch");
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm;
  lu_decompose(a, perm, /*require_nonsingular=*/true);
  CMat x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    // forward substitution on the permuted rhs
    std::vector<cplx> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = b(perm[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= a(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      cplx s = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x(j, c);
      x(ii, c) = s / a(ii, ii);
    }
  }
  return x;
}

double abs_det(CMat a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("abs_det: not square");
  std::vector<std::size_t> perm;
  return lu_decompose(a, perm, /*require_nonsingular=*/false);
}

namespace {

void require_hermitian(const CMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eigenvalues: not square");
  const double scale = 1.0 + a.max_abs();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (std::abs(a(i, i).imag()) > 1e-12 * scale)
      throw std::invalid_argument("hermitian_eigenvalues: complex diagonal");
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-12 * scale)
        throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  }
}

std::vector<double> eig2(double a00, cplx a01, double a11) {
  const double mean = 0.5 * (a00 + a11);
  const double disc = std::hypot(0.5 * (a00 - a11), std::abs(a01));
  return {mean - disc, mean + disc};
}

// Trigonometric closed form for a 3x3 Hermitian matrix.
std::vector<double> eig3(const CMat& a) {
  const double p1 = std::norm(a(0, 1)) + std::norm(a(0, 2)) + std::norm(a(1, 2));
  const double d0 = a(0, 0).real(), d1 = a(1, 1).real(), d2 = a(2, 2).real();
  if (p1 == 0.0) {
    std::vector<double> e = {d0, d1, d2};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double q = (d0 + d1 + d2) / 3.0;
  const double p2 = (d0 - q) * (d0 - q) + (d1 - q) * (d1 - q) + (d2 - q) * (d2 - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  CMat b(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) b(i, j) = (a(i, j) - (i == j ? cplx(q) : cplx(0))) / p;
  const cplx det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                   b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                   b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(det.real() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e_hi = q + 2.0 * p * std::cos(phi);
  const double e_lo = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  const double e_mid = 3.0 * q - e_hi - e_lo;
  std::vector<double> e = {e_lo, e_mid, e_hi};
  std::sort(e.begin(), e.end());
  return e;
}

// Cyclic Jacobi sweeps with explicit unitary 2x2 rotations. Matrices in this
// project never exceed ~12x12, so the full-matrix updates are cheap.
std::vector<double> eig_jacobi(CMat a) {
  const std::size_t n = a.rows();
  const double scale = 1.0 + a.max_abs();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += std::norm(a(i, j));
    if (std::sqrt(off) <= 1e-12 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        const cplx phase = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        CMat j = CMat::identity(n);
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s * phase;
        j(q, p) = -s * std::conj(phase);
        a = j.adjoint() * a * j;
      }
    }
  }
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = a(i, i).real();
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const CMat& a) {
  require_hermitian(a);
  // Symmetrize to kill roundoff asymmetry before solving.
  CMat h(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  switch (h.rows()) {
    case 0:
      return {};
    case 1:
      return {h(0, 0).real()};
    case 2:
      return eig2(h(0, 0).real(), h(0, 1), h(1, 1).real());
    case 3:
      return eig3(h);
    default:
      return eig_jacobi(h);
  }
}

std::vector<double> symmetric_eigenvalues(const Mat& a) {
  return hermitian_eigenvalues(CMat::from_real(a));
}

}  // namespace igdcert
