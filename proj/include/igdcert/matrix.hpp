#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace igdcert {

using cplx = std::complex<double>;

/// Small dense row-major real matrix. Sizes in this project stay below ~12,
/// so no attempt is made at blocking or expression templates.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Mat identity(std::size_t n);
  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);

  double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  Mat transposed() const;
  bool is_symmetric(double tol = 1e-12) const;
  double max_abs() const;

  /// Copies `b` into this matrix with upper-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const Mat& b);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);

/// Small dense row-major complex matrix.
class CMat {
 public:
  CMat() = default;
  CMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMat identity(std::size_t n);
  static CMat from_real(const Mat& m);

  cplx& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  CMat adjoint() const;
  double max_abs() const;
  void set_block(std::size_t r0, std::size_t c0, const CMat& b);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

CMat operator*(const CMat& a, const CMat& b);
CMat operator+(const CMat& a, const CMat& b);
CMat operator-(const CMat& a, const CMat& b);
CMat operator*(cplx s, const CMat& a);

/// Solves A X = B by LU with partial pivoting. Throws std::domain_error on a
/// (numerically) singular A.
CMat lu_solve(CMat a, CMat b);

/// |det A| via the LU pivot product.
double abs_det(CMat a);

/// Eigenvalues of a Hermitian matrix, ascending. Closed-form roots for
/// n <= 3; cyclic Jacobi sweeps (tolerance 1e-12) for larger blocks.
/// Throws std::invalid_argument if A is not Hermitian to 1e-12 (relative).
std::vector<double> hermitian_eigenvalues(const CMat& a);

/// Real symmetric wrapper around hermitian_eigenvalues.
std::vector<double> symmetric_eigenvalues(const Mat& a);

}  // namespace igdcert
