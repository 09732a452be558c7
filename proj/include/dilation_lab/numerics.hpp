#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "dilation_lab/tolerances.hpp"

namespace dlab {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Column vectors are n x 1 matrices.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix column(std::initializer_list<Complex> entries);
  static CMatrix column(std::span<const Complex> entries);
  static CMatrix diagonal(std::span<const Complex> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);
  CMatrix col(std::size_t c) const { return block(0, c, rows_, 1); }
  Complex trace() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex k);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Complex k, CMatrix a);
CMatrix operator*(CMatrix a, Complex k);

// Pauli matrices.
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();

/// Kronecker product a (x) b; the first factor indexes the outer blocks.
CMatrix kron(const CMatrix& a, const CMatrix& b);
/// Block matrix [[a, b], [c, d]].
CMatrix assemble_blocks(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d);
/// Direct sum of two column vectors (stacked).
CMatrix stack(const CMatrix& top, const CMatrix& bottom);

double max_abs(const CMatrix& m);
double frobenius_norm(const CMatrix& m);
double vector_norm(const CMatrix& v);
/// <a|b> for column vectors.
Complex inner(const CMatrix& a, const CMatrix& b);
/// ||M - M^dagger||_max.
double hermiticity_residual(const CMatrix& m);
CMatrix hermitian_part(const CMatrix& m);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // orthonormal columns, first nonzero entry real positive
};

/// Hermitian eigensolver: cyclic complex Jacobi sweeps, n <= 16.
EigenDecomposition herm_eig(const CMatrix& m, const Tolerances& tol = Tolerances::defaults());

/// Roots of the characteristic polynomial of a 2x2 matrix, ordered by (real, imag).
std::pair<Complex, Complex> general_eig2(const CMatrix& m);

struct GeneralEigen {
  std::vector<Complex> eigenvalues;
  CMatrix eigenvectors;  // unit-norm columns, not orthogonal in general
};

/// Eigen-decomposition of a possibly non-Hermitian square matrix. The 2x2 case
/// is closed form; larger sizes (stretch path only) are handed to Eigen.
GeneralEigen general_eig(const CMatrix& m);

/// e^{-i t M} for Hermitian M by spectral synthesis.
CMatrix mat_exp_herm(const CMatrix& m, double t, const Tolerances& tol = Tolerances::defaults());

/// Hermitian positive-definite square root.
CMatrix sqrt_pd(const CMatrix& m, const Tolerances& tol = Tolerances::defaults());

CMatrix inverse2(const CMatrix& m, const Tolerances& tol = Tolerances::defaults());

/// Gauss-Jordan inverse with partial pivoting, any square size.
CMatrix inverse(const CMatrix& m, const Tolerances& tol = Tolerances::defaults());

/// 2-norm condition number via the singular values of m.
double condition_number(const CMatrix& m, const Tolerances& tol = Tolerances::defaults());

}  // namespace dlab
