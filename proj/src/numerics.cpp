#include "dilation_lab/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dilation_lab/errors.hpp"

namespace dlab {

namespace {

constexpr std::size_t kMaxHermitianSize = 16;
constexpr int kMaxJacobiSweeps = 100;
constexpr double kPhaseThreshold = 1e-12;

void require_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix shape mismatch");
  }
}

void require_square(const CMatrix& m, const char* what) {
  if (!m.is_square() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": square matrix required");
  }
}

bool lexicographic_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Rotate column c so that its first component above threshold is real positive.
void fix_phase(CMatrix& v, std::size_t c) {
  for (std::size_t r = 0; r < v.rows(); ++r) {
    const double mag = std::abs(v(r, c));
    if (mag > kPhaseThreshold) {
      const Complex phase = std::conj(v(r, c)) / mag;
      for (std::size_t k = 0; k < v.rows(); ++k) v(k, c) *= phase;
      v(r, c) = Complex(std::abs(v(r, c)), 0.0);
      return;
    }
  }
}

void normalize_column(CMatrix& v, std::size_t c) {
  double n2 = 0.0;
  for (std::size_t r = 0; r < v.rows(); ++r) n2 += std::norm(v(r, c));
  const double n = std::sqrt(n2);
  for (std::size_t r = 0; r < v.rows(); ++r) v(r, c) /= n;
}

// Modified Gram-Schmidt over columns [first, last) in index order.
void gram_schmidt(CMatrix& v, std::size_t first, std::size_t last) {
  for (std::size_t c = first; c < last; ++c) {
    for (std::size_t k = first; k < c; ++k) {
      Complex proj = 0.0;
      for (std::size_t r = 0; r < v.rows(); ++r) proj += std::conj(v(r, k)) * v(r, c);
      for (std::size_t r = 0; r < v.rows(); ++r) v(r, c) -= proj * v(r, k);
    }
    normalize_column(v, c);
  }
}

double offdiag_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p, q). The unitary is D*P with
// D = diag(1, conj(phase)) on (p, q) making the pivot real, and P the real
// symmetric Jacobi rotation.
void jacobi_rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  if (g <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
    a(p, q) = a(q, p) = 0.0;
    return;
  }
  const Complex phase_bar = std::conj(apq / g);
  const double theta = (aqq - app) / (2.0 * g);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex upp = c;
  const Complex upq = s;
  const Complex uqp = -s * phase_bar;
  const Complex uqq = c * phase_bar;

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * upp + akq * uqp;
    a(k, q) = akp * upq + akq * uqq;
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * upp + vkq * uqp;
    v(k, q) = vkp * upq + vkq * uqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
  }
  a(p, q) = a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::column(std::initializer_list<Complex> entries) {
  return column(std::span<const Complex>(entries.begin(), entries.size()));
}

CMatrix CMatrix::column(std::span<const Complex> entries) {
  CMatrix m(entries.size(), 1);
  std::copy(entries.begin(), entries.end(), m.data_.begin());
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> entries) {
  CMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block out of range");
  CMatrix m(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
  return m;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw std::out_of_range("block out of range");
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex k) {
  for (auto& x : data_) x *= k;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator-(CMatrix a) { return a *= -1.0; }
CMatrix operator*(Complex k, CMatrix a) { return a *= k; }
CMatrix operator*(CMatrix a, Complex k) { return a *= k; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  CMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

CMatrix sigma_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
CMatrix sigma_y() { return {{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
CMatrix sigma_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return m;
}

CMatrix assemble_blocks(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols()) {
    throw std::invalid_argument("inconsistent block shapes");
  }
  CMatrix m(a.rows() + c.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  m.set_block(a.rows(), 0, c);
  m.set_block(a.rows(), a.cols(), d);
  return m;
}

CMatrix stack(const CMatrix& top, const CMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw std::invalid_argument("stack: column mismatch");
  CMatrix m(top.rows() + bottom.rows(), top.cols());
  m.set_block(0, 0, top);
  m.set_block(top.rows(), 0, bottom);
  return m;
}

double max_abs(const CMatrix& m) {
  double r = 0.0;
  for (const auto& x : m.data()) r = std::max(r, std::abs(x));
  return r;
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (const auto& x : m.data()) s += std::norm(x);
  return std::sqrt(s);
}

double vector_norm(const CMatrix& v) { return frobenius_norm(v); }

Complex inner(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != 1 || b.cols() != 1 || a.rows() != b.rows()) {
    throw std::invalid_argument("inner: column vectors of equal length required");
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += std::conj(a(i, 0)) * b(i, 0);
  return s;
}

double hermiticity_residual(const CMatrix& m) {
  require_square(m, "hermiticity_residual");
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

CMatrix hermitian_part(const CMatrix& m) {
  CMatrix h = m + m.adjoint();
  h *= 0.5;
  return h;
}

EigenDecomposition herm_eig(const CMatrix& m, const Tolerances& tol) {
  require_square(m, "herm_eig");
  if (m.rows() > kMaxHermitianSize) throw std::invalid_argument("herm_eig: size above 16 not supported");
  const double residual = hermiticity_residual(m);
  if (residual > tol.hermiticity) throw HermiticityError(residual);

  const std::size_t n = m.rows();
  CMatrix a = hermitian_part(m);
  CMatrix v = CMatrix::identity(n);
  const double threshold = tol.jacobi_offdiag * std::max(1.0, frobenius_norm(a));

  bool converged = false;
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    if (offdiag_norm(a) <= threshold) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
  }
  if (!converged && offdiag_norm(a) > threshold) {
    throw InternalInconsistency("herm_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }

  std::size_t first = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k == n || out.eigenvalues[k] - out.eigenvalues[k - 1] >= tol.degeneracy_gap) {
      if (k - first > 1) gram_schmidt(out.eigenvectors, first, k);
      first = k;
    }
  }
  for (std::size_t k = 0; k < n; ++k) fix_phase(out.eigenvectors, k);
  return out;
}

std::pair<Complex, Complex> general_eig2(const CMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("general_eig2: 2x2 matrix required");
  const Complex half_trace = 0.5 * (m(0, 0) + m(1, 1));
  const Complex half_diff = 0.5 * (m(0, 0) - m(1, 1));
  const Complex root = std::sqrt(half_diff * half_diff + m(0, 1) * m(1, 0));
  Complex l1 = half_trace - root;
  Complex l2 = half_trace + root;
  if (lexicographic_less(l2, l1)) std::swap(l1, l2);
  return {l1, l2};
}

GeneralEigen general_eig(const CMatrix& m) {
  require_square(m, "general_eig");
  const std::size_t n = m.rows();
  GeneralEigen out;
  if (n == 1) {
    out.eigenvalues = {m(0, 0)};
    out.eigenvectors = CMatrix::identity(1);
    return out;
  }
  if (n == 2) {
    const auto [l1, l2] = general_eig2(m);
    out.eigenvalues = {l1, l2};
    out.eigenvectors = CMatrix(2, 2);
    const double scale = std::max(1.0, max_abs(m));
    for (std::size_t k = 0; k < 2; ++k) {
      const Complex lam = out.eigenvalues[k];
      // Two candidate null vectors of (m - lam I); keep the better conditioned one.
      const Complex v1a = m(0, 1), v1b = lam - m(0, 0);
      const Complex v2a = lam - m(1, 1), v2b = m(1, 0);
      const double n1 = std::hypot(std::abs(v1a), std::abs(v1b));
      const double n2 = std::hypot(std::abs(v2a), std::abs(v2b));
      if (std::max(n1, n2) <= 1e-14 * scale) {
        out.eigenvectors(k, k) = 1.0;  // scalar matrix
      } else if (n1 >= n2) {
        out.eigenvectors(0, k) = v1a / n1;
        out.eigenvectors(1, k) = v1b / n1;
      } else {
        out.eigenvectors(0, k) = v2a / n2;
        out.eigenvectors(1, k) = v2b / n2;
      }
      fix_phase(out.eigenvectors, k);
    }
    return out;
  }

  Eigen::MatrixXcd em(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) em(r, c) = m(r, c);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(em, true);
  if (solver.info() != Eigen::Success) throw InternalInconsistency("general_eig: eigensolver failed");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return lexicographic_less(solver.eigenvalues()(i), solver.eigenvalues()(j));
  });
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()(order[k]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = solver.eigenvectors()(r, order[k]);
    normalize_column(out.eigenvectors, k);
    fix_phase(out.eigenvectors, k);
  }
  return out;
}

CMatrix mat_exp_herm(const CMatrix& m, double t, const Tolerances& tol) {
  const auto eig = herm_eig(m, tol);
  std::vector<Complex> phases(eig.eigenvalues.size());
  for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = std::exp(Complex(0.0, -t * eig.eigenvalues[k]));
  return eig.eigenvectors * CMatrix::diagonal(phases) * eig.eigenvectors.adjoint();
}

CMatrix sqrt_pd(const CMatrix& m, const Tolerances& tol) {
  const auto eig = herm_eig(m, tol);
  if (eig.eigenvalues.front() <= tol.min_positive_eigenvalue) {
    throw NotPositiveDefinite("sqrt_pd: minimum eigenvalue " + std::to_string(eig.eigenvalues.front()) +
                              " is not positive");
  }
  std::vector<Complex> roots(eig.eigenvalues.size());
  for (std::size_t k = 0; k < roots.size(); ++k) roots[k] = std::sqrt(eig.eigenvalues[k]);
  return hermitian_part(eig.eigenvectors * CMatrix::diagonal(roots) * eig.eigenvectors.adjoint());
}

CMatrix inverse2(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("inverse2: 2x2 matrix required");
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (std::abs(det) <= tol.singular_determinant) {
    throw SingularMatrix("inverse2: |det| = " + std::to_string(std::abs(det)));
  }
  return CMatrix{{m(1, 1) / det, -m(0, 1) / det}, {-m(1, 0) / det, m(0, 0) / det}};
}

CMatrix inverse(const CMatrix& m, const Tolerances& tol) {
  require_square(m, "inverse");
  const std::size_t n = m.rows();
  CMatrix a = m;
  CMatrix inv = CMatrix::identity(n);
  const double scale = std::max(1.0, max_abs(m));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) <= tol.singular_determinant * scale) {
      throw SingularMatrix("inverse: matrix is numerically singular");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    const Complex d = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = a(r, col);
      if (f == Complex(0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

double condition_number(const CMatrix& m, const Tolerances& tol) {
  const auto eig = herm_eig(hermitian_part(m.adjoint() * m), tol);
  const double smax = std::sqrt(std::max(eig.eigenvalues.back(), 0.0));
  const double smin = std::sqrt(std::max(eig.eigenvalues.front(), 0.0));
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace dlab
