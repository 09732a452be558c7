#include "dilation_lab/pt_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dilation_lab/errors.hpp"

namespace dlab {

void PTParams::validate(const Tolerances& tol) const {
  if (!std::isfinite(E0) || !std::isfinite(s) || !std::isfinite(alpha)) {
    throw ValidationError("PT parameters must be finite");
  }
  if (std::abs(std::cos(alpha)) <= tol.exceptional_cos) {
    throw ExceptionalPoint("exceptional point: |cos alpha| = " + std::to_string(std::abs(std::cos(alpha))) +
                           " (alpha = " + std::to_string(alpha) + ")");
  }
}

bool PTParams::degenerate(const Tolerances& tol) const { return std::abs(s) <= tol.degenerate_coupling; }

double PTParams::omega0() const { return 2.0 * s * std::cos(alpha); }

LocalState LocalState::from_angles(double theta, double phase) {
  return {Complex(std::cos(theta), 0.0), std::polar(std::sin(theta), phase)};
}

void LocalState::validate(const Tolerances& tol) const {
  const double n2 = std::norm(u) + std::norm(v);
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > tol.normalization) {
    throw NotNormalized("local state is not normalized: |u|^2 + |v|^2 = " + std::to_string(n2));
  }
}

CMatrix LocalState::plus() const { return CMatrix::column({u, v}); }

CMatrix LocalState::minus() const { return CMatrix::column({std::conj(v), -std::conj(u)}); }

CMatrix make_pt_hamiltonian(const PTParams& p, const Tolerances& tol) {
  p.validate(tol);
  const double sa = std::sin(p.alpha);
  return CMatrix{{Complex(p.E0, p.s * sa), p.s}, {p.s, Complex(p.E0, -p.s * sa)}};
}

LevelPair pt_eigenvalues(const PTParams& p, const Tolerances& tol) {
  p.validate(tol);
  const double half = p.s * std::cos(p.alpha);
  const double a = p.E0 - half;
  const double b = p.E0 + half;
  return {std::min(a, b), std::max(a, b)};
}

MetricTau make_tau(const PTParams& p, const Tolerances& tol) {
  p.validate(tol);
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  CMatrix t{{1.0 / ca, Complex(0.0, -sa / ca)}, {Complex(0.0, sa / ca), 1.0 / ca}};
  return {std::move(t), MetricSource::closed_form_2d};
}

MetricTau make_general_tau(const CMatrix& h, double margin, const Tolerances& tol) {
  if (!h.is_square() || h.rows() == 0 || h.rows() > 16) {
    throw std::invalid_argument("make_general_tau: square matrix of size 1..16 required");
  }
  if (!(margin > 0.0)) throw ValidationError("make_general_tau: margin must be positive");

  const auto eig = general_eig(h);
  const double scale = std::max(1.0, max_abs(h));
  for (const auto& lam : eig.eigenvalues) {
    if (std::abs(lam.imag()) > tol.real_spectrum * scale) {
      throw BrokenSymmetry("broken PT symmetry: eigenvalue " + std::to_string(lam.real()) + " + " +
                           std::to_string(lam.imag()) + "i is not real");
    }
  }
  const double cond = condition_number(eig.eigenvectors, tol);
  if (!(cond <= tol.max_condition)) {
    throw NotDiagonalizable("matrix is not diagonalizable (eigenvector condition number " + std::to_string(cond) +
                            ")");
  }

  const CMatrix s_inv = inverse(eig.eigenvectors, tol);
  const CMatrix eta0 = hermitian_part(s_inv.adjoint() * s_inv);
  const double mu_min = herm_eig(eta0, tol).eigenvalues.front();
  const double c = (1.0 + margin) / mu_min;
  const CMatrix shifted = c * eta0 - CMatrix::identity(h.rows());
  MetricTau tau{sqrt_pd(shifted, tol), MetricSource::constructed_general};

  const double residual = intertwining_residual(h, tau.matrix);
  if (residual > tol.general_intertwining * std::max(1.0, max_abs(shifted) * scale)) {
    throw InternalInconsistency("make_general_tau: intertwining residual " + std::to_string(residual));
  }
  return tau;
}

double intertwining_residual(const CMatrix& h, const CMatrix& tau) {
  const CMatrix eta = CMatrix::identity(tau.rows()) + tau * tau;
  return max_abs(h.adjoint() * eta - eta * h);
}

std::pair<CMatrix, CMatrix> make_local_states(Complex u, Complex v, const Tolerances& tol) {
  const LocalState st{u, v};
  st.validate(tol);
  return {st.plus(), st.minus()};
}

}  // namespace dlab
