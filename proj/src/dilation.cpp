#include "dilation_lab/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dilation_lab/errors.hpp"
#include "dilation_lab/random.hpp"

namespace dlab {

namespace {

CMatrix invert(const CMatrix& m, const Tolerances& tol) {
  return m.rows() == 2 ? inverse2(m, tol) : inverse(m, tol);
}

void require_pair(const CMatrix& h, const MetricTau& tau) {
  if (!h.is_square() || !tau.matrix.is_square() || h.rows() != tau.matrix.rows()) {
    throw std::invalid_argument("dilation: H and tau must be square of equal size");
  }
}

}  // namespace

void Perturbation::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
    throw ValidationError("perturbation entries must be finite");
  }
}

CMatrix Perturbation::block() const {
  return CMatrix{{a + c, Complex(d, b)}, {Complex(d, -b), a - c}};
}

double Perturbation::norm() const { return std::sqrt(a * a + b * b + c * c + d * d); }

void DilatedHamiltonian::reassemble() { assembled = assemble_blocks(H1, H2, H2.adjoint(), H4); }

DilatedHamiltonian build_special_dilation(const CMatrix& h, const MetricTau& tau, const Tolerances& tol) {
  require_pair(h, tau);
  const double residual = intertwining_residual(h, tau.matrix);
  if (residual > tol.metric_mismatch) {
    throw MetricMismatch("metric does not intertwine H: residual " + std::to_string(residual));
  }
  const CMatrix& t = tau.matrix;
  const CMatrix t_inv = invert(t, tol);
  const CMatrix sum_inv = invert(t_inv + t, tol);

  DilatedHamiltonian d;
  d.H1 = (h * t_inv + t * h) * sum_inv;
  d.H2 = (h - t * h * t_inv) * sum_inv;
  d.H4 = d.H1;
  d.tau = tau;
  d.target = h;
  d.kind = DilationKind::special;
  d.reassemble();
  return d;
}

DilatedHamiltonian dilate_with_upper_block(const CMatrix& h, const MetricTau& tau, const CMatrix& h1,
                                           const Tolerances& tol) {
  require_pair(h, tau);
  const CMatrix& t = tau.matrix;
  const CMatrix t_inv = invert(t, tol);

  DilatedHamiltonian d;
  d.H1 = h1;
  d.H2 = (h - h1) * t_inv;
  d.H4 = (t * h - d.H2.adjoint()) * t_inv;
  d.tau = tau;
  d.target = h;
  d.kind = DilationKind::general;
  d.reassemble();
  return d;
}

DilatedHamiltonian build_general_dilation(const PTParams& p, const Perturbation& pert, const Tolerances& tol) {
  pert.validate();
  const CMatrix h = make_pt_hamiltonian(p, tol);
  DilatedHamiltonian d = build_special_dilation(h, make_tau(p, tol), tol);
  if (pert.is_zero()) return d;

  const CMatrix shift = pert.block();
  const CMatrix t_inv = inverse2(d.tau.matrix, tol);
  d.H4 = d.H1 + t_inv * shift * t_inv;
  d.H2 = d.H2 - shift * t_inv;
  d.H1 = d.H1 + shift;
  d.kind = DilationKind::general;
  d.reassemble();
  return d;
}

PerpHamiltonian compute_perp(const DilatedHamiltonian& d) {
  return {d.H4 - d.H2.adjoint() * d.tau.matrix};
}

PerpHamiltonian perp_closed_form(const PTParams& p, const Perturbation& pert, const Tolerances& tol) {
  pert.validate();
  const CMatrix h = make_pt_hamiltonian(p, tol);
  const CMatrix t = make_tau(p, tol).matrix;
  const CMatrix t_inv = inverse2(t, tol);
  return {h + t_inv * pert.block() * (t + t_inv)};
}

double DilationResiduals::max() const { return std::max({embedding, complementary, hermiticity}); }

DilationResiduals verify_dilation(const DilatedHamiltonian& d, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("verify_dilation: trials must be >= 1");
  const std::size_t n = d.target.rows();
  const CMatrix& t = d.tau.matrix;
  const CMatrix perp = compute_perp(d).matrix;

  DilationResiduals out;
  out.trials = trials;
  out.hermiticity = hermiticity_residual(d.assembled);

  RandomStream rng(seed);
  for (int k = 0; k < trials; ++k) {
    CMatrix psi(n, 1);
    for (std::size_t i = 0; i < n; ++i) psi(i, 0) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    psi *= 1.0 / vector_norm(psi);

    const CMatrix h_psi = d.target * psi;
    const CMatrix lhs1 = d.assembled * stack(psi, t * psi);
    out.embedding = std::max(out.embedding, vector_norm(lhs1 - stack(h_psi, t * h_psi)));

    const CMatrix p_psi = perp * psi;
    const CMatrix lhs2 = d.assembled * stack(-(t * psi), psi);
    out.complementary = std::max(out.complementary, vector_norm(lhs2 - stack(-(t * p_psi), p_psi)));
  }
  return out;
}

}  // namespace dlab
