#include "dilation_lab/pictures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "dilation_lab/errors.hpp"

namespace dlab {

namespace {

using Vec3 = std::array<double, 3>;

struct Context {
  PTParams p;
  Perturbation pert;
  SpectralData sd;
  Vec3 h4_axis{};  // traceless part of H4' as n . sigma
  double h4_axis_norm = 0.0;
};

Context make_context(const PTParams& p, const Perturbation& pert, const Tolerances& tol) {
  Context ctx{p, pert, spectral_data(p, pert, tol), {}, 0.0};
  const CoefficientSet k = coefficients(p, pert, tol);
  ctx.h4_axis = {k.C2p, -k.A2p, k.C1p};
  ctx.h4_axis_norm = std::hypot(k.C2p, k.A2p, k.C1p);
  return ctx;
}

Vec3 bloch_vector(const LocalState& u) {
  const Complex z = std::conj(u.u) * u.v;
  return {2.0 * z.real(), 2.0 * z.imag(), std::norm(u.u) - std::norm(u.v)};
}

double overlap2(const CMatrix& a, const CMatrix& b) { return std::norm(inner(a, b)); }

// p''_+ - p''_- for the eigenstates of H4', from the Bloch vectors.
double h4_polarization(const Context& ctx, const LocalState& u) {
  if (ctx.h4_axis_norm == 0.0) return 0.0;
  const Vec3 r = bloch_vector(u);
  const Vec3& n = ctx.h4_axis;
  return (n[0] * r[0] + n[1] * r[1] + n[2] * r[2]) / ctx.h4_axis_norm;
}

double polarization(const LocalState& u, const StateBasis& b) {
  const CMatrix up = u.plus();
  return overlap2(b.plus, up) - overlap2(b.minus, up);
}

double simulation_deviation(const Context& ctx, const LocalState& u) {
  return ctx.sd.omega0_pp * h4_polarization(ctx, u);
}

double local_deviation(const Context& ctx, const LocalState& u, const StateBasis& basis_p) {
  return ctx.sd.omega0_p * polarization(u, basis_p);
}

double genuine_deviation(const Context& ctx, const LocalState& u, const StateBasis& basis,
                         const StateBasis& basis_p) {
  return 0.5 * (ctx.sd.omega0 * polarization(u, basis) + ctx.sd.omega0_p * polarization(u, basis_p));
}

double classical_deviation(const Context& ctx, double p_plus, double pp_plus) {
  return 0.5 * (ctx.sd.omega0 * (2.0 * p_plus - 1.0) + ctx.sd.omega0_p * (2.0 * pp_plus - 1.0));
}

double cos_delta(const StateBasis& basis, const StateBasis& basis_p) {
  return std::abs(inner(basis.plus, basis_p.plus));
}

double bound_for(const Context& ctx, Picture picture, const StateBasis& basis, const StateBasis& basis_p) {
  switch (picture) {
    case Picture::simulation: return ctx.sd.omega0_pp;
    case Picture::classical: return 0.5 * (ctx.sd.omega0_p + std::abs(ctx.sd.omega0));
    case Picture::classical_biased: return std::abs(ctx.sd.omega0);
    case Picture::local_hermitian: return ctx.sd.omega0_p;
    case Picture::genuine_local_hermitian:
      return genuine_bound(ctx.sd.omega0, ctx.sd.omega0_p, cos_delta(basis, basis_p));
  }
  return 0.0;
}

struct LabelledLevels {
  double plus = 0.0;
  double minus = 0.0;
};

// Eigenvalues of H from the root finder, labelled so that plus = E0 + s cos(alpha).
LabelledLevels solver_levels(const PTParams& p, const Tolerances& tol) {
  const auto [lo, hi] = general_eig2(make_pt_hamiltonian(p, tol));
  if (p.omega0() >= 0.0) return {hi.real(), lo.real()};
  return {lo.real(), hi.real()};
}

// Eigenvalues of (H_perp)' from the root finder applied to -H2'^dagger tau + H4'.
LabelledLevels solver_perp_levels(const PTParams& p, const Perturbation& pert, const Tolerances& tol) {
  const auto [lo, hi] = general_eig2(compute_perp(build_general_dilation(p, pert, tol)).matrix);
  return {hi.real(), lo.real()};
}

CMatrix spectral_sum(const LabelledLevels& levels, const StateBasis& b) {
  return levels.plus * (b.plus * b.plus.adjoint()) + levels.minus * (b.minus * b.minus.adjoint());
}

void require_agreement(double closed, double other, double scale, const Tolerances& tol, Picture picture) {
  if (!(std::abs(closed - other) <= tol.dual_path * std::max(1.0, scale))) {
    throw InternalInconsistency(std::string(to_string(picture)) + " picture: closed form " +
                                std::to_string(closed) + " disagrees with independent route " +
                                std::to_string(other));
  }
}

PictureResult finish(Picture picture, double constant, double shift, double deviation, double bound,
                     double cross_check, const Tolerances& tol) {
  PictureResult r{picture, constant + shift + deviation, constant, shift, deviation, bound, cross_check};
  require_agreement(r.value, cross_check, std::abs(constant) + std::abs(shift) + bound, tol, picture);
  return r;
}

double golden_maximize(const std::function<double(double)>& f, double lo, double hi, double& best_x,
                       double& best_f, std::size_t& evaluations) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  evaluations += 2;
  for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    ++evaluations;
    if (f1 > best_f) { best_f = f1; best_x = x1; }
    if (f2 > best_f) { best_f = f2; best_x = x2; }
  }
  return best_x;
}

}  // namespace

std::string_view to_string(Picture p) {
  switch (p) {
    case Picture::simulation: return "simulation";
    case Picture::classical: return "classical";
    case Picture::classical_biased: return "classical_biased";
    case Picture::local_hermitian: return "local_hermitian";
    case Picture::genuine_local_hermitian: return "genuine_local_hermitian";
  }
  return "unknown";
}

std::optional<Picture> picture_from_string(std::string_view name) {
  for (Picture p : kAllPictures)
    if (to_string(p) == name) return p;
  return std::nullopt;
}

void Probabilities::validate(const Tolerances& tol) const {
  const std::array<std::pair<double, double>, 3> pairs = {
      std::pair{p_plus, p_minus}, std::pair{pp_plus, pp_minus}, std::pair{ppp_plus, ppp_minus}};
  for (const auto& [x, y] : pairs) {
    for (double q : {x, y}) {
      if (!std::isfinite(q) || q < -tol.probability || q > 1.0 + tol.probability) {
        throw InvalidProbability("probability " + std::to_string(q) + " outside [0, 1]");
      }
    }
    if (std::abs(x + y - 1.0) > tol.probability) {
      throw InvalidProbability("probability pair sums to " + std::to_string(x + y));
    }
  }
}

StateBasis StateBasis::computational() { return {CMatrix::column({1.0, 0.0}), CMatrix::column({0.0, 1.0})}; }

StateBasis StateBasis::rotated(double delta, double phase) {
  const Complex e = std::polar(1.0, phase);
  return {CMatrix::column({std::cos(delta), e * std::sin(delta)}),
          CMatrix::column({-std::sin(delta), e * std::cos(delta)})};
}

StateBasis StateBasis::from_eigen(const EigenDecomposition& e) {
  if (e.eigenvectors.rows() != 2 || e.eigenvectors.cols() != 2) {
    throw std::invalid_argument("StateBasis::from_eigen: 2x2 decomposition required");
  }
  return {e.eigenvectors.col(1), e.eigenvectors.col(0)};
}

void StateBasis::validate(const Tolerances& tol) const {
  if (plus.rows() != 2 || plus.cols() != 1 || minus.rows() != 2 || minus.cols() != 1) {
    throw NonOrthonormalBasis("basis vectors must be 2-component columns");
  }
  const double dev = std::max({std::abs(inner(plus, plus) - 1.0), std::abs(inner(minus, minus) - 1.0),
                               std::abs(inner(plus, minus))});
  if (!(dev <= tol.orthonormality)) {
    throw NonOrthonormalBasis("basis is not orthonormal (deviation " + std::to_string(dev) + ")");
  }
}

Correlators correlators(const CMatrix& g, const LocalState& u, const Tolerances& tol) {
  if (g.rows() != 4 || g.cols() != 4) throw std::invalid_argument("correlators: 4x4 matrix required");
  const double residual = hermiticity_residual(g);
  if (residual > tol.hermiticity) throw HermiticityError(residual);

  const CMatrix up = u.plus();
  const CMatrix um = u.minus();
  const double scale = std::max(1.0, max_abs(g));
  auto expect = [&](std::size_t j, const CMatrix& w) {
    CMatrix ket_j(2, 1);
    ket_j(j, 0) = 1.0;
    const CMatrix projector = kron(ket_j * ket_j.adjoint(), w * w.adjoint());
    const Complex t = (projector * g).trace();
    if (std::abs(t.imag()) > tol.spectral_imaginary * scale) {
      throw InternalInconsistency("correlator has imaginary part " + std::to_string(t.imag()));
    }
    return t.real();
  };
  return {expect(0, up), expect(1, up), expect(0, um), expect(1, um)};
}

Probabilities probabilities_from_state(const PTParams& p, const Perturbation& pert, const LocalState& u,
                                       const StateBasis& basis, const StateBasis& basis_p, const Tolerances& tol) {
  u.validate(tol);
  basis.validate(tol);
  basis_p.validate(tol);
  const Context ctx = make_context(p, pert, tol);
  const CMatrix up = u.plus();
  Probabilities pr;
  pr.p_plus = overlap2(basis.plus, up);
  pr.p_minus = overlap2(basis.minus, up);
  pr.pp_plus = overlap2(basis_p.plus, up);
  pr.pp_minus = overlap2(basis_p.minus, up);
  const double pol = h4_polarization(ctx, u);
  pr.ppp_plus = 0.5 * (1.0 + pol);
  pr.ppp_minus = 0.5 * (1.0 - pol);
  return pr;
}

CMatrix hermitian_standin(const PTParams& p, const StateBasis& basis, const Tolerances& tol) {
  basis.validate(tol);
  return spectral_sum(solver_levels(p, tol), basis);
}

CMatrix perp_hermitian_standin(const PTParams& p, const Perturbation& pert, const StateBasis& basis_p,
                               const Tolerances& tol) {
  basis_p.validate(tol);
  return spectral_sum(solver_perp_levels(p, pert, tol), basis_p);
}

double simulation_explicit_value(const PTParams& p, const Perturbation& pert, const LocalState& u) {
  const double sa = std::sin(p.alpha);
  const double ca = std::cos(p.alpha);
  const Complex i(0.0, 1.0);
  const Complex ubar_v = std::conj(u.u) * u.v;
  const Complex u_vbar = u.u * std::conj(u.v);
  const Complex twist = 2.0 * i * (pert.b + pert.b * sa * sa + 2.0 * pert.a * sa) / (ca * ca);
  const Complex value = 2.0 * p.E0 + 2.0 * pert.a + (ubar_v + u_vbar) * (p.omega0() * ca + 2.0 * pert.d) +
                        ubar_v * twist - u_vbar * twist + 2.0 * pert.c * (std::norm(u.u) - std::norm(u.v));
  return value.real();
}

PictureResult bell_simulation(const PTParams& p, const Perturbation& pert, const LocalState& u,
                              const Tolerances& tol) {
  u.validate(tol);
  const Context ctx = make_context(p, pert, tol);
  const double trace = correlators(build_general_dilation(p, pert, tol).assembled, u, tol).bell();
  PictureResult r = finish(Picture::simulation, 2.0 * p.E0, 2.0 * pert.a, simulation_deviation(ctx, u),
                           ctx.sd.omega0_pp, trace, tol);
  require_agreement(r.value, simulation_explicit_value(p, pert, u), std::abs(r.constant_part) + r.bound, tol,
                    Picture::simulation);
  return r;
}

PictureResult bell_classical(const PTParams& p, const Perturbation& pert, const Probabilities& probs,
                             const Tolerances& tol) {
  probs.validate(tol);
  const Context ctx = make_context(p, pert, tol);
  const LabelledLevels h = solver_levels(p, tol);
  const LabelledLevels hp = solver_perp_levels(p, pert, tol);
  // Alice cannot tell A0 from A1: average the two assignments of 2<A0>.
  const double averaged = (h.plus * probs.p_plus + h.minus * probs.p_minus) +
                          (hp.plus * probs.pp_plus + hp.minus * probs.pp_minus);
  const double deviation = 0.5 * (ctx.sd.omega0 * (probs.p_plus - probs.p_minus) +
                                  ctx.sd.omega0_p * (probs.pp_plus - probs.pp_minus));
  return finish(Picture::classical, p.E0 + ctx.sd.E0_prime, 0.0, deviation,
                bound_for(ctx, Picture::classical, {}, {}), averaged, tol);
}

PictureResult bell_classical_biased(const PTParams& p, const Probabilities& probs, const Tolerances& tol) {
  probs.validate(tol);
  const LabelledLevels h = solver_levels(p, tol);
  const double omega0 = p.omega0();
  return finish(Picture::classical_biased, 2.0 * p.E0, 0.0, omega0 * (probs.p_plus - probs.p_minus),
                std::abs(omega0), 2.0 * (h.plus * probs.p_plus + h.minus * probs.p_minus), tol);
}

PictureResult bell_local_hermitian(const PTParams& p, const Perturbation& pert, const LocalState& u,
                                   const StateBasis& basis_p, const StateBasis& basis, const Tolerances& tol) {
  u.validate(tol);
  const Context ctx = make_context(p, pert, tol);
  const CMatrix zero(2, 2);
  const CMatrix global = assemble_blocks(hermitian_standin(p, basis, tol), zero, zero,
                                         perp_hermitian_standin(p, pert, basis_p, tol));
  const double trace = correlators(global, u, tol).bell();
  return finish(Picture::local_hermitian, 2.0 * p.E0, 0.0, local_deviation(ctx, u, basis_p), ctx.sd.omega0_p,
                trace, tol);
}

PictureResult bell_genuine_local(const PTParams& p, const Perturbation& pert, const LocalState& u,
                                 const StateBasis& basis, const StateBasis& basis_p, const Tolerances& tol) {
  u.validate(tol);
  const Context ctx = make_context(p, pert, tol);
  const CMatrix local = 0.5 * (hermitian_standin(p, basis, tol) + perp_hermitian_standin(p, pert, basis_p, tol));
  const double trace = correlators(kron(CMatrix::identity(2), local), u, tol).bell();
  return finish(Picture::genuine_local_hermitian, p.E0 + ctx.sd.E0_prime, 0.0,
                genuine_deviation(ctx, u, basis, basis_p),
                bound_for(ctx, Picture::genuine_local_hermitian, basis, basis_p), trace, tol);
}

double genuine_bound(double omega0, double omega0_p, double cos_delta) {
  const double cos_2delta = 2.0 * cos_delta * cos_delta - 1.0;
  const double h = 0.5 * omega0;
  const double hp = 0.5 * omega0_p;
  return std::sqrt(std::max(0.0, h * h + hp * hp + 2.0 * h * hp * cos_2delta));
}

ScanReport saturation_scan(const PTParams& p, const Perturbation& pert, Picture picture, const ScanGrid& grid,
                           const StateBasis& basis, const StateBasis& basis_p, const Tolerances& tol) {
  if (grid.theta_steps < 64 || grid.phi_steps < 64) {
    throw ValidationError("saturation_scan: at least 64 grid points per coordinate required");
  }
  basis.validate(tol);
  basis_p.validate(tol);
  const Context ctx = make_context(p, pert, tol);

  const bool over_probabilities = picture == Picture::classical || picture == Picture::classical_biased;
  const std::size_t nx = grid.theta_steps;
  const std::size_t ny = picture == Picture::classical_biased ? 1 : grid.phi_steps;
  const double x_hi = over_probabilities ? 1.0 : std::numbers::pi / 2.0;
  auto x_at = [&](std::size_t i) { return x_hi * static_cast<double>(i) / static_cast<double>(nx - 1); };
  auto y_at = [&](std::size_t j) {
    if (over_probabilities) return ny == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(ny - 1);
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(ny);
  };

  auto deviation = [&](double x, double y) {
    switch (picture) {
      case Picture::simulation: return simulation_deviation(ctx, LocalState::from_angles(x, y));
      case Picture::local_hermitian: return local_deviation(ctx, LocalState::from_angles(x, y), basis_p);
      case Picture::genuine_local_hermitian:
        return genuine_deviation(ctx, LocalState::from_angles(x, y), basis, basis_p);
      case Picture::classical: return classical_deviation(ctx, x, y);
      case Picture::classical_biased: return ctx.sd.omega0 * (2.0 * x - 1.0);
    }
    return 0.0;
  };

  ScanReport rep;
  rep.picture = picture;
  rep.bound = bound_for(ctx, picture, basis, basis_p);
  double best = -1.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = std::abs(deviation(x_at(i), y_at(j)));
      ++rep.evaluations;
      if (v > best) {
        best = v;
        rep.arg_theta = i;
        rep.arg_phi = j;
      }
    }
  }
  rep.theta = x_at(rep.arg_theta);
  rep.phi = y_at(rep.arg_phi);

  if (grid.refine) {
    const double x_lo = x_at(rep.arg_theta == 0 ? 0 : rep.arg_theta - 1);
    const double x_up = x_at(std::min(rep.arg_theta + 1, nx - 1));
    double bx = rep.theta, by = rep.phi;
    const double y_fixed = by;
    golden_maximize([&](double x) { return std::abs(deviation(x, y_fixed)); }, x_lo, x_up, bx, best,
                    rep.evaluations);
    if (ny > 1) {
      const double x_fixed = bx;
      double y_lo, y_up;
      if (over_probabilities) {
        y_lo = y_at(rep.arg_phi == 0 ? 0 : rep.arg_phi - 1);
        y_up = y_at(std::min(rep.arg_phi + 1, ny - 1));
      } else {
        const double step = 2.0 * std::numbers::pi / static_cast<double>(ny);
        y_lo = by - step;
        y_up = by + step;
      }
      golden_maximize([&](double y) { return std::abs(deviation(x_fixed, y)); }, y_lo, y_up, by, best,
                      rep.evaluations);
    }
    rep.theta = bx;
    rep.phi = by;
  }

  rep.max_abs_deviation = best;
  rep.saturation_ratio = rep.bound > 0.0 ? best / rep.bound : 1.0;
  rep.within_bound = best <= rep.bound + tol.bound_slack;
  return rep;
}

}  // namespace dlab
