#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "dilation_lab/dilation.hpp"
#include "dilation_lab/numerics.hpp"
#include "dilation_lab/pt_model.hpp"
#include "dilation_lab/spectra.hpp"

namespace dlab {

enum class Picture { simulation, classical, classical_biased, local_hermitian, genuine_local_hermitian };

std::string_view to_string(Picture p);
std::optional<Picture> picture_from_string(std::string_view name);
inline constexpr std::array<Picture, 5> kAllPictures = {Picture::simulation, Picture::classical,
                                                        Picture::classical_biased, Picture::local_hermitian,
                                                        Picture::genuine_local_hermitian};

/// One Bell-operator expectation, split as value = constant_part + shift + deviation.
/// `value` comes from the closed form; `cross_check` is the same quantity from
/// the independent route (trace against the picture's global Hamiltonian, or
/// outcome averaging for the classical pictures).
struct PictureResult {
  Picture picture = Picture::simulation;
  double value = 0.0;
  double constant_part = 0.0;
  double shift = 0.0;
  double deviation = 0.0;
  double bound = 0.0;
  double cross_check = 0.0;
};

/// p: outcomes of H (labels follow lambda_+- = E0 +- s cos alpha),
/// pp: outcomes of (H_perp)', ppp: outcomes of H4'.
struct Probabilities {
  double p_plus = 0.5;
  double p_minus = 0.5;
  double pp_plus = 0.5;
  double pp_minus = 0.5;
  double ppp_plus = 0.5;
  double ppp_minus = 0.5;

  void validate(const Tolerances& tol = Tolerances::defaults()) const;
};

/// Bloch-style angles: |u+> = (cos alpha_state, e^{i Delta} sin alpha_state),
/// |s'+> = (cos delta, e^{i Delta'} sin delta), |s'-> = (-sin delta, e^{i Delta'} cos delta).
struct GenuineAngles {
  double delta = 0.0;
  double Delta = 0.0;
  double Delta_prime = 0.0;
  double alpha_state = 0.0;

  LocalState state() const { return LocalState::from_angles(alpha_state, Delta); }
};

/// Orthonormal pair of 2-vectors; `plus` carries the eigenvalue labelled +.
struct StateBasis {
  CMatrix plus;
  CMatrix minus;

  static StateBasis computational();
  static StateBasis rotated(double delta, double phase);
  /// Ascending eigen-decomposition: the upper eigenvector becomes `plus`.
  static StateBasis from_eigen(const EigenDecomposition& e);
  void validate(const Tolerances& tol = Tolerances::defaults()) const;
};

struct Correlators {
  double b0a0 = 0.0;
  double b1a0 = 0.0;
  double b0a1 = 0.0;
  double b1a1 = 0.0;

  /// B0A0 + B0A1 + B1A0 - B1A1.
  double bell() const { return b0a0 + b0a1 + b1a0 - b1a1; }
};

/// Tr[(|j><j| (x) |u+-><u+-|) G] for the four (j, +-) settings. The ancilla
/// (Bob) is the outer tensor factor.
Correlators correlators(const CMatrix& g, const LocalState& u, const Tolerances& tol = Tolerances::defaults());

/// Probabilities of the three outcome families generated by one local state.
Probabilities probabilities_from_state(const PTParams& p, const Perturbation& pert, const LocalState& u,
                                       const StateBasis& basis, const StateBasis& basis_p,
                                       const Tolerances& tol = Tolerances::defaults());

/// The local Hermitian stand-ins H_h and (H_perp)'_h built on the given bases.
CMatrix hermitian_standin(const PTParams& p, const StateBasis& basis, const Tolerances& tol = Tolerances::defaults());
CMatrix perp_hermitian_standin(const PTParams& p, const Perturbation& pert, const StateBasis& basis_p,
                               const Tolerances& tol = Tolerances::defaults());

/// Fully expanded simulation-picture expectation in terms of (u, v) and (a, b, c, d).
double simulation_explicit_value(const PTParams& p, const Perturbation& pert, const LocalState& u);

PictureResult bell_simulation(const PTParams& p, const Perturbation& pert, const LocalState& u,
                              const Tolerances& tol = Tolerances::defaults());
PictureResult bell_classical(const PTParams& p, const Perturbation& pert, const Probabilities& probs,
                             const Tolerances& tol = Tolerances::defaults());
PictureResult bell_classical_biased(const PTParams& p, const Probabilities& probs,
                                    const Tolerances& tol = Tolerances::defaults());
PictureResult bell_local_hermitian(const PTParams& p, const Perturbation& pert, const LocalState& u,
                                   const StateBasis& basis_p, const StateBasis& basis = StateBasis::computational(),
                                   const Tolerances& tol = Tolerances::defaults());
PictureResult bell_genuine_local(const PTParams& p, const Perturbation& pert, const LocalState& u,
                                 const StateBasis& basis, const StateBasis& basis_p,
                                 const Tolerances& tol = Tolerances::defaults());

/// sqrt((w/2)^2 + (w'/2)^2 + 2 (w/2)(w'/2) cos 2 delta), cos delta = |<s+|s'+>|.
double genuine_bound(double omega0, double omega0_p, double cos_delta);

struct ScanGrid {
  std::size_t theta_steps = 256;
  std::size_t phi_steps = 256;
  bool refine = true;
};

struct ScanReport {
  Picture picture = Picture::simulation;
  double max_abs_deviation = 0.0;
  double bound = 0.0;
  double saturation_ratio = 0.0;  // max_abs_deviation / bound, 1 when bound is 0
  bool within_bound = true;
  std::size_t arg_theta = 0;      // grid maximizer (smallest index on ties)
  std::size_t arg_phi = 0;
  double theta = 0.0;             // refined maximizer
  double phi = 0.0;
  std::size_t evaluations = 0;
};

/// Maximizes |deviation| over Alice's state (theta in [0, pi/2], phase in
/// [0, 2 pi)), or over (p_+, p'_+) in [0, 1]^2 for the classical pictures.
/// Deterministic grid followed by one golden-section pass per coordinate.
ScanReport saturation_scan(const PTParams& p, const Perturbation& pert, Picture picture, const ScanGrid& grid,
                           const StateBasis& basis = StateBasis::computational(),
                           const StateBasis& basis_p = StateBasis::computational(),
                           const Tolerances& tol = Tolerances::defaults());

}  // namespace dlab
