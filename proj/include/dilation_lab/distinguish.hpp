#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dilation_lab/dilation.hpp"
#include "dilation_lab/pt_model.hpp"

namespace dlab {

enum class Verdict { by_spectrum, by_energy_shift, by_bound_gap, indistinguishable };

std::string_view to_string(Verdict v);

/// Whether an observer can tell the dilation apart from the local Hermitian
/// stand-in (vs_local) and from the tensor-product stand-in (vs_genuine).
struct DistinguishReport {
  Verdict vs_local = Verdict::indistinguishable;
  Verdict vs_genuine = Verdict::indistinguishable;
  double shift = 0.0;  // 2a
  double omega0_p = 0.0;
  double omega0_pp = 0.0;
  bool same_eigenvalues = false;
  std::string notes;
};

/// c^2 that makes (H_perp)' isospectral with H when a = -b sin(alpha):
///   c^2 = cos^2/4 [s^2 cos^2 - (s + 2d/cos^2)^2 cos^2 - 4 b^2].
/// nullopt when that value is negative (no real c exists).
std::optional<double> same_eigenvalue_constraint(const PTParams& p, double b, double d,
                                                 const Tolerances& tol = Tolerances::defaults());

/// d at which a = b = c = 0 gives omega0' = omega0''.
double indistinguishable_d(const PTParams& p);

/// (omega0')^2 - (omega0'')^2 = 4 (s^2 cos^2 sin^2 - d s cos^2) on the manifold
/// a = b = 0, c^2 from same_eigenvalue_constraint. Throws ConstraintViolated
/// off the manifold.
double gap_same_eigenvalue(const PTParams& p, const Perturbation& pert,
                           const Tolerances& tol = Tolerances::defaults());

DistinguishReport classify(const PTParams& p, const Perturbation& pert,
                           const Tolerances& tol = Tolerances::defaults());

}  // namespace dlab
