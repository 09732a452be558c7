#pragma once

#include <cstdint>

#include "dilation_lab/numerics.hpp"
#include "dilation_lab/pt_model.hpp"

namespace dlab {

/// Hermitian shift of the upper-left block, H1'' = [[a + c, d + i b], [d - i b, a - c]].
struct Perturbation {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  void validate() const;
  CMatrix block() const;
  double norm() const;
  bool is_zero() const { return a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0; }
};

enum class DilationKind { special, general };

/// Hermitian dilation [[H1, H2], [H2^dagger, H4]] of `target` with metric `tau`.
/// Acting on psi (+) tau psi it reproduces H psi (+) tau H psi.
struct DilatedHamiltonian {
  CMatrix H1;
  CMatrix H2;
  CMatrix H4;
  CMatrix assembled;
  MetricTau tau;
  CMatrix target;
  DilationKind kind = DilationKind::special;

  /// Rebuild `assembled` from the blocks.
  void reassemble();
};

/// Companion operator -H2^dagger tau + H4 governing the ancilla-|1> branch.
struct PerpHamiltonian {
  CMatrix matrix;
};

/// The two-fold dilation: H1 = H4 = (H tau^-1 + tau H)(tau^-1 + tau)^-1,
/// H2 = (H - tau H tau^-1)(tau^-1 + tau)^-1.
DilatedHamiltonian build_special_dilation(const CMatrix& h, const MetricTau& tau,
                                          const Tolerances& tol = Tolerances::defaults());

/// Dilation with an arbitrary Hermitian upper-left block: H2 = (H - H1) tau^-1 and
/// H4 = (tau H - H2^dagger) tau^-1. No Hermitization is applied, so H4 is only
/// Hermitian when (H, tau) intertwine.
DilatedHamiltonian dilate_with_upper_block(const CMatrix& h, const MetricTau& tau, const CMatrix& h1,
                                           const Tolerances& tol = Tolerances::defaults());

/// Special dilation of the PT Hamiltonian shifted by `pert` in the upper-left
/// block: H2' = H2 - H1'' tau^-1, H4' = H1 + tau^-1 H1'' tau^-1.
DilatedHamiltonian build_general_dilation(const PTParams& p, const Perturbation& pert,
                                          const Tolerances& tol = Tolerances::defaults());

PerpHamiltonian compute_perp(const DilatedHamiltonian& d);

/// (H_perp)' = H + tau^-1 H1'' (tau + tau^-1).
PerpHamiltonian perp_closed_form(const PTParams& p, const Perturbation& pert,
                                 const Tolerances& tol = Tolerances::defaults());

struct DilationResiduals {
  double embedding = 0.0;       // ||Hd (psi (+) tau psi) - (H psi (+) tau H psi)||, worst case
  double complementary = 0.0;   // ||Hd (-tau psi (+) psi) - (-tau Hp psi (+) Hp psi)||, worst case
  double hermiticity = 0.0;     // ||Hd - Hd^dagger||_max
  int trials = 0;

  double max() const;
};

/// Checks both block identities on `trials` random unit vectors. Deterministic
/// for a fixed seed.
DilationResiduals verify_dilation(const DilatedHamiltonian& d, int trials, std::uint64_t seed);

}  // namespace dlab
