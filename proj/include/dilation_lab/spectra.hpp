#pragma once

#include "dilation_lab/dilation.hpp"
#include "dilation_lab/pt_model.hpp"

namespace dlab {

/// Coefficients of the closed forms
///   (H_perp)' = (E0 + A1) I + [[C1, C2 + i A2], [C2 - i A2, -C1]]
///   H4'       = (E0 + A1p) I + [[C1p, C2p + i A2p], [C2p - i A2p, -C1p]]
struct CoefficientSet {
  double A1 = 0.0;
  double A2 = 0.0;
  Complex C1 = 0.0;
  Complex C2 = 0.0;
  double A1p = 0.0;
  double A2p = 0.0;
  double C1p = 0.0;
  double C2p = 0.0;

  /// C1^2 + C2^2 + A2^2; real up to rounding.
  Complex perp_discriminant() const;
  double h4_discriminant() const;
};

struct SpectralData {
  double lambda_minus = 0.0;      // eigenvalues of H, sorted
  double lambda_plus = 0.0;
  double lambda_p_minus = 0.0;    // eigenvalues of (H_perp)'
  double lambda_p_plus = 0.0;
  double lambda_pp_minus = 0.0;   // eigenvalues of H4'
  double lambda_pp_plus = 0.0;
  double omega0 = 0.0;            // signed, 2 s cos(alpha)
  double omega0_p = 0.0;          // lambda_p_plus - lambda_p_minus
  double omega0_pp = 0.0;         // lambda_pp_plus - lambda_pp_minus
  double E0_prime = 0.0;          // (lambda_p_plus + lambda_p_minus) / 2
};

CoefficientSet coefficients(const PTParams& p, const Perturbation& pert,
                            const Tolerances& tol = Tolerances::defaults());

/// Throws InternalInconsistency if the (H_perp)' discriminant is not real.
SpectralData spectral_data(const PTParams& p, const Perturbation& pert,
                           const Tolerances& tol = Tolerances::defaults());

/// Explicit matrices rebuilt from the coefficient set.
CMatrix perp_from_coefficients(const PTParams& p, const CoefficientSet& k);
CMatrix h4_from_coefficients(const PTParams& p, const CoefficientSet& k);

}  // namespace dlab
