#pragma once

namespace dlab {

/// Every numerical threshold used by the library, in one place.
///
/// The defaults are absolute values on quantities of order one. Operations take
/// a `const Tolerances&` defaulting to `Tolerances::defaults()`; the CLI builds
/// its record from `Tolerances::from_environment()`, which multiplies every
/// field by `DILATION_LAB_TOLERANCE_SCALE` when that variable is set.
struct Tolerances {
  // numerics
  double hermiticity = 1e-10;         // ||M - M^dagger||_max accepted by herm_eig
  double eigen_residual = 1e-10;      // ||M v - lambda v|| per eigenpair
  double orthonormality = 1e-12;
  double jacobi_offdiag = 1e-13;      // Frobenius norm of the off-diagonal part at convergence
  double degeneracy_gap = 1e-10;
  double min_positive_eigenvalue = 1e-12;
  double singular_determinant = 1e-12;

  // pt-model
  double exceptional_cos = 1e-9;      // |cos alpha| at or below this is the exceptional point
  double degenerate_coupling = 1e-12;
  double normalization = 1e-12;
  double intertwining = 1e-10;
  double general_intertwining = 1e-8;
  double real_spectrum = 1e-8;        // allowed |Im lambda| for an unbroken spectrum
  double max_condition = 1e8;         // eigenvector-matrix condition number cap

  // dilation
  double metric_mismatch = 1e-8;
  double block_identity = 1e-9;

  // spectra / pictures / distinguish
  double spectral_imaginary = 1e-10;
  double dual_path = 1e-8;
  double probability = 1e-10;
  double verdict = 1e-9;
  double constraint = 1e-9;
  double bound_slack = 1e-9;

  static const Tolerances& defaults();
  Tolerances scaled(double factor) const;
  static Tolerances from_environment();
};

}  // namespace dlab
