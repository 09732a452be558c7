#pragma once

#include <utility>

#include "dilation_lab/numerics.hpp"

namespace dlab {

/// Two-level PT-symmetric Hamiltonian H = E0 I + s [[i sin a, 1], [1, -i sin a]].
struct PTParams {
  double E0 = 0.0;
  double s = 1.0;
  double alpha = 0.0;  // radians; any real value except cos(alpha) = 0

  /// Throws ExceptionalPoint when |cos alpha| is at or below the tolerance.
  void validate(const Tolerances& tol = Tolerances::defaults()) const;
  /// s == 0 gives a twofold-degenerate spectrum. Valid, but worth a warning.
  bool degenerate(const Tolerances& tol = Tolerances::defaults()) const;
  /// Signed level splitting 2 s cos(alpha).
  double omega0() const;
};

enum class MetricSource { closed_form_2d, constructed_general };

/// Hermitian invertible tau with H^dagger (I + tau^2) = (I + tau^2) H.
struct MetricTau {
  CMatrix matrix;
  MetricSource source = MetricSource::closed_form_2d;
};

/// Alice's local state |u+> = u|0> + v|1>; |u-> = conj(v)|0> - conj(u)|1>.
struct LocalState {
  Complex u = 1.0;
  Complex v = 0.0;

  static LocalState from_angles(double theta, double phase);
  void validate(const Tolerances& tol = Tolerances::defaults()) const;
  CMatrix plus() const;
  CMatrix minus() const;
};

CMatrix make_pt_hamiltonian(const PTParams& p, const Tolerances& tol = Tolerances::defaults());

struct LevelPair {
  double lower = 0.0;
  double upper = 0.0;
};

/// E0 -/+ s cos(alpha), sorted.
LevelPair pt_eigenvalues(const PTParams& p, const Tolerances& tol = Tolerances::defaults());

/// tau = (1 / cos a) [[1, -i sin a], [i sin a, 1]].
MetricTau make_tau(const PTParams& p, const Tolerances& tol = Tolerances::defaults());

/// Metric for any diagonalizable H with real spectrum (n <= 16). Diagonalizes
/// H = S L S^-1, takes eta0 = (S S^dagger)^-1, rescales it so that eta - I has
/// smallest eigenvalue `margin`, and returns tau = sqrt(eta - I). The metric is
/// not unique; this is one representative.
MetricTau make_general_tau(const CMatrix& h, double margin = 0.1, const Tolerances& tol = Tolerances::defaults());

/// ||H^dagger (I + tau^2) - (I + tau^2) H||_max.
double intertwining_residual(const CMatrix& h, const CMatrix& tau);

std::pair<CMatrix, CMatrix> make_local_states(Complex u, Complex v, const Tolerances& tol = Tolerances::defaults());

}  // namespace dlab
