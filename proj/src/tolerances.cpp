#include "dilation_lab/tolerances.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "dilation_lab/errors.hpp"

namespace dlab {

const Tolerances& Tolerances::defaults() {
  static const Tolerances instance{};
  return instance;
}

Tolerances Tolerances::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ValidationError("tolerance scale must be a positive finite number");
  }
  Tolerances t = *this;
  for (double* field : {&t.hermiticity, &t.eigen_residual, &t.orthonormality, &t.jacobi_offdiag,
                        &t.degeneracy_gap, &t.min_positive_eigenvalue, &t.singular_determinant,
                        &t.exceptional_cos, &t.degenerate_coupling, &t.normalization, &t.intertwining,
                        &t.general_intertwining, &t.real_spectrum, &t.max_condition, &t.metric_mismatch,
                        &t.block_identity, &t.spectral_imaginary, &t.dual_path, &t.probability, &t.verdict,
                        &t.constraint, &t.bound_slack}) {
    *field *= factor;
  }
  return t;
}

Tolerances Tolerances::from_environment() {
  const char* raw = std::getenv("DILATION_LAB_TOLERANCE_SCALE");
  if (raw == nullptr || *raw == '\0') return defaults();
  char* end = nullptr;
  const double factor = std::strtod(raw, &end);
  if (end == raw || *end != '\0') {
    throw ValidationError(std::string("DILATION_LAB_TOLERANCE_SCALE is not a number: ") + raw);
  }
  return defaults().scaled(factor);
}

}  // namespace dlab
