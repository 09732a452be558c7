#include "dilation_lab/distinguish.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dilation_lab/errors.hpp"
#include "dilation_lab/spectra.hpp"

namespace dlab {

namespace {

double energy_scale(const PTParams& p) { return std::max({1.0, std::abs(p.E0), std::abs(p.s)}); }

Verdict shift_or_gap(double shift, double gap, double threshold) {
  if (std::abs(shift) > threshold) return Verdict::by_energy_shift;
  if (std::abs(gap) > threshold) return Verdict::by_bound_gap;
  return Verdict::indistinguishable;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::by_spectrum: return "by_spectrum";
    case Verdict::by_energy_shift: return "by_energy_shift";
    case Verdict::by_bound_gap: return "by_bound_gap";
    case Verdict::indistinguishable: return "indistinguishable";
  }
  return "unknown";
}

std::optional<double> same_eigenvalue_constraint(const PTParams& p, double b, double d, const Tolerances& tol) {
  p.validate(tol);
  const double ca = std::cos(p.alpha);
  const double c2a = ca * ca;
  const double shifted = p.s + 2.0 * d / c2a;
  const double c_squared = 0.25 * c2a * (p.s * p.s * c2a - shifted * shifted * c2a - 4.0 * b * b);
  if (c_squared < 0.0) return std::nullopt;
  return c_squared;
}

double indistinguishable_d(const PTParams& p) {
  const double ca = std::cos(p.alpha);
  return p.s * (ca * ca - ca * ca * ca) / (ca - 2.0);
}

double gap_same_eigenvalue(const PTParams& p, const Perturbation& pert, const Tolerances& tol) {
  p.validate(tol);
  const double scale = energy_scale(p);
  if (std::abs(pert.a) > tol.constraint * scale || std::abs(pert.b) > tol.constraint * scale) {
    throw ConstraintViolated("gap_same_eigenvalue: requires a = b = 0");
  }
  const auto c_squared = same_eigenvalue_constraint(p, 0.0, pert.d, tol);
  if (!c_squared || std::abs(pert.c * pert.c - *c_squared) > tol.constraint * scale * scale) {
    throw ConstraintViolated("gap_same_eigenvalue: (c, d) is off the same-eigenvalue manifold");
  }
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  const double c2a = ca * ca;
  const double gap = 4.0 * (p.s * p.s * c2a * sa * sa - pert.d * p.s * c2a);
  const double floor = 4.0 * (p.s * p.s * c2a * sa * sa + pert.d * pert.d);
  if (gap < floor - tol.constraint * scale * scale) {
    throw InternalInconsistency("gap_same_eigenvalue: gap below its lower bound");
  }
  return gap;
}

DistinguishReport classify(const PTParams& p, const Perturbation& pert, const Tolerances& tol) {
  const SpectralData sd = spectral_data(p, pert, tol);
  const double threshold = tol.verdict * energy_scale(p);

  DistinguishReport r;
  r.shift = 2.0 * pert.a;
  r.omega0_p = sd.omega0_p;
  r.omega0_pp = sd.omega0_pp;
  r.same_eigenvalues = std::abs(sd.E0_prime - p.E0) <= threshold &&
                       std::abs(sd.omega0_p - std::abs(sd.omega0)) <= threshold;

  const double gap = sd.omega0_p - sd.omega0_pp;
  r.vs_local = shift_or_gap(r.shift, gap, threshold);
  // With a shared spectrum the tensor-product stand-in reduces to I (x) H_h,
  // whose bound |omega0| equals omega0'; the comparison is then the same as above.
  r.vs_genuine = r.same_eigenvalues ? shift_or_gap(r.shift, gap, threshold) : Verdict::by_spectrum;

  std::ostringstream notes;
  notes.precision(12);
  switch (r.vs_local) {
    case Verdict::by_energy_shift:
      notes << "simulation picture carries energy shift 2a = " << r.shift << "; ";
      break;
    case Verdict::by_bound_gap:
      notes << "deviation bounds differ: omega0' = " << sd.omega0_p << ", omega0'' = " << sd.omega0_pp
            << (gap > 0 ? " (simulation bound smaller); " : " (simulation bound larger); ");
      break;
    default:
      notes << "no shift and equal bounds: simulation and local Hermitian pictures coincide; ";
      break;
  }
  if (r.same_eigenvalues) {
    notes << "dilation is isospectral with H (each level doubled)";
  } else {
    notes << "dilation spectrum {" << sd.lambda_minus << ", " << sd.lambda_plus << ", " << sd.lambda_p_minus
          << ", " << sd.lambda_p_plus << "} differs from doubled H spectrum";
  }
  r.notes = notes.str();
  return r;
}

}  // namespace dlab
