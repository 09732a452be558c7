#include "dilation_lab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dilation_lab/errors.hpp"

namespace dlab {

Complex CoefficientSet::perp_discriminant() const {
  // Extended precision keeps the cancelling imaginary parts of C1^2 and C2^2
  // well below the tolerance even when cos(alpha) is small.
  using LC = std::complex<long double>;
  const LC c1(C1.real(), C1.imag());
  const LC c2(C2.real(), C2.imag());
  const long double a2 = A2;
  const LC sum = c1 * c1 + c2 * c2 + a2 * a2;
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

double CoefficientSet::h4_discriminant() const { return C1p * C1p + C2p * C2p + A2p * A2p; }

CoefficientSet coefficients(const PTParams& p, const Perturbation& pert, const Tolerances& tol) {
  p.validate(tol);
  pert.validate();
  const auto [a, b, c, d] = pert;
  const double s = p.s;
  const double sa = std::sin(p.alpha);
  const double ca = std::cos(p.alpha);
  const double c2a = ca * ca;

  CoefficientSet k;
  k.A1 = 2.0 * (a + b * sa) / c2a;
  k.A2 = 2.0 * (b + a * sa) / c2a;
  k.C1 = Complex(2.0 * c / c2a, 2.0 * d * sa / c2a + s * sa);
  k.C2 = Complex(2.0 * d / c2a + s, -2.0 * c * sa / c2a);
  k.A1p = (a + 2.0 * b * sa + a * sa * sa) / c2a;
  k.A2p = (b + b * sa * sa + 2.0 * a * sa) / c2a;
  k.C1p = c;
  k.C2p = s * c2a + d;
  return k;
}

SpectralData spectral_data(const PTParams& p, const Perturbation& pert, const Tolerances& tol) {
  const CoefficientSet k = coefficients(p, pert, tol);
  const LevelPair levels = pt_eigenvalues(p, tol);

  const Complex disc = k.perp_discriminant();
  const double scale = std::max({1.0, std::abs(k.C1), std::abs(k.C2), std::abs(k.A2)});
  const double allowed = tol.spectral_imaginary * scale * scale;
  if (std::abs(disc.imag()) > allowed || disc.real() < -allowed) {
    throw InternalInconsistency("spectral_data: (H_perp)' discriminant is not real and nonnegative: " +
                                std::to_string(disc.real()) + " + " + std::to_string(disc.imag()) + "i");
  }
  const double root_p = std::sqrt(std::max(disc.real(), 0.0));
  const double root_pp = std::sqrt(k.h4_discriminant());

  SpectralData out;
  out.lambda_minus = levels.lower;
  out.lambda_plus = levels.upper;
  out.lambda_p_minus = p.E0 + k.A1 - root_p;
  out.lambda_p_plus = p.E0 + k.A1 + root_p;
  out.lambda_pp_minus = p.E0 + k.A1p - root_pp;
  out.lambda_pp_plus = p.E0 + k.A1p + root_pp;
  out.omega0 = p.omega0();
  out.omega0_p = 2.0 * root_p;
  out.omega0_pp = 2.0 * root_pp;
  out.E0_prime = p.E0 + k.A1;
  return out;
}

CMatrix perp_from_coefficients(const PTParams& p, const CoefficientSet& k) {
  const Complex i(0.0, 1.0);
  const Complex diag = p.E0 + k.A1;
  return CMatrix{{diag + k.C1, k.C2 + i * k.A2}, {k.C2 - i * k.A2, diag - k.C1}};
}

CMatrix h4_from_coefficients(const PTParams& p, const CoefficientSet& k) {
  const double diag = p.E0 + k.A1p;
  return CMatrix{{diag + k.C1p, Complex(k.C2p, k.A2p)}, {Complex(k.C2p, -k.A2p), diag - k.C1p}};
}

}  // namespace dlab
