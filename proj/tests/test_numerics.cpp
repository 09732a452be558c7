#include <catch2/catch.hpp>

#include <cmath>

#include "dilation_lab/errors.hpp"
#include "dilation_lab/numerics.hpp"
#include "dilation_lab/spectra.hpp"
#include "oracles.hpp"

using namespace dlab;

namespace {

double reconstruction_error(const CMatrix& m, const EigenDecomposition& e) {
  CMatrix d(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.rows(); ++k) d(k, k) = e.eigenvalues[k];
  return oracle::max_abs_diff(e.eigenvectors * d * e.eigenvectors.adjoint(), m);
}

double orthonormality_error(const CMatrix& v) {
  return oracle::max_abs_diff(v.adjoint() * v, CMatrix::identity(v.cols()));
}

}  // namespace

TEST_CASE("herm_eig on the identity keeps a phase-fixed orthonormal basis") {
  const auto e = herm_eig(CMatrix::identity(2));
  CHECK(e.eigenvalues[0] == Approx(1.0));
  CHECK(e.eigenvalues[1] == Approx(1.0));
  CHECK(orthonormality_error(e.eigenvectors) < 1e-12);
  for (std::size_t k = 0; k < 2; ++k) {
    const CMatrix v = e.eigenvectors.col(k);
    const Complex first = std::abs(v(0, 0)) > 1e-12 ? v(0, 0) : v(1, 0);
    CHECK(first.imag() == 0.0);
    CHECK(first.real() > 0.0);
  }
}

TEST_CASE("herm_eig of sigma_x gives -1 and +1") {
  const auto e = herm_eig(sigma_x());
  CHECK(e.eigenvalues[0] == Approx(-1.0).margin(1e-14));
  CHECK(e.eigenvalues[1] == Approx(1.0).margin(1e-14));
  CHECK(reconstruction_error(sigma_x(), e) < 1e-12);
}

TEST_CASE("herm_eig of H4' at the example point matches Eigen and the closed form") {
  const PTParams p{1.0, 1.0, M_PI / 6};
  const Perturbation pert{0.1, 0.05, 0.2, -0.1};
  const auto blocks = oracle::general_blocks(1.0, 1.0, M_PI / 6, 0.1, 0.05, 0.2, -0.1);
  const auto e = herm_eig(blocks.H4);
  const auto ref = oracle::herm_eigenvalues(blocks.H4);
  CHECK(e.eigenvalues[0] == Approx(ref[0]).margin(1e-12));
  CHECK(e.eigenvalues[1] == Approx(ref[1]).margin(1e-12));
  const SpectralData sd = spectral_data(p, pert);
  CHECK(e.eigenvalues[0] == Approx(sd.lambda_pp_minus).margin(1e-9));
  CHECK(e.eigenvalues[1] == Approx(sd.lambda_pp_plus).margin(1e-9));
}

TEST_CASE("herm_eig rejects non-Hermitian input and reports the residual") {
  CMatrix m = sigma_x();
  m(0, 1) = 1.5;
  try {
    herm_eig(m);
    FAIL("expected HermiticityError");
  } catch (const HermiticityError& e) {
    CHECK(e.residual() == Approx(0.5));
  }
}

TEST_CASE("herm_eig reconstructs 1000 random Hermitian matrices") {
  oracle::Sampler rng(11);
  double worst_rec = 0.0, worst_orth = 0.0, worst_res = 0.0, worst_eig = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = trial % 2 ? 4 : 2;
    const CMatrix m = rng.hermitian(n, 3.0);
    const auto e = herm_eig(m);
    worst_rec = std::max(worst_rec, reconstruction_error(m, e));
    worst_orth = std::max(worst_orth, orthonormality_error(e.eigenvectors));
    for (std::size_t k = 0; k < n; ++k) {
      const CMatrix v = e.eigenvectors.col(k);
      worst_res = std::max(worst_res, vector_norm(m * v - Complex(e.eigenvalues[k]) * v));
    }
    const auto ref = oracle::herm_eigenvalues(m);
    for (std::size_t k = 0; k < n; ++k) worst_eig = std::max(worst_eig, std::abs(ref[k] - e.eigenvalues[k]));
    REQUIRE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
  }
  CHECK(worst_rec < 1e-10);
  CHECK(worst_orth < 1e-12);
  CHECK(worst_res < 1e-10);
  CHECK(worst_eig < 1e-10);
}

TEST_CASE("herm_eig is bitwise deterministic and handles degenerate blocks") {
  oracle::Sampler rng(5);
  const CMatrix m = rng.hermitian(4);
  const auto e1 = herm_eig(m);
  const auto e2 = herm_eig(m);
  CHECK(e1.eigenvalues == e2.eigenvalues);
  CHECK(e1.eigenvectors == e2.eigenvectors);

  // I2 (x) sigma_x has two doubly degenerate levels.
  const CMatrix deg = kron(CMatrix::identity(2), sigma_x());
  const auto e = herm_eig(deg);
  CHECK(orthonormality_error(e.eigenvectors) < 1e-12);
  CHECK(reconstruction_error(deg, e) < 1e-12);
}

TEST_CASE("general_eig2 examples") {
  const CMatrix nil{{0.0, 1.0}, {0.0, 0.0}};
  const auto [z0, z1] = general_eig2(nil);
  CHECK(std::abs(z0) < 1e-15);
  CHECK(std::abs(z1) < 1e-15);

  const auto [lo, hi] = general_eig2(oracle::pt_matrix(0.0, 1.0, M_PI / 6));
  CHECK(lo.real() == Approx(-std::cos(M_PI / 6)).margin(1e-12));
  CHECK(hi.real() == Approx(std::cos(M_PI / 6)).margin(1e-12));
  CHECK(std::abs(lo.imag()) < 1e-12);

  const auto blocks = oracle::general_blocks(1.0, 1.0, M_PI / 6, 0.1, 0.05, 0.2, -0.1);
  const auto [plo, phi] = general_eig2(blocks.perp);
  const SpectralData sd = spectral_data({1.0, 1.0, M_PI / 6}, {0.1, 0.05, 0.2, -0.1});
  CHECK(plo.real() == Approx(sd.lambda_p_minus).margin(1e-9));
  CHECK(phi.real() == Approx(sd.lambda_p_plus).margin(1e-9));
}

TEST_CASE("general_eig2 roots satisfy the characteristic polynomial") {
  oracle::Sampler rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    CMatrix m(2, 2);
    for (auto& z : m.data()) z = Complex(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Complex tr = m.trace();
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const auto [l0, l1] = general_eig2(m);
    for (Complex l : {l0, l1}) worst = std::max(worst, std::abs(l * l - tr * l + det));
    worst = std::max(worst, std::abs(l0 + l1 - tr));
    worst = std::max(worst, std::abs(l0 * l1 - det));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("general_eig returns eigenpairs for 2x2 and larger matrices") {
  oracle::Sampler rng(29);
  for (std::size_t n : {2u, 3u, 4u}) {
    CMatrix m(n, n);
    for (auto& z : m.data()) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const GeneralEigen e = general_eig(m);
    for (std::size_t k = 0; k < n; ++k) {
      const CMatrix v = e.eigenvectors.col(k);
      CHECK(vector_norm(m * v - e.eigenvalues[k] * v) < 1e-10 * std::max(1.0, vector_norm(v)));
    }
  }
}

TEST_CASE("mat_exp_herm examples") {
  CHECK(oracle::max_abs_diff(mat_exp_herm(sigma_x(), 0.0), CMatrix::identity(2)) < 1e-15);
  CHECK(oracle::max_abs_diff(mat_exp_herm(sigma_z(), M_PI), -1.0 * CMatrix::identity(2)) < 1e-12);

  oracle::Sampler rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix m = rng.hermitian(4, 2.0);
    const CMatrix u = mat_exp_herm(m, 0.7);
    CHECK(oracle::max_abs_diff(u, oracle::taylor_exp(m, 0.7)) < 1e-9);
    CHECK(oracle::max_abs_diff(u.adjoint() * u, CMatrix::identity(4)) < 1e-10);
  }
  CMatrix bad = sigma_x();
  bad(1, 0) = 2.0;
  CHECK_THROWS_AS(mat_exp_herm(bad, 1.0), HermiticityError);
}

TEST_CASE("sqrt_pd examples") {
  CHECK(oracle::max_abs_diff(sqrt_pd(CMatrix::identity(2)), CMatrix::identity(2)) < 1e-14);
  const CMatrix d{{4.0, 0.0}, {0.0, 9.0}};
  CHECK(oracle::max_abs_diff(sqrt_pd(d), CMatrix{{2.0, 0.0}, {0.0, 3.0}}) < 1e-14);

  oracle::Sampler rng(37);
  for (std::size_t n : {2u, 4u, 6u}) {
    CMatrix a(n, n);
    for (auto& z : a.data()) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const CMatrix m = a.adjoint() * a + CMatrix::identity(n);
    const CMatrix r = sqrt_pd(m);
    CHECK(hermiticity_residual(r) < 1e-12);
    CHECK(oracle::max_abs_diff(r * r, m) < 1e-10);
    CHECK(oracle::herm_eigenvalues(r)[0] > 0.0);
  }
  CHECK_THROWS_AS(sqrt_pd(CMatrix{{1.0, 0.0}, {0.0, 0.0}}), NotPositiveDefinite);
  CHECK_THROWS_AS(sqrt_pd(CMatrix{{1.0, 0.0}, {0.0, -1.0}}), NotPositiveDefinite);
}

TEST_CASE("inverse2 examples") {
  CHECK(oracle::max_abs_diff(inverse2(CMatrix::identity(2)), CMatrix::identity(2)) < 1e-15);
  CHECK(oracle::max_abs_diff(inverse2(CMatrix{{2.0, 0.0}, {0.0, 4.0}}), CMatrix{{0.5, 0.0}, {0.0, 0.25}}) < 1e-15);
  const CMatrix t = oracle::tau_matrix(M_PI / 6);
  CHECK(oracle::max_abs_diff(t * inverse2(t), CMatrix::identity(2)) < 1e-10);
  CHECK_THROWS_AS(inverse2(CMatrix{{1.0, 2.0}, {2.0, 4.0}}), SingularMatrix);
}

TEST_CASE("general inverse agrees with Eigen") {
  oracle::Sampler rng(41);
  CMatrix m(4, 4);
  for (auto& z : m.data()) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const CMatrix ref = oracle::from_eigen(oracle::to_eigen(m).inverse());
  CHECK(oracle::max_abs_diff(inverse(m), ref) < 1e-10);
}

TEST_CASE("kron and assemble_blocks follow the outer-factor convention") {
  const CMatrix k = kron(sigma_z(), sigma_x());
  CHECK(k(0, 1) == Complex(1.0));
  CHECK(k(2, 3) == Complex(-1.0));
  CHECK(k(0, 2) == Complex(0.0));
  const CMatrix b = assemble_blocks(sigma_x(), sigma_y(), sigma_z(), CMatrix::identity(2));
  CHECK(b.block(0, 2, 2, 2) == sigma_y());
  CHECK(b.block(2, 0, 2, 2) == sigma_z());
}

TEST_CASE("tolerances scale uniformly and reject bad factors") {
  const Tolerances t = Tolerances::defaults().scaled(10.0);
  CHECK(t.hermiticity == Approx(1e-9));
  CHECK(t.dual_path == Approx(1e-7));
  CHECK_THROWS_AS(Tolerances::defaults().scaled(0.0), ValidationError);
  CHECK_THROWS_AS(Tolerances::defaults().scaled(-1.0), ValidationError);
}
