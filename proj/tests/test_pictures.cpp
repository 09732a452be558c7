#include <catch2/catch.hpp>

#include <cmath>

#include "dilation_lab/errors.hpp"
#include "dilation_lab/pictures.hpp"
#include "oracles.hpp"

using namespace dlab;

namespace {

const PTParams kExample{1.0, 1.0, M_PI / 6};
const Perturbation kPert{0.1, 0.05, 0.2, -0.1};
const double kR = 1.0 / std::sqrt(2.0);

double overlap(const CMatrix& a, const LocalState& u) {
  return std::norm(std::conj(a(0, 0)) * u.u + std::conj(a(1, 0)) * u.v);
}

CMatrix projector(const CMatrix& v) { return v * v.adjoint(); }

// Local stand-ins typed in from their spectral definitions: H_h carries
// E0 + s cos(alpha) on basis.plus, (H_perp)'_h carries its upper level on basis_p.plus.
CMatrix oracle_h(const PTParams& p, const StateBasis& b) {
  const double c = p.s * std::cos(p.alpha);
  return Complex(p.E0 + c) * projector(b.plus) + Complex(p.E0 - c) * projector(b.minus);
}

CMatrix oracle_perp_h(const PTParams& p, const Perturbation& pert, const StateBasis& b) {
  const auto blocks = oracle::general_blocks(p.E0, p.s, p.alpha, pert.a, pert.b, pert.c, pert.d);
  const auto ev = oracle::general_eigenvalues(blocks.perp);
  return Complex(ev[1].real()) * projector(b.plus) + Complex(ev[0].real()) * projector(b.minus);
}

void check_decomposition(const PictureResult& r) {
  CHECK(r.value == Approx(r.constant_part + r.shift + r.deviation).margin(1e-10));
  CHECK(std::abs(r.deviation) <= r.bound + 1e-9);
  CHECK(r.bound >= 0.0);
}

}  // namespace

TEST_CASE("correlators examples") {
  oracle::Sampler rng(401);
  const LocalState u = rng.state();
  const Correlators id = correlators(CMatrix::identity(4), u);
  CHECK(id.b0a0 == Approx(1.0));
  CHECK(id.b1a0 == Approx(1.0));
  CHECK(id.b0a1 == Approx(1.0));
  CHECK(id.b1a1 == Approx(1.0));

  const CMatrix special = build_general_dilation(kExample, {}).assembled;
  CHECK(correlators(special, {1.0, 0.0}).bell() == Approx(2.0).margin(1e-12));

  const Correlators z = correlators(kron(CMatrix::identity(2), sigma_z()), {1.0, 0.0});
  CHECK(z.b0a0 == Approx(1.0));
  CHECK(z.b1a0 == Approx(1.0));
  CHECK(z.b0a1 == Approx(-1.0));
  CHECK(z.b1a1 == Approx(-1.0));

  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix g = rng.hermitian(4, 2.0);
    const LocalState w = rng.state();
    CHECK(correlators(g, w).bell() == Approx(oracle::bell_trace(g, w.u, w.v)).margin(1e-12));
  }

  CMatrix bad = CMatrix::identity(4);
  bad(0, 3) = 0.1;
  CHECK_THROWS_AS(correlators(bad, u), HermiticityError);
}

TEST_CASE("simulation picture examples") {
  SECTION("pert = 0, u = |0>") {
    const PictureResult r = bell_simulation(kExample, {}, {1.0, 0.0});
    CHECK(r.value == Approx(2.0).margin(1e-12));
    CHECK(r.deviation == Approx(0.0).margin(1e-12));
    CHECK(r.bound == Approx(std::abs(kExample.omega0() * std::cos(kExample.alpha))));
    CHECK(r.shift == 0.0);
  }
  SECTION("pert = 0, u = |+>") {
    const PictureResult r = bell_simulation(kExample, {}, {kR, kR});
    CHECK(r.value == Approx(2.0 + kExample.omega0() * std::cos(kExample.alpha)).margin(1e-12));
  }
  SECTION("example point, three routes") {
    const LocalState u{kR, kR};
    const PictureResult r = bell_simulation(kExample, kPert, u);
    const auto blocks = oracle::general_blocks(1.0, 1.0, M_PI / 6, 0.1, 0.05, 0.2, -0.1);
    CHECK(r.value == Approx(oracle::bell_trace(blocks.assembled, u.u, u.v)).margin(1e-9));
    CHECK(r.value == Approx(simulation_explicit_value(kExample, kPert, u)).margin(1e-9));
    CHECK(r.cross_check == Approx(r.value).margin(1e-9));
    CHECK(r.shift == Approx(0.2));
    check_decomposition(r);
  }
}

TEST_CASE("classical picture examples") {
  const SpectralData sd = spectral_data(kExample, kPert);
  SECTION("uniform probabilities") {
    const PictureResult r = bell_classical(kExample, kPert, {});
    CHECK(r.value == Approx(kExample.E0 + sd.E0_prime));
    CHECK(r.deviation == Approx(0.0).margin(1e-15));
    CHECK(r.constant_part == Approx(kExample.E0 + sd.E0_prime));
  }
  SECTION("special case with certain outcomes") {
    Probabilities pr;
    pr.p_plus = 1.0, pr.p_minus = 0.0, pr.pp_plus = 1.0, pr.pp_minus = 0.0;
    const PictureResult r = bell_classical(kExample, {}, pr);
    CHECK(r.value == Approx(2.0 * kExample.E0 + kExample.omega0()));
  }
  SECTION("extreme points attain the bound") {
    for (double s : {1.0, -1.0}) {
      const PTParams p{0.3, s, 0.4};
      double best = 0.0, bound = 0.0;
      for (double x : {0.0, 1.0})
        for (double y : {0.0, 1.0}) {
          const PictureResult r = bell_classical(p, kPert, {x, 1 - x, y, 1 - y, 0.5, 0.5});
          best = std::max(best, std::abs(r.deviation));
          bound = r.bound;
        }
      CHECK(best == Approx(bound).margin(1e-12));
    }
  }
  SECTION("invalid probabilities") {
    CHECK_THROWS_AS(bell_classical(kExample, kPert, {0.7, 0.7, 0.5, 0.5, 0.5, 0.5}), InvalidProbability);
    CHECK_THROWS_AS(bell_classical(kExample, kPert, {1.2, -0.2, 0.5, 0.5, 0.5, 0.5}), InvalidProbability);
  }
}

TEST_CASE("biased classical value") {
  CHECK(bell_classical_biased(kExample, {}).value == Approx(2.0));
  Probabilities pr;
  pr.p_plus = 1.0, pr.p_minus = 0.0;
  CHECK(bell_classical_biased(kExample, pr).value == Approx(2.0 + kExample.omega0()));
  // No perturbation argument: the value is the same for any dilation.
  check_decomposition(bell_classical_biased(kExample, pr));
}

TEST_CASE("local Hermitian picture examples") {
  SECTION("balanced overlap gives 2 E0") {
    const PictureResult r = bell_local_hermitian(kExample, kPert, {kR, kR}, StateBasis::computational());
    CHECK(r.value == Approx(2.0 * kExample.E0).margin(1e-12));
  }
  SECTION("state aligned with s'+") {
    const StateBasis bp = StateBasis::rotated(0.3, 0.2);
    const LocalState u{bp.plus(0, 0), bp.plus(1, 0)};
    const PictureResult r = bell_local_hermitian(kExample, {}, u, bp);
    CHECK(r.value == Approx(2.0 * kExample.E0 + std::abs(kExample.omega0())).margin(1e-12));
  }
  SECTION("example point, trace against typed-in global Hamiltonian") {
    const StateBasis basis = StateBasis::computational();
    const StateBasis bp = StateBasis::rotated(0.4, 0.2);
    const LocalState u = LocalState::from_angles(0.3, 0.7);
    const PictureResult r = bell_local_hermitian(kExample, kPert, u, bp, basis);
    const CMatrix zero(2, 2);
    const CMatrix global = assemble_blocks(oracle_h(kExample, basis), zero, zero, oracle_perp_h(kExample, kPert, bp));
    CHECK(r.value == Approx(oracle::bell_trace(global, u.u, u.v)).margin(1e-9));
    CHECK(r.shift == 0.0);
    check_decomposition(r);
  }
  SECTION("non-orthonormal basis") {
    StateBasis bad = StateBasis::computational();
    bad.minus = CMatrix::column({kR, kR});
    CHECK_THROWS_AS(bell_local_hermitian(kExample, kPert, {1.0, 0.0}, bad), NonOrthonormalBasis);
  }
}

TEST_CASE("genuine local Hermitian picture examples") {
  SECTION("identical bases and no perturbation reduce to the classical picture") {
    const StateBasis b = StateBasis::computational();
    const LocalState u = LocalState::from_angles(0.5, 1.1);
    const PictureResult g = bell_genuine_local(kExample, {}, u, b, b);
    const Probabilities pr = probabilities_from_state(kExample, {}, u, b, b);
    CHECK(g.value == Approx(bell_classical(kExample, {}, pr).value).margin(1e-12));
    const SpectralData sd = spectral_data(kExample, {});
    CHECK(g.bound == Approx(0.5 * (std::abs(sd.omega0) + sd.omega0_p)));
  }
  SECTION("bound at delta = pi/4 with equal gaps") {
    CHECK(genuine_bound(1.7, 1.7, std::cos(M_PI / 4)) == Approx(std::sqrt(1.7 * 1.7 / 2.0)));
  }
  SECTION("example point, trace against typed-in tensor product") {
    const StateBasis basis = StateBasis::rotated(0.1, 0.0);
    const StateBasis bp = StateBasis::rotated(0.6, 0.5);
    const LocalState u = LocalState::from_angles(0.9, 2.0);
    const PictureResult r = bell_genuine_local(kExample, kPert, u, basis, bp);
    const CMatrix local = 0.5 * (oracle_h(kExample, basis) + oracle_perp_h(kExample, kPert, bp));
    CHECK(r.value == Approx(oracle::bell_trace(kron(CMatrix::identity(2), local), u.u, u.v)).margin(1e-9));
    check_decomposition(r);
  }
}

TEST_CASE("picture invariants over random inputs") {
  oracle::Sampler rng(409);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = rng.draw();
    const PTParams p = oracle::params(d);
    const Perturbation pert = oracle::pert(d);
    const LocalState u = rng.state();
    const StateBasis basis = StateBasis::rotated(rng.uniform(0, M_PI), rng.uniform(0, 2 * M_PI));
    const StateBasis bp = StateBasis::rotated(rng.uniform(0, M_PI), rng.uniform(0, 2 * M_PI));
    const Probabilities pr = probabilities_from_state(p, pert, u, basis, bp);

    const PictureResult sim = bell_simulation(p, pert, u);
    const PictureResult cls = bell_classical(p, pert, pr);
    const PictureResult bias = bell_classical_biased(p, pr);
    const PictureResult loc = bell_local_hermitian(p, pert, u, bp, basis);
    const PictureResult gen = bell_genuine_local(p, pert, u, basis, bp);
    for (const auto& r : {sim, cls, bias, loc, gen}) check_decomposition(r);

    CHECK(cls.value == Approx(gen.value).margin(1e-10));
    CHECK(pr.ppp_plus - pr.ppp_minus == Approx(sim.deviation / std::max(sim.bound, 1e-300)).margin(1e-9));
    CHECK(pr.p_plus == Approx(overlap(basis.plus, u)));
  }
}

TEST_CASE("special case collapse to the two-fold expressions") {
  oracle::Sampler rng(419);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = rng.draw();
    const PTParams p = oracle::params(d);
    const LocalState u = rng.state();
    const StateBasis b = StateBasis::rotated(rng.uniform(0, M_PI), rng.uniform(0, 2 * M_PI));
    const double w = p.omega0();
    // Labels: s+ carries E0 + s cos(alpha). The perp stand-in puts its upper level on b.plus.
    const double p_plus_h = overlap(b.plus, u);
    const double p_plus_label = w >= 0 ? overlap(b.plus, u) : overlap(b.minus, u);
    const double p_minus_label = 1.0 - p_plus_label;

    const Complex z = std::conj(u.u) * u.v + u.u * std::conj(u.v);
    CHECK(bell_simulation(p, {}, u).value == Approx(2 * d.E0 + z.real() * w * std::cos(d.alpha)).margin(1e-10));
    CHECK(bell_local_hermitian(p, {}, u, b).value == Approx(2 * d.E0 + w * (p_plus_label - p_minus_label)).margin(1e-10));

    Probabilities pr;
    pr.p_plus = p_plus_label, pr.p_minus = p_minus_label;
    pr.pp_plus = p_plus_h, pr.pp_minus = 1.0 - p_plus_h;
    if (w < 0) pr.p_plus = 1.0 - p_plus_h, pr.p_minus = p_plus_h;
    CHECK(bell_classical(p, {}, pr).value == Approx(2 * d.E0 + w * (pr.p_plus - pr.p_minus)).margin(1e-10));
  }
}

TEST_CASE("indistinguishable point gives equal shift and bound") {
  oracle::Sampler rng(421);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = rng.draw();
    const PTParams p = oracle::params(d);
    const double ca = std::cos(d.alpha);
    const Perturbation pert{0, 0, 0, d.s * (ca * ca - ca * ca * ca) / (ca - 2.0)};
    const LocalState u = rng.state();
    const PictureResult sim = bell_simulation(p, pert, u);
    const PictureResult loc = bell_local_hermitian(p, pert, u, StateBasis::computational());
    CHECK(sim.shift == 0.0);
    CHECK(loc.shift == 0.0);
    CHECK(sim.bound == Approx(loc.bound).margin(1e-9));
  }
}

TEST_CASE("saturation scans") {
  const ScanGrid grid;
  SECTION("simulation, no perturbation") {
    const ScanReport r = saturation_scan(kExample, {}, Picture::simulation, grid);
    CHECK(r.within_bound);
    CHECK(r.bound == Approx(std::abs(kExample.omega0() * std::cos(kExample.alpha))));
    CHECK(r.saturation_ratio >= 0.99);
  }
  SECTION("genuine with cos 2 delta = 1") {
    const StateBasis b = StateBasis::rotated(0.3, 0.4);
    const ScanReport r = saturation_scan(kExample, kPert, Picture::genuine_local_hermitian, grid, b, b);
    const SpectralData sd = spectral_data(kExample, kPert);
    CHECK(r.bound == Approx(0.5 * (std::abs(sd.omega0) + sd.omega0_p)));
    CHECK(r.within_bound);
    CHECK(r.saturation_ratio >= 0.99);
  }
  SECTION("classical attains its bound exactly") {
    const ScanReport r = saturation_scan(kExample, kPert, Picture::classical, grid);
    CHECK(r.max_abs_deviation == Approx(r.bound).margin(1e-12));
  }
  SECTION("deterministic and smallest index on ties") {
    const ScanReport a = saturation_scan(kExample, kPert, Picture::local_hermitian, grid);
    const ScanReport b = saturation_scan(kExample, kPert, Picture::local_hermitian, grid);
    CHECK(a.max_abs_deviation == b.max_abs_deviation);
    CHECK(a.arg_theta == b.arg_theta);
    CHECK(a.arg_phi == b.arg_phi);
    // p+ = 0 and p+ = 1 give exactly opposite deviations; the lower index wins.
    const ScanReport biased = saturation_scan(kExample, kPert, Picture::classical_biased, {64, 64, false});
    CHECK(biased.arg_theta == 0);
    CHECK(biased.max_abs_deviation == Approx(std::abs(kExample.omega0())));
  }
  SECTION("too coarse a grid") {
    CHECK_THROWS_AS(saturation_scan(kExample, kPert, Picture::simulation, {32, 256, true}), ValidationError);
  }
}

TEST_CASE("picture names round trip") {
  for (Picture p : kAllPictures) CHECK(picture_from_string(to_string(p)) == p);
  CHECK_FALSE(picture_from_string("quantum").has_value());
}
