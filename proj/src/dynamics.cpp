#include "dilation_lab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "dilation_lab/errors.hpp"
#include "dilation_lab/random.hpp"

namespace dlab {

namespace {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double total = na + nb;
    const double delta = o.mean - mean;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }
};

Moments draw_shard(const std::vector<double>& cumulative, const std::vector<double>& values, std::size_t count,
                   RandomStream rng) {
  Moments m;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = rng.uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
    if (k >= values.size()) k = values.size() - 1;
    m.push(values[k]);
  }
  return m;
}

}  // namespace

double EvolutionReport::max_residual() const {
  double r = 0.0;
  for (double x : postselect_residuals) r = std::max(r, x);
  return r;
}

double EvolutionReport::min_fidelity() const {
  double f = 1.0;
  for (double x : fidelities) f = std::min(f, x);
  return f;
}

CMatrix propagator(const CMatrix& h, double t) {
  const GeneralEigen e = general_eig(h);
  const std::size_t n = h.rows();
  CMatrix phases(n, n);
  for (std::size_t k = 0; k < n; ++k) phases(k, k) = std::exp(Complex(0.0, -t) * e.eigenvalues[k]);
  return e.eigenvectors * phases * inverse(e.eigenvectors);
}

EvolutionReport evolve_check(const DilatedHamiltonian& d, const CMatrix& psi0, std::span<const double> times,
                             const Tolerances& tol) {
  const std::size_t n = d.target.rows();
  if (psi0.rows() != n || psi0.cols() != 1) throw ValidationError("evolve_check: psi0 has the wrong shape");
  if (std::abs(vector_norm(psi0) - 1.0) > tol.normalization) throw NotNormalized("evolve_check: psi0 must be a unit vector");

  CMatrix phi0 = stack(psi0, d.tau.matrix * psi0);
  phi0 *= Complex(1.0 / vector_norm(phi0));

  const GeneralEigen he = general_eig(d.target);
  const CMatrix s_inv = inverse(he.eigenvectors, tol);
  const EigenDecomposition big = herm_eig(d.assembled, tol);
  const std::size_t m = d.assembled.rows();

  EvolutionReport r;
  for (double t : times) {
    CMatrix phase(m, m);
    for (std::size_t k = 0; k < m; ++k) phase(k, k) = std::exp(Complex(0.0, -t * big.eigenvalues[k]));
    const CMatrix phi = big.eigenvectors * phase * big.eigenvectors.adjoint() * phi0;
    const CMatrix x = phi.block(0, 0, n, 1);

    CMatrix small(n, n);
    for (std::size_t k = 0; k < n; ++k) small(k, k) = std::exp(Complex(0.0, -t) * he.eigenvalues[k]);
    const CMatrix y = he.eigenvectors * small * s_inv * psi0;

    const double xx = std::real(inner(x, x));
    double residual = vector_norm(y);
    double fidelity = 0.0;
    if (xx > 0.0) {
      const Complex gamma = inner(x, y) / xx;
      residual = vector_norm(gamma * x - y);
      fidelity = std::abs(inner(x, y)) / (std::sqrt(xx) * vector_norm(y));
    }
    r.times.push_back(t);
    r.postselect_residuals.push_back(residual);
    r.norm_ratios.push_back(xx);
    r.fidelities.push_back(fidelity);
  }
  return r;
}

EvolutionReport evolve_check(const PTParams& p, const Perturbation& pert, const CMatrix& psi0,
                             std::span<const double> times, const Tolerances& tol) {
  return evolve_check(build_general_dilation(p, pert, tol), psi0, times, tol);
}

SampleEstimate sample_expectation(const CMatrix& g, std::size_t ancilla, const LocalState& u, std::size_t n,
                                  std::uint64_t seed, LocalSetting setting, std::size_t workers,
                                  const Tolerances& tol) {
  if (g.rows() != 4 || g.cols() != 4) throw ValidationError("sample_expectation: expected a 4x4 Hamiltonian");
  if (ancilla > 1) throw ValidationError("sample_expectation: ancilla index must be 0 or 1");
  if (n == 0) throw ValidationError("sample_expectation: need at least one sample");
  if (workers == 0) throw ValidationError("sample_expectation: need at least one worker");
  u.validate(tol);

  const EigenDecomposition e = herm_eig(g, tol);
  const CMatrix local = setting == LocalSetting::A0 ? u.plus() : u.minus();
  CMatrix ket(4, 1);
  ket(2 * ancilla, 0) = local(0, 0);
  ket(2 * ancilla + 1, 0) = local(1, 0);

  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    total += std::norm(inner(e.eigenvectors.col(k), ket));
    cumulative.push_back(total);
  }
  if (std::abs(total - 1.0) > tol.probability) {
    throw InternalInconsistency("sample_expectation: Born weights do not sum to one");
  }
  for (double& c : cumulative) c /= total;

  workers = std::min(workers, n);
  std::vector<std::size_t> counts(workers, n / workers);
  for (std::size_t k = 0; k < n % workers; ++k) ++counts[k];

  const RandomStream root(seed);
  std::vector<Moments> shards(workers);
  if (workers == 1) {
    shards[0] = draw_shard(cumulative, e.eigenvalues, counts[0], root.split(0));
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) {
      pool.emplace_back([&, k] { shards[k] = draw_shard(cumulative, e.eigenvalues, counts[k], root.split(k)); });
    }
    for (auto& t : pool) t.join();
  }
  Moments all;
  for (const auto& s : shards) all.merge(s);

  SampleEstimate est;
  est.mean = all.mean;
  est.std_error = n > 1 ? std::sqrt(all.m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  est.n = n;
  est.seed = seed;
  est.workers = workers;
  return est;
}

SampleEstimate sample_bell(const PTParams& p, const Perturbation& pert, const LocalState& u, std::size_t n,
                           std::uint64_t seed, std::size_t workers, const Tolerances& tol) {
  const DilatedHamiltonian d = build_general_dilation(p, pert, tol);
  const auto run = [&](std::size_t j, LocalSetting setting, std::uint64_t index) {
    return sample_expectation(d.assembled, j, u, n, derive_seed(seed, index), setting, workers, tol);
  };
  const SampleEstimate m00 = run(0, LocalSetting::A0, 0);
  const SampleEstimate m01 = run(0, LocalSetting::A1, 1);
  const SampleEstimate m10 = run(1, LocalSetting::A0, 2);
  const SampleEstimate m11 = run(1, LocalSetting::A1, 3);

  SampleEstimate est;
  est.mean = m00.mean + m01.mean + m10.mean - m11.mean;
  est.std_error = std::sqrt(m00.std_error * m00.std_error + m01.std_error * m01.std_error +
                            m10.std_error * m10.std_error + m11.std_error * m11.std_error);
  est.n = n;
  est.seed = seed;
  est.workers = m00.workers;
  return est;
}

}  // namespace dlab
