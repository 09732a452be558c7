#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dilation_lab/dilation.hpp"
#include "dilation_lab/pt_model.hpp"

namespace dlab {

struct EvolutionReport {
  std::vector<double> times;
  std::vector<double> postselect_residuals;  // ||gamma * top(Phi(t)) - e^{-itH} psi0|| with optimal gamma
  std::vector<double> norm_ratios;           // ||top(Phi(t))||^2, the post-selection success probability
  std::vector<double> fidelities;            // |<top normalized, e^{-itH} psi0 normalized>|

  double max_residual() const;
  double min_fidelity() const;
};

/// Evolves psi0 (+) tau psi0 under the dilation and compares the ancilla-|0>
/// block with e^{-itH} psi0 as rays.
EvolutionReport evolve_check(const DilatedHamiltonian& d, const CMatrix& psi0, std::span<const double> times,
                             const Tolerances& tol = Tolerances::defaults());
EvolutionReport evolve_check(const PTParams& p, const Perturbation& pert, const CMatrix& psi0,
                             std::span<const double> times, const Tolerances& tol = Tolerances::defaults());

/// e^{-itH} for a diagonalizable (possibly non-Hermitian) H.
CMatrix propagator(const CMatrix& h, double t);

enum class LocalSetting { A0, A1 };  // Alice's |u+> or |u->

struct SampleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// Samples eigenvalues of G with Born weights |<e_k| j (x) u>|^2. The n draws
/// are split into `workers` contiguous shards, shard k drawing from
/// RandomStream(seed).split(k); the estimate depends only on (seed, n, workers).
SampleEstimate sample_expectation(const CMatrix& g, std::size_t ancilla, const LocalState& u, std::size_t n,
                                  std::uint64_t seed, LocalSetting setting = LocalSetting::A0,
                                  std::size_t workers = 1, const Tolerances& tol = Tolerances::defaults());

/// Monte Carlo estimate of B0A0 + B0A1 + B1A0 - B1A1 on the general dilation;
/// each of the four terms uses n draws and its own derived seed.
SampleEstimate sample_bell(const PTParams& p, const Perturbation& pert, const LocalState& u, std::size_t n,
                           std::uint64_t seed, std::size_t workers = 1,
                           const Tolerances& tol = Tolerances::defaults());

}  // namespace dlab
