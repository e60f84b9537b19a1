#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rydvmc/lattice.hpp"
#include "rydvmc/wavefunction.hpp"

namespace rydvmc {

// Stochastic estimate of the energy expectation value: mean of the local
// energy over n_samples autoregressive draws, with the standard error of the
// mean.
struct EnergyEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

// Local energy H_loc(sigma) = <sigma|H|Psi> / <sigma|Psi>:
//   diagonal_energy(sigma) - (omega/2) * sum_i Psi(flip_i sigma) / Psi(sigma)
// with the amplitude ratios evaluated in log space. Performs exactly N+1
// forward passes (one for sigma, one per single-site flip).
double local_energy(const HamiltonianSpec& spec, const RnnParams& params,
                    const Configuration& sigma);

// Same formula with an arbitrary log-probability in place of the RNN; lets
// tests plug in exact ground-state amplitudes.
double local_energy(const HamiltonianSpec& spec,
                    const std::function<double(const Configuration&)>& logprob,
                    const Configuration& sigma);

// Batched local energies. Reuses the shared prefix of the autoregressive
// chain across the N flips of each sample, which is bit-identical to the
// naive per-flip forward passes (same operations in the same order), just
// cheaper. values[k] corresponds to samples[k].
std::vector<double> local_energies(const HamiltonianSpec& spec, const RnnParams& params,
                                   const std::vector<Configuration>& samples);

// Mean and standard error of H_loc over n_samples draws from p_RNN.
// Deterministic given seed.
EnergyEstimate energy_estimate(const HamiltonianSpec& spec, const RnnParams& params,
                               long n_samples, std::uint64_t seed);

// Mean / standard error of an existing batch of local-energy values.
EnergyEstimate estimate_from_values(const std::vector<double>& values);

}  // namespace rydvmc
