#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "rydvmc/dataset.hpp"
#include "rydvmc/lattice.hpp"

namespace rydvmc {

// Exact ground state of the Rydberg Hamiltonian on the 2^N occupation basis.
// amplitudes(k) is psi(sigma) for the configuration where bit i of k gives the
// occupation of site i (row-major site order). The vector is sign-fixed to be
// nonnegative -- the Hamiltonian has nonpositive off-diagonal elements, so
// Perron-Frobenius makes the true ground state entrywise nonnegative -- and
// has unit 2-norm.
struct ExactGroundState {
  double energy = 0.0;
  Eigen::VectorXd amplitudes;
  int n_sites = 0;
};

// Basis-index <-> configuration helpers (bit i of the index = site i).
Configuration config_from_index(std::uint64_t index, int n_sites);
std::uint64_t index_of(const Configuration& sigma);

// y = H x, matrix-free: diagonal term per basis state plus -omega/2 on every
// single-bit flip. x and y must both have length 2^N; y is overwritten.
void apply_hamiltonian(const HamiltonianSpec& spec, const Eigen::VectorXd& x,
                       Eigen::VectorXd& y);

// Lowest eigenpair of the Hamiltonian. Dispatches to the dense solver for
// small problems (dim <= 512) and to matrix-free Lanczos above that.
// Throws capacity_error for N > 20 and convergence_error if the iterative
// solver fails to reach the residual target.
ExactGroundState ground_state(const HamiltonianSpec& spec);

// Both routes are exposed so tests can cross-check them on overlapping sizes.
ExactGroundState ground_state_dense(const HamiltonianSpec& spec);
ExactGroundState ground_state_lanczos(const HamiltonianSpec& spec);

// `count` independent draws from p(sigma) = psi(sigma)^2 by inverse-CDF over
// the categorical table. Deterministic given seed; draw k depends only on
// (seed, k), so the sample list is independent of any threading.
Dataset sample_dataset(const ExactGroundState& gs, const HamiltonianSpec& spec,
                       std::uint64_t count, std::uint64_t seed);

// Exact energy expectation sum_sigma exp(logprob(sigma)) * H_loc(sigma) by
// exhaustive enumeration of all 2^N configurations, with H_loc built from the
// same logprob. Configurations with zero probability are skipped (they
// contribute no weight). Throws capacity_error for N > 16.
double enumerated_energy(const HamiltonianSpec& spec,
                         const std::function<double(const Configuration&)>& logprob);

}  // namespace rydvmc
