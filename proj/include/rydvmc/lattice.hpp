#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rydvmc {

// One projective measurement in the occupation basis: bits[i] = 1 means atom i
// is in the Rydberg state |r>, 0 means the ground state |g>. Site order is
// row-major over the L x L grid, shared by every module.
using Configuration = std::vector<std::uint8_t>;

// Rydberg Hamiltonian on an L x L square lattice with open boundaries:
//   H = -(omega/2) sum_i sigma^x_i - delta sum_i n_i + sum_{i<j} V_ij n_i n_j
// with V_ij = omega * rb^6 / |r_i - r_j|^6. The interaction sum runs over
// unordered pairs, each counted once.
struct HamiltonianSpec {
  int L = 0;
  double a = 1.0;
  double omega = 1.0;
  double delta = 1.0;
  double rb = 1.0;
  std::vector<std::array<double, 2>> positions;  // (row*a, col*a), row-major
  Eigen::MatrixXd couplings;                     // N x N symmetric, zero diagonal

  int n_atoms() const { return static_cast<int>(positions.size()); }
};

// rb = 7^(1/6), placing delta = omega = 1 near the disordered/striated
// transition; V(nearest neighbor) = 7 at unit spacing.
inline double default_blockade_radius() { return std::pow(7.0, 1.0 / 6.0); }

HamiltonianSpec build_spec(int L, double a, double omega, double delta, double rb);

// -delta * (number of excited atoms) + sum over occupied pairs of V_ij.
double diagonal_energy(const HamiltonianSpec& spec, const Configuration& sigma);

}  // namespace rydvmc
