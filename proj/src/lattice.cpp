#include "rydvmc/lattice.hpp"

#include <stdexcept>
#include <string>

namespace rydvmc {

HamiltonianSpec build_spec(int L, double a, double omega, double delta, double rb) {
  if (L < 1) throw std::invalid_argument("build_spec: L must be >= 1");
  if (!(a > 0.0)) throw std::invalid_argument("build_spec: lattice spacing a must be > 0");
  if (!(rb > 0.0)) throw std::invalid_argument("build_spec: blockade radius rb must be > 0");

  HamiltonianSpec spec;
  spec.L = L;
  spec.a = a;
  spec.omega = omega;
  spec.delta = delta;
  spec.rb = rb;

  const int n = L * L;
  spec.positions.reserve(n);
  for (int row = 0; row < L; ++row) {
    for (int col = 0; col < L; ++col) {
      spec.positions.push_back({row * a, col * a});
    }
  }

  const double rb6 = rb * rb * rb * rb * rb * rb;
  spec.couplings = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = spec.positions[i][0] - spec.positions[j][0];
      const double dy = spec.positions[i][1] - spec.positions[j][1];
      const double d2 = dx * dx + dy * dy;
      const double v = omega * rb6 / (d2 * d2 * d2);
      spec.couplings(i, j) = v;
      spec.couplings(j, i) = v;
    }
  }
  return spec;
}

double diagonal_energy(const HamiltonianSpec& spec, const Configuration& sigma) {
  const int n = spec.n_atoms();
  if (static_cast<int>(sigma.size()) != n) {
    throw std::invalid_argument("diagonal_energy: configuration has " +
                                std::to_string(sigma.size()) + " sites, spec has " +
                                std::to_string(n));
  }
  double energy = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!sigma[i]) continue;
    energy -= spec.delta;
    for (int j = i + 1; j < n; ++j) {
      if (sigma[j]) energy += spec.couplings(i, j);
    }
  }
  return energy;
}

}  // namespace rydvmc
