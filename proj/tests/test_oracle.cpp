#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rydvmc/errors.hpp"
#include "rydvmc/lattice.hpp"
#include "rydvmc/oracle.hpp"

using namespace rydvmc;

namespace {

HamiltonianSpec default_spec(int L) {
  return build_spec(L, 1.0, 1.0, 1.0, default_blockade_radius());
}

// The L=4 solve takes a little under a second; share it across test cases.
const ExactGroundState& l4_ground() {
  static const ExactGroundState gs = ground_state(default_spec(4));
  return gs;
}

double residual_norm(const HamiltonianSpec& spec, const ExactGroundState& gs) {
  Eigen::VectorXd hx(gs.amplitudes.size());
  apply_hamiltonian(spec, gs.amplitudes, hx);
  return (hx - gs.energy * gs.amplitudes).norm();
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("configuration indexing round-trips with bit i = site i") {
  CHECK(config_from_index(0, 4) == Configuration{0, 0, 0, 0});
  CHECK(config_from_index(5, 4) == Configuration{1, 0, 1, 0});
  CHECK(config_from_index(8, 4) == Configuration{0, 0, 0, 1});
  for (std::uint64_t k = 0; k < 16; ++k) {
    CHECK(index_of(config_from_index(k, 4)) == k);
  }
}

TEST_CASE("apply_hamiltonian on a single atom") {
  const auto spec = default_spec(1);
  Eigen::VectorXd x(2), y(2);
  x << 1.0, 0.0;
  apply_hamiltonian(spec, x, y);
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(-0.5));
  x << 0.0, 1.0;
  apply_hamiltonian(spec, x, y);
  CHECK(y[0] == doctest::Approx(-0.5));
  CHECK(y[1] == doctest::Approx(-1.0));  // -delta on the excited atom
  Eigen::VectorXd bad(3);
  CHECK_THROWS_AS(apply_hamiltonian(spec, bad, y), std::invalid_argument);
}

TEST_CASE("single atom ground state matches the closed form") {
  // 2x2 Hamiltonian [[0, -1/2], [-1/2, -1]]: E0 = -(1 + sqrt(2)) / 2.
  const auto gs = ground_state(default_spec(1));
  CHECK(gs.n_sites == 1);
  CHECK(gs.energy == doctest::Approx(-1.2071067811865475).epsilon(1e-12));
  CHECK(gs.amplitudes.size() == 2);
  CHECK(gs.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // Both components strictly positive after the sign convention.
  CHECK(gs.amplitudes.minCoeff() > 0.0);
  // Excited-state weight from the analytic eigenvector.
  const double theta = gs.amplitudes[1] / gs.amplitudes[0];
  CHECK(theta == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("2x2 lattice ground-state energy") {
  const auto gs = ground_state(default_spec(2));
  CHECK(gs.energy == doctest::Approx(-2.1343468299359984).epsilon(1e-10));
  CHECK(residual_norm(default_spec(2), gs) <= 1e-8);
  // Every amplitude is strictly positive: the off-diagonal part is
  // non-positive and flips connect all configurations.
  CHECK(gs.amplitudes.minCoeff() > 0.0);
  CHECK(gs.amplitudes.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero Rabi frequency reduces to the classical diagonal minimum") {
  // The couplings scale with omega, so omega = 0 removes both the flip term
  // and the interactions: the Hamiltonian is -delta sum n_i and the ground
  // state is the fully excited configuration at energy -delta N.
  const auto spec = build_spec(2, 1.0, 0.0, 1.0, default_blockade_radius());
  const auto gs = ground_state(spec);
  CHECK(gs.energy == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(gs.amplitudes[15] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dense and iterative solvers agree") {
  for (int L : {2, 3}) {
    const auto spec = default_spec(L);
    const auto dense = ground_state_dense(spec);
    const auto lanczos = ground_state_lanczos(spec);
    CHECK(std::abs(dense.energy - lanczos.energy) <= 1e-8);
    CHECK(std::abs(dense.amplitudes.dot(lanczos.amplitudes)) >=
          1.0 - 1e-8);
    CHECK(residual_norm(spec, lanczos) <= 1e-8);
  }
}

TEST_CASE("4x4 lattice ground state") {
  const auto& gs = l4_ground();
  CHECK(gs.n_sites == 16);
  CHECK(gs.energy == doctest::Approx(-7.254611338546495).epsilon(1e-9));
  CHECK(std::abs(gs.energy / 16.0 - (-0.4534)) <= 5e-4);
  CHECK(residual_norm(default_spec(4), gs) <= 1e-8);
  CHECK(gs.amplitudes.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(gs.amplitudes.minCoeff() >= 0.0);
}

TEST_CASE("ground_state is deterministic") {
  const auto spec = default_spec(3);
  const auto a = ground_state(spec);
  const auto b = ground_state(spec);
  CHECK(a.energy == b.energy);
  CHECK((a.amplitudes - b.amplitudes).norm() == 0.0);
}

TEST_CASE("system size caps") {
  CHECK_THROWS_AS(ground_state(build_spec(5, 1.0, 1.0, 1.0, 1.0)), capacity_error);
  CHECK_THROWS_AS(enumerated_energy(build_spec(5, 1.0, 1.0, 1.0, 1.0),
                                    [](const Configuration&) { return 0.0; }),
                  capacity_error);
}

TEST_CASE("sampling a point-mass distribution returns only that configuration") {
  const auto spec = default_spec(1);
  ExactGroundState point;
  point.n_sites = 1;
  point.energy = 0.0;
  point.amplitudes = Eigen::Vector2d(0.0, 1.0);
  const auto data = sample_dataset(point, spec, 500, 11);
  REQUIRE(data.samples.size() == 500);
  for (const auto& sigma : data.samples) {
    CHECK(sigma == Configuration{1});
  }
  CHECK(data.source == "oracle");
  CHECK(data.seed == 11);
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto spec = default_spec(2);
  const auto gs = ground_state(spec);
  const auto a = sample_dataset(gs, spec, 200, 5);
  const auto b = sample_dataset(gs, spec, 200, 5);
  CHECK(a.samples == b.samples);
  const auto c = sample_dataset(gs, spec, 200, 6);
  CHECK(a.samples != c.samples);
  CHECK_THROWS_AS(sample_dataset(gs, spec, 0, 5), std::invalid_argument);
}

TEST_CASE("sampled marginals match the exact occupation probabilities") {
  const auto spec = default_spec(4);
  const auto& gs = l4_ground();
  const long count = 100000;
  const auto data = sample_dataset(gs, spec, count, 1);

  std::vector<double> exact(16, 0.0);
  for (long k = 0; k < gs.amplitudes.size(); ++k) {
    const double p = gs.amplitudes[k] * gs.amplitudes[k];
    for (int i = 0; i < 16; ++i) {
      if (static_cast<std::uint64_t>(k) & (1ull << i)) exact[i] += p;
    }
  }
  std::vector<double> counts(16, 0.0);
  for (const auto& sigma : data.samples) {
    for (int i = 0; i < 16; ++i) counts[i] += sigma[i];
  }
  for (int i = 0; i < 16; ++i) {
    const double empirical = counts[i] / static_cast<double>(count);
    const double se = std::sqrt(exact[i] * (1.0 - exact[i]) / static_cast<double>(count));
    CHECK(std::abs(empirical - exact[i]) <= 4.0 * se);
  }
}

TEST_CASE("sampled distribution is close in total variation") {
  const auto spec = default_spec(2);
  const auto gs = ground_state(spec);
  const long count = 1000000;
  const auto data = sample_dataset(gs, spec, count, 2);
  std::vector<double> freq(16, 0.0);
  for (const auto& sigma : data.samples) freq[index_of(sigma)] += 1.0;
  double tv = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double p = gs.amplitudes[k] * gs.amplitudes[k];
    tv += std::abs(freq[k] / static_cast<double>(count) - p);
  }
  tv *= 0.5;
  CHECK(tv <= 0.01);
}

TEST_CASE("enumerated energy of the uniform single-atom distribution") {
  const auto spec = default_spec(1);
  const double log_half = std::log(0.5);
  const double e = enumerated_energy(spec, [&](const Configuration&) { return log_half; });
  // H_loc(0) = -1/2 and H_loc(1) = -3/2 with equal weights.
  CHECK(e == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("enumerated energy of the exact ground state is the ground energy") {
  for (int L : {2, 3}) {
    const auto spec = default_spec(L);
    const auto gs = ground_state(spec);
    const auto logprob = [&](const Configuration& sigma) {
      const double amp = gs.amplitudes[static_cast<long>(index_of(sigma))];
      return 2.0 * std::log(amp);
    };
    CHECK(enumerated_energy(spec, logprob) == doctest::Approx(gs.energy).epsilon(1e-9));
  }
}

}  // TEST_SUITE
