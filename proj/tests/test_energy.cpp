#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rydvmc/energy.hpp"
#include "rydvmc/lattice.hpp"
#include "rydvmc/oracle.hpp"
#include "rydvmc/rng.hpp"
#include "rydvmc/wavefunction.hpp"

using namespace rydvmc;

namespace {

HamiltonianSpec default_spec(int L) {
  return build_spec(L, 1.0, 1.0, 1.0, default_blockade_radius());
}

std::function<double(const Configuration&)> ground_logprob(const ExactGroundState& gs) {
  return [&gs](const Configuration& sigma) {
    return 2.0 * std::log(gs.amplitudes[static_cast<long>(index_of(sigma))]);
  };
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("zero Rabi frequency makes the local energy purely diagonal") {
  const auto spec = build_spec(2, 1.0, 0.0, 1.0, default_blockade_radius());
  const auto params = init_params(4, 3);
  Rng rng(40);
  for (int k = 0; k < 10; ++k) {
    Configuration sigma(4);
    for (auto& s : sigma) s = rng.uniform01() < 0.5 ? 0 : 1;
    CHECK(local_energy(spec, params, sigma) == diagonal_energy(spec, sigma));
  }
}

TEST_CASE("single atom under the uniform wavefunction") {
  const auto spec = default_spec(1);
  RnnParams uniform(2);  // zero parameters: p(0) = p(1) = 1/2
  CHECK(local_energy(spec, uniform, {0}) == -0.5);
  CHECK(local_energy(spec, uniform, {1}) == -1.5);
  // p-weighted mean over both configurations.
  const double mean = 0.5 * (-0.5) + 0.5 * (-1.5);
  CHECK(mean == doctest::Approx(-1.0));
}

TEST_CASE("local energy is flat on the exact ground state") {
  for (int L : {2, 3}) {
    const auto spec = default_spec(L);
    const auto gs = ground_state(spec);
    const auto logprob = ground_logprob(gs);
    const int n = spec.n_atoms();
    for (std::uint64_t k = 0; k < (1ull << n); ++k) {
      const auto sigma = config_from_index(k, n);
      const double p = gs.amplitudes[static_cast<long>(k)] * gs.amplitudes[static_cast<long>(k)];
      if (p <= 1e-12) continue;
      CHECK(std::abs(local_energy(spec, logprob, sigma) - gs.energy) <= 1e-6);
    }
  }
}

TEST_CASE("zero-variance principle on sampled eigenstate configurations") {
  const auto spec = default_spec(2);
  const auto gs = ground_state(spec);
  const auto logprob = ground_logprob(gs);
  const auto data = sample_dataset(gs, spec, 200, 4);
  std::vector<double> values;
  values.reserve(data.samples.size());
  for (const auto& sigma : data.samples) {
    values.push_back(local_energy(spec, logprob, sigma));
  }
  const auto est = estimate_from_values(values);
  CHECK(est.mean == doctest::Approx(gs.energy).epsilon(1e-9));
  CHECK(est.std_error <= 1e-6);
}

TEST_CASE("batched local energies are bit-identical to the per-sample path") {
  for (int L : {2, 3}) {
    const auto spec = default_spec(L);
    const auto params = init_params(5, 900 + static_cast<std::uint64_t>(L));
    const auto [data, logps] = sample(params, spec.n_atoms(), 50, 77);
    const auto batched = local_energies(spec, params, data.samples);
    REQUIRE(batched.size() == data.samples.size());
    for (std::size_t k = 0; k < data.samples.size(); ++k) {
      CHECK(batched[k] == local_energy(spec, params, data.samples[k]));
    }
  }
}

TEST_CASE("sampled energy agrees with the enumerated expectation") {
  const auto spec = default_spec(2);
  const auto params = init_params(6, 12);
  const double exact = enumerated_energy(
      spec, [&](const Configuration& sigma) { return log_prob(params, sigma); });
  const auto est = energy_estimate(spec, params, 10000, 31);
  CHECK(est.n_samples == 10000);
  CHECK(std::abs(est.mean - exact) <= 5.0 * est.std_error);
}

TEST_CASE("the sampled estimator is unbiased across seeds") {
  const auto spec = default_spec(2);
  const auto params = init_params(4, 99);
  const double exact = enumerated_energy(
      spec, [&](const Configuration& sigma) { return log_prob(params, sigma); });
  const int n_seeds = 100;
  double grand = 0.0;
  double combined_var = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    const auto est = energy_estimate(spec, params, 1000, 500 + static_cast<std::uint64_t>(s));
    grand += est.mean;
    combined_var += est.std_error * est.std_error;
  }
  grand /= n_seeds;
  const double combined_se = std::sqrt(combined_var) / n_seeds;
  CHECK(std::abs(grand - exact) <= 3.0 * combined_se);
}

TEST_CASE("energy estimates are deterministic in the seed") {
  const auto spec = default_spec(2);
  const auto params = init_params(4, 15);
  const auto a = energy_estimate(spec, params, 500, 8);
  const auto b = energy_estimate(spec, params, 500, 8);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK_THROWS_AS(energy_estimate(spec, params, 0, 8), std::invalid_argument);
}

TEST_CASE("estimate_from_values computes mean and standard error") {
  const auto est = estimate_from_values({1.0, 2.0, 3.0});
  CHECK(est.mean == doctest::Approx(2.0));
  CHECK(est.std_error == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
  CHECK(est.n_samples == 3);

  const auto single = estimate_from_values({4.0});
  CHECK(single.mean == 4.0);
  CHECK(single.std_error == 0.0);

  CHECK_THROWS_AS(estimate_from_values({}), std::invalid_argument);
}

TEST_CASE("local energy validates configuration length") {
  const auto spec = default_spec(2);
  const auto params = init_params(4, 3);
  CHECK_THROWS_AS(local_energy(spec, params, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(local_energies(spec, params, {{1, 0}}), std::invalid_argument);
}

}  // TEST_SUITE
