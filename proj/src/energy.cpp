#include "rydvmc/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "rydvmc/threads.hpp"
#include "cell_internal.hpp"

namespace rydvmc {

namespace {

void check_length(const HamiltonianSpec& spec, const Configuration& sigma, const char* where) {
  if (sigma.size() != static_cast<std::size_t>(spec.n_atoms())) {
    throw std::invalid_argument(std::string(where) + ": configuration has " +
                                std::to_string(sigma.size()) + " sites, spec has " +
                                std::to_string(spec.n_atoms()));
  }
}

// Per-sample chain cache: H[i] is the hidden state that produced site i's
// conditional, prefix[i] the log-probability accumulated over sites < i.
// Flipping site f leaves sites < f untouched, changes only the picked branch
// of conditional f, and restarts the recurrence from H[f] with the flipped
// input -- the same additions and cell evaluations the naive pass performs.
struct ChainCache {
  std::vector<Eigen::VectorXd> hidden;
  std::vector<Eigen::Vector2d> conditional;
  std::vector<double> prefix;
  double total = 0.0;
};

void build_chain(const RnnParams& params, const Configuration& sigma,
                 detail::CellWorkspace& ws, ChainCache& cache) {
  const std::size_t n = sigma.size();
  cache.hidden.resize(n);
  cache.conditional.resize(n);
  cache.prefix.resize(n);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(params.nh);
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  double lp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cache.prefix[i] = lp;
    detail::cell_step(params, x, h, ws);
    h.swap(ws.hidden);
    cache.hidden[i] = h;
    cache.conditional[i] = detail::conditional_from_hidden(params, h);
    const int bit = sigma[i] ? 1 : 0;
    lp += std::log(cache.conditional[i][bit]);
    x = detail::one_hot(bit);
  }
  cache.total = lp;
}

double flipped_log_prob(const RnnParams& params, const Configuration& sigma,
                        std::size_t flip, detail::CellWorkspace& ws, ChainCache& cache,
                        Eigen::VectorXd& h) {
  const std::size_t n = sigma.size();
  const int flipped_bit = sigma[flip] ? 0 : 1;
  double lp = cache.prefix[flip] + std::log(cache.conditional[flip][flipped_bit]);
  h = cache.hidden[flip];
  Eigen::Vector2d x = detail::one_hot(flipped_bit);
  for (std::size_t i = flip + 1; i < n; ++i) {
    detail::cell_step(params, x, h, ws);
    h.swap(ws.hidden);
    const Eigen::Vector2d cond = detail::conditional_from_hidden(params, h);
    const int bit = sigma[i] ? 1 : 0;
    lp += std::log(cond[bit]);
    x = detail::one_hot(bit);
  }
  return lp;
}

double local_energy_cached(const HamiltonianSpec& spec, const RnnParams& params,
                           const Configuration& sigma, detail::CellWorkspace& ws,
                           ChainCache& cache, Eigen::VectorXd& h) {
  build_chain(params, sigma, ws, cache);
  double flip_sum = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    flip_sum += std::exp(0.5 * (flipped_log_prob(params, sigma, i, ws, cache, h) - cache.total));
  }
  return diagonal_energy(spec, sigma) - 0.5 * spec.omega * flip_sum;
}

}  // namespace

double local_energy(const HamiltonianSpec& spec, const RnnParams& params,
                    const Configuration& sigma) {
  check_length(spec, sigma, "local_energy");
  const double lp0 = log_prob(params, sigma);
  double flip_sum = 0.0;
  Configuration flipped = sigma;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    flipped[i] ^= 1u;
    flip_sum += std::exp(0.5 * (log_prob(params, flipped) - lp0));
    flipped[i] ^= 1u;
  }
  return diagonal_energy(spec, sigma) - 0.5 * spec.omega * flip_sum;
}

double local_energy(const HamiltonianSpec& spec,
                    const std::function<double(const Configuration&)>& logprob,
                    const Configuration& sigma) {
  if (!logprob) throw std::invalid_argument("local_energy: logprob function is empty");
  check_length(spec, sigma, "local_energy");
  const double lp0 = logprob(sigma);
  double flip_sum = 0.0;
  Configuration flipped = sigma;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    flipped[i] ^= 1u;
    flip_sum += std::exp(0.5 * (logprob(flipped) - lp0));
    flipped[i] ^= 1u;
  }
  return diagonal_energy(spec, sigma) - 0.5 * spec.omega * flip_sum;
}

std::vector<double> local_energies(const HamiltonianSpec& spec, const RnnParams& params,
                                   const std::vector<Configuration>& samples) {
  std::vector<double> values(samples.size());
  parallel_for(static_cast<long>(samples.size()), [&](long k) {
    const Configuration& sigma = samples[static_cast<std::size_t>(k)];
    check_length(spec, sigma, "local_energies");
    detail::CellWorkspace ws(params.nh);
    ChainCache cache;
    Eigen::VectorXd h(params.nh);
    values[static_cast<std::size_t>(k)] =
        local_energy_cached(spec, params, sigma, ws, cache, h);
  });
  return values;
}

EnergyEstimate energy_estimate(const HamiltonianSpec& spec, const RnnParams& params,
                               long n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("energy_estimate: n_samples must be >= 1");
  const auto drawn = sample(params, spec.n_atoms(), static_cast<std::uint64_t>(n_samples), seed);
  return estimate_from_values(local_energies(spec, params, drawn.first.samples));
}

EnergyEstimate estimate_from_values(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("estimate_from_values: empty batch");
  const auto n = static_cast<long>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  EnergyEstimate est;
  est.mean = mean;
  est.n_samples = n;
  est.std_error = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))
                        : 0.0;
  return est;
}

}  // namespace rydvmc
