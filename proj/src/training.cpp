#include "rydvmc/training.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rydvmc/energy.hpp"
#include "rydvmc/errors.hpp"
#include "rydvmc/rng.hpp"
#include "rydvmc/threads.hpp"

namespace rydvmc {

namespace {

// Same conditionals, logs, and addition order as log_prob, so the value is
// bit-identical to re-running the forward pass.
double log_prob_from_tape(const ForwardTape& tape) {
  double lp = 0.0;
  for (std::size_t i = 0; i < tape.sites.size(); ++i) {
    lp += std::log(tape.sites[i].conditional[tape.sigma[i] ? 1 : 0]);
  }
  return lp;
}

void apply_regularizers(RnnParams& grad, const RnnParams& params, const TrainConfig& config) {
  if (config.weight_decay > 0.0) grad.flat += config.weight_decay * params.flat;
  if (config.grad_clip_norm > 0.0) {
    const double norm = grad.flat.norm();
    if (norm > config.grad_clip_norm) grad.flat *= config.grad_clip_norm / norm;
  }
}

void check_grad_shapes(const RnnParams& params, const AdamState& state, const RnnParams& grad) {
  if (grad.nh != params.nh || grad.flat.size() != params.flat.size()) {
    throw std::invalid_argument("adam_step: gradient shape does not match the parameters");
  }
  if (state.m.size() != params.flat.size() || state.v.size() != params.flat.size()) {
    throw std::invalid_argument("adam_step: optimizer state shape does not match the parameters");
  }
}

}  // namespace

AdamState make_adam_state(const RnnParams& params) {
  AdamState state;
  state.m = Eigen::VectorXd::Zero(params.flat.size());
  state.v = Eigen::VectorXd::Zero(params.flat.size());
  state.t = 0;
  return state;
}

std::pair<LossReport, RnnParams> nll_loss_and_grad(const RnnParams& params,
                                                   const std::vector<Configuration>& batch) {
  if (batch.empty()) throw std::invalid_argument("nll_loss_and_grad: empty batch");
  const auto b = static_cast<long>(batch.size());
  std::vector<Eigen::VectorXd> grads(batch.size());
  std::vector<double> lps(batch.size());
  parallel_for(b, [&](long k) {
    const auto ks = static_cast<std::size_t>(k);
    const ForwardTape tape = forward(params, batch[ks]);
    grads[ks] = backprop_logprob(params, tape, batch[ks]).flat;
    lps[ks] = log_prob_from_tape(tape);
  });
  RnnParams grad(params.nh);
  double lp_sum = 0.0;
  for (std::size_t k = 0; k < batch.size(); ++k) {  // serial reduction, fixed order
    grad.flat += grads[k];
    lp_sum += lps[k];
  }
  const double scale = -1.0 / static_cast<double>(b);
  grad.flat *= scale;
  LossReport report;
  report.value = scale * lp_sum;
  return {report, std::move(grad)};
}

RnnParams vmc_gradient_from_samples(const RnnParams& params,
                                    const std::vector<Configuration>& samples,
                                    const std::vector<double>& local_values) {
  if (samples.size() != local_values.size()) {
    throw std::invalid_argument("vmc_gradient_from_samples: " + std::to_string(samples.size()) +
                                " samples but " + std::to_string(local_values.size()) +
                                " local energies");
  }
  if (samples.size() < 2) {
    throw std::invalid_argument("vmc_gradient_from_samples: centering needs at least 2 samples");
  }
  double hbar = 0.0;
  for (double v : local_values) hbar += v;
  hbar /= static_cast<double>(local_values.size());
  // Constant local energies (an eigenstate batch) make every centered weight
  // exactly zero; short-circuiting keeps that exact instead of inheriting
  // rounding from the accumulated mean.
  const auto [lo, hi] = std::minmax_element(local_values.begin(), local_values.end());
  if (*lo == *hi) return RnnParams(params.nh);

  std::vector<Eigen::VectorXd> grads(samples.size());
  parallel_for(static_cast<long>(samples.size()), [&](long k) {
    const auto ks = static_cast<std::size_t>(k);
    grads[ks] = backprop_logprob(params, forward(params, samples[ks]), samples[ks]).flat;
  });
  RnnParams grad(params.nh);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    grad.flat += (local_values[k] - hbar) * grads[k];
  }
  grad.flat /= static_cast<double>(samples.size());
  return grad;
}

std::pair<LossReport, RnnParams> vmc_loss_and_grad(const HamiltonianSpec& spec,
                                                   const RnnParams& params, long n_samples,
                                                   std::uint64_t seed) {
  if (n_samples < 2) {
    throw std::invalid_argument("vmc_loss_and_grad: n_samples must be >= 2 "
                                "(the gradient centers on the batch mean)");
  }
  const auto drawn =
      sample(params, spec.n_atoms(), static_cast<std::uint64_t>(n_samples), seed);
  const std::vector<double> values = local_energies(spec, params, drawn.first.samples);
  double hbar = 0.0;
  for (double v : values) hbar += v;
  hbar /= static_cast<double>(values.size());
  LossReport report;
  report.value = hbar;
  return {report, vmc_gradient_from_samples(params, drawn.first.samples, values)};
}

void adam_step(RnnParams& params, AdamState& state, const RnnParams& grad, double eta,
               const AdamConfig& adam) {
  check_grad_shapes(params, state, grad);
  state.t += 1;
  state.m = adam.beta1 * state.m + (1.0 - adam.beta1) * grad.flat;
  state.v.array() =
      adam.beta2 * state.v.array() + (1.0 - adam.beta2) * grad.flat.array().square();
  const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(state.t));
  params.flat.array() -=
      eta * (state.m.array() / bc1) / ((state.v.array() / bc2).sqrt() + adam.epsilon);
}

TrainResult train(const HamiltonianSpec& spec, RnnParams params,
                  const std::optional<Dataset>& dataset, TrainConfig config,
                  std::optional<double> reference_energy, const TrainHooks& hooks,
                  const std::optional<ResumeState>& resume) {
  if (config.mode == TrainMode::kData) config.t_trans = config.total_iterations;
  if (config.mode == TrainMode::kVmc) config.t_trans = 0;
  if (config.total_iterations < 0) {
    throw std::invalid_argument("train: total_iterations must be >= 0");
  }
  if (config.t_trans < 0 || config.t_trans > config.total_iterations) {
    throw std::invalid_argument("train: t_trans must lie in [0, total_iterations]");
  }
  if (config.eta_data <= 0.0 || config.eta_vmc <= 0.0) {
    throw std::invalid_argument("train: learning rates must be positive");
  }
  if (config.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (config.n_samples < 2 && config.t_trans < config.total_iterations) {
    throw std::invalid_argument("train: n_samples must be >= 2 for the Hamiltonian-driven phase");
  }
  if (config.eval_samples < 1) throw std::invalid_argument("train: eval_samples must be >= 1");
  if (config.eval_every < 1) throw std::invalid_argument("train: eval_every must be >= 1");
  if (config.stop_window < 1) throw std::invalid_argument("train: stop_window must be >= 1");
  if (params.nh < 1 || params.flat.size() != RnnParams::param_count(params.nh)) {
    throw std::invalid_argument("train: malformed parameter vector");
  }
  const int n_atoms = spec.n_atoms();
  if (config.t_trans > 0 && (!dataset || dataset->samples.empty())) {
    throw std::invalid_argument("train: the data-driven phase requires a dataset");
  }
  if (dataset) {
    for (const Configuration& sigma : dataset->samples) {
      if (sigma.size() != static_cast<std::size_t>(n_atoms)) {
        throw std::invalid_argument("train: dataset sample length does not match the lattice");
      }
    }
  }

  TrainResult result;
  AdamState adam = resume ? resume->adam : make_adam_state(params);
  if (adam.m.size() != params.flat.size() || adam.v.size() != params.flat.size()) {
    throw std::invalid_argument("train: resumed optimizer state does not match the parameters");
  }
  long updates = resume ? resume->updates : 0;
  const long start_iteration = resume ? resume->iteration + 1 : 1;

  std::deque<double> stop_buffer;
  const bool stopping_enabled = reference_energy.has_value() && config.stop_threshold > 0.0;
  bool stopped = false;

  for (long it = start_iteration; it <= config.total_iterations && !stopped; ++it) {
    const Phase phase = it <= config.t_trans ? Phase::kData : Phase::kVmc;
    // Fresh optimizer statistics when the objective changes at the switch.
    // (Fires on the first Hamiltonian-driven iteration whenever a data phase
    // precedes it, which also covers a resume that lands on the boundary.)
    if (it == config.t_trans + 1 && config.t_trans > 0 && !config.carry_adam_state) {
      adam = make_adam_state(params);
    }
    const double decay = config.lr_decay == 1.0
                             ? 1.0
                             : std::pow(config.lr_decay, static_cast<double>(it - 1));

    double loss = 0.0;
    bool aborted = false;
    if (phase == Phase::kData) {
      // One epoch: seeded shuffle, one Adam update per batch.
      std::vector<std::size_t> order(dataset->samples.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng rng(stream_seed(config.seed, Stream::Shuffle, static_cast<std::uint64_t>(it)));
      shuffle_in_place(order, rng);

      double nll_sum = 0.0;
      std::vector<Configuration> batch;
      const std::size_t total = order.size();
      for (std::size_t pos = 0; pos < total && !aborted; pos += config.batch_size) {
        const std::size_t end =
            std::min(total, pos + static_cast<std::size_t>(config.batch_size));
        batch.clear();
        for (std::size_t q = pos; q < end; ++q) batch.push_back(dataset->samples[order[q]]);
        auto [report, grad] = nll_loss_and_grad(params, batch);
        if (!std::isfinite(report.value)) {
          loss = report.value;
          aborted = true;
          break;
        }
        apply_regularizers(grad, params, config);
        adam_step(params, adam, grad, config.eta_data * decay, config.adam);
        ++updates;
        nll_sum += report.value * static_cast<double>(end - pos);
      }
      if (!aborted) loss = nll_sum / static_cast<double>(total);
    } else {
      const std::uint64_t it_seed =
          stream_seed(config.seed, Stream::VmcBatch, static_cast<std::uint64_t>(it));
      auto [report, grad] = vmc_loss_and_grad(spec, params, config.n_samples, it_seed);
      loss = report.value;
      if (!std::isfinite(loss)) {
        aborted = true;
      } else {
        apply_regularizers(grad, params, config);
        adam_step(params, adam, grad, config.eta_vmc * decay, config.adam);
        ++updates;
      }
    }

    if (aborted) {
      TraceRow row{it, phase, updates, loss, std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
      result.trace.push_back(row);
      if (hooks.on_row) hooks.on_row(row);
      throw numerical_error("loss became non-finite at iteration " + std::to_string(it) +
                            "; a diagnostic trace row was recorded");
    }

    const bool last = it == config.total_iterations;
    if (it % config.eval_every == 0 || last) {
      const EnergyEstimate estimate =
          energy_estimate(spec, params, config.eval_samples,
                          stream_seed(config.seed, Stream::TraceEval,
                                      static_cast<std::uint64_t>(it)));
      TraceRow row{it, phase, updates, loss, estimate.mean, estimate.std_error};
      result.trace.push_back(row);
      if (hooks.on_row) hooks.on_row(row);

      if (stopping_enabled && phase == Phase::kVmc) {
        stop_buffer.push_back(estimate.mean);
        if (static_cast<long>(stop_buffer.size()) > config.stop_window) {
          stop_buffer.pop_front();
        }
        if (static_cast<long>(stop_buffer.size()) == config.stop_window) {
          double trailing = 0.0;
          for (double e : stop_buffer) trailing += e;
          trailing /= static_cast<double>(stop_buffer.size());
          if (trailing - *reference_energy <=
              config.stop_threshold * static_cast<double>(n_atoms)) {
            stopped = true;
          }
        }
      }
    }

    if (hooks.on_checkpoint &&
        ((config.checkpoint_every > 0 && it % config.checkpoint_every == 0) || last || stopped)) {
      hooks.on_checkpoint(it, phase, updates, params, adam);
    }
  }

  result.params = std::move(params);
  result.updates = updates;
  result.stopped_early = stopped;
  return result;
}

}  // namespace rydvmc
