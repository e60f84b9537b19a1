#include "rydvmc/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

#include "rydvmc/rng.hpp"
#include "rydvmc/threads.hpp"
#include "cell_internal.hpp"

namespace rydvmc {

using detail::cell_step;
using detail::CellWorkspace;
using detail::conditional_from_hidden;
using detail::one_hot;

namespace {

// Size of one gate's parameters: input kernel (2 x nh) + recurrent kernel
// (nh x nh) + bias (nh). The accessors below hard-code this arithmetic; a
// unit test cross-checks them against layout().
long gate_block(int nh) { return 2L * nh + static_cast<long>(nh) * nh + nh; }

void check_params(const RnnParams& params, const char* where) {
  if (params.nh < 1 || params.flat.size() != RnnParams::param_count(params.nh)) {
    throw std::invalid_argument(std::string(where) + ": parameter vector has length " +
                                std::to_string(params.flat.size()) + ", expected " +
                                std::to_string(RnnParams::param_count(params.nh)) +
                                " for nh=" + std::to_string(params.nh));
  }
}

}  // namespace

RnnParams::RnnParams(int n_hidden) : nh(n_hidden) {
  if (n_hidden < 1) throw std::invalid_argument("RnnParams: nh must be >= 1");
  flat = Eigen::VectorXd::Zero(param_count(n_hidden));
}

long RnnParams::param_count(int n_hidden) {
  return 3 * gate_block(n_hidden) + 2L * n_hidden + 2;
}

std::vector<TensorInfo> RnnParams::layout(int n_hidden) {
  if (n_hidden < 1) throw std::invalid_argument("RnnParams::layout: nh must be >= 1");
  const int nh = n_hidden;
  std::vector<TensorInfo> tensors;
  long offset = 0;
  auto add = [&](const char* name, int rows, int cols, bool bias) {
    tensors.push_back({name, rows, cols, offset, bias});
    offset += static_cast<long>(rows) * cols;
  };
  add("w_reset", 2, nh, false);
  add("u_reset", nh, nh, false);
  add("b_reset", nh, 1, true);
  add("w_update", 2, nh, false);
  add("u_update", nh, nh, false);
  add("b_update", nh, 1, true);
  add("w_candidate", 2, nh, false);
  add("u_candidate", nh, nh, false);
  add("b_candidate", nh, 1, true);
  add("out_kernel", nh, 2, false);
  add("out_bias", 2, 1, true);
  return tensors;
}

RnnParams::MatView RnnParams::w_reset() { return {flat.data(), 2, nh}; }
RnnParams::MatView RnnParams::u_reset() { return {flat.data() + 2L * nh, nh, nh}; }
RnnParams::VecView RnnParams::b_reset() {
  return {flat.data() + 2L * nh + static_cast<long>(nh) * nh, nh};
}
RnnParams::MatView RnnParams::w_update() { return {flat.data() + gate_block(nh), 2, nh}; }
RnnParams::MatView RnnParams::u_update() {
  return {flat.data() + gate_block(nh) + 2L * nh, nh, nh};
}
RnnParams::VecView RnnParams::b_update() {
  return {flat.data() + gate_block(nh) + 2L * nh + static_cast<long>(nh) * nh, nh};
}
RnnParams::MatView RnnParams::w_candidate() { return {flat.data() + 2 * gate_block(nh), 2, nh}; }
RnnParams::MatView RnnParams::u_candidate() {
  return {flat.data() + 2 * gate_block(nh) + 2L * nh, nh, nh};
}
RnnParams::VecView RnnParams::b_candidate() {
  return {flat.data() + 2 * gate_block(nh) + 2L * nh + static_cast<long>(nh) * nh, nh};
}
RnnParams::MatView RnnParams::out_kernel() { return {flat.data() + 3 * gate_block(nh), nh, 2}; }
RnnParams::VecView RnnParams::out_bias() {
  return {flat.data() + 3 * gate_block(nh) + 2L * nh, 2};
}

RnnParams::ConstMatView RnnParams::w_reset() const { return {flat.data(), 2, nh}; }
RnnParams::ConstMatView RnnParams::u_reset() const { return {flat.data() + 2L * nh, nh, nh}; }
RnnParams::ConstVecView RnnParams::b_reset() const {
  return {flat.data() + 2L * nh + static_cast<long>(nh) * nh, nh};
}
RnnParams::ConstMatView RnnParams::w_update() const {
  return {flat.data() + gate_block(nh), 2, nh};
}
RnnParams::ConstMatView RnnParams::u_update() const {
  return {flat.data() + gate_block(nh) + 2L * nh, nh, nh};
}
RnnParams::ConstVecView RnnParams::b_update() const {
  return {flat.data() + gate_block(nh) + 2L * nh + static_cast<long>(nh) * nh, nh};
}
RnnParams::ConstMatView RnnParams::w_candidate() const {
  return {flat.data() + 2 * gate_block(nh), 2, nh};
}
RnnParams::ConstMatView RnnParams::u_candidate() const {
  return {flat.data() + 2 * gate_block(nh) + 2L * nh, nh, nh};
}
RnnParams::ConstVecView RnnParams::b_candidate() const {
  return {flat.data() + 2 * gate_block(nh) + 2L * nh + static_cast<long>(nh) * nh, nh};
}
RnnParams::ConstMatView RnnParams::out_kernel() const {
  return {flat.data() + 3 * gate_block(nh), nh, 2};
}
RnnParams::ConstVecView RnnParams::out_bias() const {
  return {flat.data() + 3 * gate_block(nh) + 2L * nh, 2};
}

RnnState initial_state(int nh) {
  if (nh < 1) throw std::invalid_argument("initial_state: nh must be >= 1");
  RnnState state;
  state.hidden = Eigen::VectorXd::Zero(nh);
  return state;
}

RnnParams init_params(int nh, std::uint64_t seed) {
  if (nh < 1) throw std::invalid_argument("init_params: nh must be >= 1");
  RnnParams params(nh);
  Rng rng(stream_seed(seed, Stream::GlorotInit));
  for (const TensorInfo& t : RnnParams::layout(nh)) {
    if (t.bias) continue;  // biases stay zero
    const double bound = std::sqrt(6.0 / (t.rows + t.cols));
    const long size = static_cast<long>(t.rows) * t.cols;
    for (long j = 0; j < size; ++j) {
      params.flat[t.offset + j] = (2.0 * rng.uniform01() - 1.0) * bound;
    }
  }
  return params;
}

StepOutput step(const RnnParams& params, const RnnState& state) {
  check_params(params, "step");
  if (state.hidden.size() != params.nh) {
    throw std::invalid_argument("step: hidden state has length " +
                                std::to_string(state.hidden.size()) + ", expected " +
                                std::to_string(params.nh));
  }
  CellWorkspace ws(params.nh);
  cell_step(params, state.last_input, state.hidden, ws);
  StepOutput out;
  out.hidden = ws.hidden;
  out.conditional = conditional_from_hidden(params, ws.hidden);
  return out;
}

double log_prob(const RnnParams& params, const Configuration& sigma) {
  check_params(params, "log_prob");
  if (sigma.empty()) throw std::invalid_argument("log_prob: empty configuration");
  CellWorkspace ws(params.nh);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(params.nh);
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  double lp = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    cell_step(params, x, h, ws);
    h.swap(ws.hidden);
    const Eigen::Vector2d cond = conditional_from_hidden(params, h);
    const int bit = sigma[i] ? 1 : 0;
    lp += std::log(cond[bit]);
    x = one_hot(bit);
  }
  return lp;
}

ForwardTape forward(const RnnParams& params, const Configuration& sigma) {
  check_params(params, "forward");
  if (sigma.empty()) throw std::invalid_argument("forward: empty configuration");
  ForwardTape tape;
  tape.sigma = sigma;
  tape.sites.resize(sigma.size());
  CellWorkspace ws(params.nh);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(params.nh);
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    cell_step(params, x, h, ws);
    h = ws.hidden;
    TapeSite& site = tape.sites[i];
    site.input = x;
    site.reset = ws.reset;
    site.update = ws.update;
    site.candidate = ws.cand;
    site.hidden = h;
    site.conditional = conditional_from_hidden(params, h);
    x = one_hot(sigma[i] ? 1 : 0);
  }
  return tape;
}

RnnParams backprop_logprob(const RnnParams& params, const ForwardTape& tape,
                           const Configuration& sigma) {
  check_params(params, "backprop_logprob");
  if (tape.sigma != sigma || tape.sites.size() != sigma.size()) {
    throw std::invalid_argument(
        "backprop_logprob: tape was not produced by a forward pass on this configuration");
  }
  const int nh = params.nh;
  RnnParams grad(nh);

  Eigen::VectorXd gh = Eigen::VectorXd::Zero(nh);
  Eigen::VectorXd gh_prev(nh), da(nh), dc(nh), dz(nh), dr(nh), drh(nh);
  const Eigen::VectorXd h_zero = Eigen::VectorXd::Zero(nh);

  for (long i = static_cast<long>(sigma.size()) - 1; i >= 0; --i) {
    const TapeSite& site = tape.sites[static_cast<std::size_t>(i)];
    const Eigen::VectorXd& h_prev =
        (i == 0) ? h_zero : tape.sites[static_cast<std::size_t>(i - 1)].hidden;

    // Output head: d log softmax = one_hot(sigma_i) - conditional.
    Eigen::Vector2d dlogits = -site.conditional;
    dlogits[sigma[static_cast<std::size_t>(i)] ? 1 : 0] += 1.0;
    grad.out_kernel().noalias() += site.hidden * dlogits.transpose();
    grad.out_bias() += dlogits;
    gh.noalias() += params.out_kernel() * dlogits;

    // h' = (1 - z) . h + z . c
    dz.array() = gh.array() * (site.candidate.array() - h_prev.array());
    dc.array() = gh.array() * site.update.array();
    gh_prev.array() = gh.array() * (1.0 - site.update.array());

    // Candidate: c = tanh(W_c^T x + U_c (r . h) + b_c)
    da.array() = dc.array() * (1.0 - site.candidate.array().square());
    grad.w_candidate().noalias() += site.input * da.transpose();
    grad.u_candidate().noalias() +=
        da * (site.reset.array() * h_prev.array()).matrix().transpose();
    grad.b_candidate() += da;
    drh.noalias() = params.u_candidate().transpose() * da;
    dr.array() = drh.array() * h_prev.array();
    gh_prev.array() += drh.array() * site.reset.array();

    // Update gate: z = logistic(a_z)
    da.array() = dz.array() * site.update.array() * (1.0 - site.update.array());
    grad.w_update().noalias() += site.input * da.transpose();
    grad.u_update().noalias() += da * h_prev.transpose();
    grad.b_update() += da;
    gh_prev.noalias() += params.u_update().transpose() * da;

    // Reset gate: r = logistic(a_r)
    da.array() = dr.array() * site.reset.array() * (1.0 - site.reset.array());
    grad.w_reset().noalias() += site.input * da.transpose();
    grad.u_reset().noalias() += da * h_prev.transpose();
    grad.b_reset() += da;
    gh_prev.noalias() += params.u_reset().transpose() * da;

    gh.swap(gh_prev);
  }
  return grad;
}

double amplitude_ratio(const RnnParams& params, const Configuration& sigma,
                       const Configuration& sigma_prime) {
  if (sigma.size() != sigma_prime.size()) {
    throw std::invalid_argument("amplitude_ratio: configurations differ in length");
  }
  return std::exp(0.5 * (log_prob(params, sigma_prime) - log_prob(params, sigma)));
}

std::pair<Dataset, std::vector<double>> sample(const RnnParams& params, int n_sites,
                                               std::uint64_t count, std::uint64_t seed) {
  check_params(params, "sample");
  if (n_sites < 1) throw std::invalid_argument("sample: n_sites must be >= 1");
  if (count < 1) throw std::invalid_argument("sample: count must be >= 1");

  Dataset dataset;
  dataset.seed = seed;
  dataset.source = "rnn";
  dataset.samples.resize(count);
  std::vector<double> logps(count);

  parallel_for(static_cast<long>(count), [&](long k) {
    // Sample k's randomness is keyed by (seed, k) alone, never by thread.
    Rng rng(stream_seed(seed, Stream::RnnSample, static_cast<std::uint64_t>(k)));
    CellWorkspace ws(params.nh);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(params.nh);
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    Configuration sigma(static_cast<std::size_t>(n_sites));
    double lp = 0.0;
    for (int i = 0; i < n_sites; ++i) {
      cell_step(params, x, h, ws);
      h.swap(ws.hidden);
      const Eigen::Vector2d cond = conditional_from_hidden(params, h);
      const int bit = rng.uniform01() < cond[0] ? 0 : 1;
      sigma[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bit);
      lp += std::log(cond[bit]);
      x = one_hot(bit);
    }
    dataset.samples[static_cast<std::size_t>(k)] = std::move(sigma);
    logps[static_cast<std::size_t>(k)] = lp;
  });
  return {std::move(dataset), std::move(logps)};
}

}  // namespace rydvmc
