#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rydvmc/dataset.hpp"
#include "rydvmc/lattice.hpp"

namespace rydvmc {

// Autoregressive GRU wavefunction over N two-level sites in row-major raster
// order: p(sigma) = prod_i p(sigma_i | sigma_{i-1}, ..., sigma_1) and
// Psi(sigma) = sqrt(p(sigma)). One GRU layer, weights shared across sites.
//
// Cell convention (fixed project-wide; conventions differ in the literature):
//   r  = logistic(W_r^T x + U_r h + b_r)
//   z  = logistic(W_z^T x + U_z h + b_z)
//   h~ = tanh(W_c^T x + U_c (r . h) + b_c)
//   h' = (1 - z) . h + z . h~
//   conditional = softmax(V^T h' + c)
// where x is the one-hot (length-2) encoding of the previous site's state,
// "." is elementwise, and the initial input and hidden state are zero.

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One named tensor inside the flat parameter vector.
struct TensorInfo {
  std::string name;
  int rows = 0;
  int cols = 0;
  long offset = 0;
  bool bias = false;
};

// All cell and output-head parameters in a single flat vector (row-major
// payloads in the order given by layout), so optimizer state and gradient
// accumulation are simple elementwise operations.
struct RnnParams {
  int nh = 0;
  Eigen::VectorXd flat;

  RnnParams() = default;
  explicit RnnParams(int n_hidden);

  static std::vector<TensorInfo> layout(int n_hidden);
  static long param_count(int n_hidden);

  using MatView = Eigen::Map<RowMat>;
  using ConstMatView = Eigen::Map<const RowMat>;
  using VecView = Eigen::Map<Eigen::VectorXd>;
  using ConstVecView = Eigen::Map<const Eigen::VectorXd>;

  // Input kernels are 2 x nh, recurrent kernels nh x nh, biases length nh;
  // the output head is nh x 2 with a length-2 bias.
  MatView w_reset();
  MatView u_reset();
  VecView b_reset();
  MatView w_update();
  MatView u_update();
  VecView b_update();
  MatView w_candidate();
  MatView u_candidate();
  VecView b_candidate();
  MatView out_kernel();
  VecView out_bias();

  ConstMatView w_reset() const;
  ConstMatView u_reset() const;
  ConstVecView b_reset() const;
  ConstMatView w_update() const;
  ConstMatView u_update() const;
  ConstVecView b_update() const;
  ConstMatView w_candidate() const;
  ConstMatView u_candidate() const;
  ConstVecView b_candidate() const;
  ConstMatView out_kernel() const;
  ConstVecView out_bias() const;
};

// Recurrent state carried between sites.
struct RnnState {
  Eigen::VectorXd hidden;
  Eigen::Vector2d last_input = Eigen::Vector2d::Zero();
};

RnnState initial_state(int nh);

struct StepOutput {
  Eigen::VectorXd hidden;
  Eigen::Vector2d conditional;
};

// Per-site activations retained by forward() for backpropagation.
struct TapeSite {
  Eigen::Vector2d input;
  Eigen::VectorXd reset;
  Eigen::VectorXd update;
  Eigen::VectorXd candidate;
  Eigen::VectorXd hidden;
  Eigen::Vector2d conditional;
};

struct ForwardTape {
  std::vector<TapeSite> sites;
  Configuration sigma;
};

// Glorot-uniform kernels (bound sqrt(6 / (rows + cols))), zero biases;
// deterministic given seed.
RnnParams init_params(int nh, std::uint64_t seed);

// One cell evaluation: next hidden state and the conditional over {0, 1}.
StepOutput step(const RnnParams& params, const RnnState& state);

// log p(sigma) accumulated over the autoregressive chain.
double log_prob(const RnnParams& params, const Configuration& sigma);

// Forward pass on sigma recording everything backprop_logprob needs.
ForwardTape forward(const RnnParams& params, const Configuration& sigma);

// Exact reverse-mode gradient of log_prob(params, sigma), in RnnParams shape.
// The tape must come from forward() on the same sigma.
RnnParams backprop_logprob(const RnnParams& params, const ForwardTape& tape,
                           const Configuration& sigma);

// Psi(sigma') / Psi(sigma) = exp((log p(sigma') - log p(sigma)) / 2).
double amplitude_ratio(const RnnParams& params, const Configuration& sigma,
                       const Configuration& sigma_prime);

// `count` autoregressive draws of length n_sites plus their log-probabilities.
// Sample k depends only on (seed, k), so results are thread-count independent.
std::pair<Dataset, std::vector<double>> sample(const RnnParams& params, int n_sites,
                                               std::uint64_t count, std::uint64_t seed);

}  // namespace rydvmc
