#pragma once

// GRU cell core shared by the wavefunction and energy translation units.
// Keeping a single implementation guarantees every path that walks the
// autoregressive chain (log_prob, forward, sample, cached local energies)
// produces bit-identical activations.

#include <Eigen/Dense>

#include <cmath>

#include "rydvmc/wavefunction.hpp"

namespace rydvmc::detail {

// Scratch buffers reused across sites so chain walks allocate only once.
struct CellWorkspace {
  Eigen::VectorXd reset, update, cand, gated, hidden;
  explicit CellWorkspace(int nh) : reset(nh), update(nh), cand(nh), gated(nh), hidden(nh) {}
};

inline void cell_step(const RnnParams& p, const Eigen::Vector2d& x, const Eigen::VectorXd& h,
                      CellWorkspace& ws) {
  ws.reset.noalias() = p.u_reset() * h;
  ws.reset.noalias() += p.w_reset().transpose() * x;
  ws.reset += p.b_reset();
  ws.reset.array() = (1.0 + (-ws.reset.array()).exp()).inverse();

  ws.update.noalias() = p.u_update() * h;
  ws.update.noalias() += p.w_update().transpose() * x;
  ws.update += p.b_update();
  ws.update.array() = (1.0 + (-ws.update.array()).exp()).inverse();

  ws.gated.array() = ws.reset.array() * h.array();
  ws.cand.noalias() = p.u_candidate() * ws.gated;
  ws.cand.noalias() += p.w_candidate().transpose() * x;
  ws.cand += p.b_candidate();
  ws.cand.array() = ws.cand.array().tanh();

  ws.hidden.array() =
      (1.0 - ws.update.array()) * h.array() + ws.update.array() * ws.cand.array();
}

inline Eigen::Vector2d conditional_from_hidden(const RnnParams& p, const Eigen::VectorXd& h) {
  Eigen::Vector2d logits = p.out_kernel().transpose() * h;
  logits += p.out_bias();
  // Scalar std::exp: saturated logits must underflow to an exact zero
  // probability (Eigen's vectorized exp clamps instead).
  const double peak = logits.maxCoeff();
  const Eigen::Vector2d shifted(std::exp(logits[0] - peak), std::exp(logits[1] - peak));
  return shifted / shifted.sum();
}

inline Eigen::Vector2d one_hot(int bit) {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  x[bit] = 1.0;
  return x;
}

}  // namespace rydvmc::detail
