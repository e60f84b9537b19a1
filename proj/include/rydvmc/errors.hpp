#pragma once

#include <stdexcept>

namespace rydvmc {

// Requested system size exceeds what the state-vector machinery can hold.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative eigensolver failed to reach the target residual.
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite loss or similar numerical breakdown during optimization.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rydvmc
