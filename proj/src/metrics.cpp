#include "rydvmc/metrics.hpp"

#include <stdexcept>
#include <string>

namespace rydvmc {

std::vector<std::pair<long, double>> running_average(const EnergyTrace& trace, int window) {
  if (window < 2 || window % 2 != 0) {
    throw std::invalid_argument("running_average: window must be a positive even integer, got " +
                                std::to_string(window));
  }
  const auto n = static_cast<long>(trace.size());
  if (n < window) {
    throw std::invalid_argument("running_average: trace has " + std::to_string(n) +
                                " rows, shorter than the window " + std::to_string(window));
  }
  const long half = window / 2;
  std::vector<std::pair<long, double>> out;
  out.reserve(static_cast<std::size_t>(n - window + 1));
  // Interior rows are those where every offset in -w/2+1 .. +w/2 lands inside
  // the trace: t - (w/2 - 1) >= 0 and t + w/2 <= n - 1.
  for (long t = half - 1; t + half < n; ++t) {
    double acc = 0.0;
    for (long i = -half + 1; i <= half; ++i) {
      acc += trace[static_cast<std::size_t>(t + i)].energy_mean;
    }
    out.emplace_back(trace[static_cast<std::size_t>(t)].iteration,
                     acc / static_cast<double>(window));
  }
  return out;
}

std::optional<long> convergence_time(const EnergyTrace& trace, double reference, int n_atoms,
                                     double threshold, int window) {
  if (trace.empty()) throw std::invalid_argument("convergence_time: empty trace");
  if (n_atoms < 1) throw std::invalid_argument("convergence_time: n_atoms must be >= 1");
  if (static_cast<long>(trace.size()) < window) return std::nullopt;
  for (const auto& [iteration, smoothed] : running_average(trace, window)) {
    if ((smoothed - reference) / static_cast<double>(n_atoms) <= threshold) return iteration;
  }
  return std::nullopt;
}

}  // namespace rydvmc
