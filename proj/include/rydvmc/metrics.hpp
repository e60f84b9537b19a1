#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rydvmc/trace.hpp"

namespace rydvmc {

// Running average of energy_mean over an even window w with the asymmetric
// offsets -w/2+1 .. +w/2 around each interior row: output at row t is
// (1/w) * sum_{i=-w/2+1}^{w/2} energy(t+i). Boundary rows where the window
// would leave the trace are omitted, so the output has
// trace.size() - window + 1 entries, each tagged with its row's iteration.
std::vector<std::pair<long, double>> running_average(const EnergyTrace& trace,
                                                     int window = 50);

// First iteration at which the smoothed energy satisfies
// (running_average(t) - reference) / n_atoms <= threshold, or nullopt if the
// trace never gets there (including traces shorter than the window).
std::optional<long> convergence_time(const EnergyTrace& trace, double reference,
                                     int n_atoms, double threshold = 0.015,
                                     int window = 50);

}  // namespace rydvmc
