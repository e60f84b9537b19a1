#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace rydvmc {

enum class Phase { kData, kVmc };

std::string phase_name(Phase phase);
Phase phase_from_name(const std::string& name);

// One energy-trace row, appended after each training iteration that is
// evaluated. `iteration` counts optimization iterations from the start of
// the run (first iteration is 1); `updates_so_far` counts Adam updates,
// which differ from iterations in the data phase (one epoch = many updates).
struct TraceRow {
  long iteration = 0;
  Phase phase = Phase::kData;
  long updates_so_far = 0;
  double loss = 0.0;
  double energy_mean = 0.0;
  double energy_std = 0.0;
};

using EnergyTrace = std::vector<TraceRow>;

// CSV with header `iteration,phase,updates_so_far,loss,energy_mean,energy_std`.
void write_trace(const std::string& path, const EnergyTrace& trace);
EnergyTrace read_trace(const std::string& path);

// Streaming writer used by the CLI: one row per training iteration, flushed
// immediately so an interrupted run leaves a usable trace. Opening with
// append=true (resume) skips the header.
class TraceWriter {
 public:
  TraceWriter(const std::string& path, bool append);
  void write_row(const TraceRow& row);

 private:
  std::ofstream out_;
};

}  // namespace rydvmc
