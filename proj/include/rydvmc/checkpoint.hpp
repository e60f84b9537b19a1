#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rydvmc/trace.hpp"
#include "rydvmc/training.hpp"
#include "rydvmc/wavefunction.hpp"

namespace rydvmc {

// Parameter checkpoint: nh, every tensor by name with its shape and
// row-major payload, the run seed, the iteration / update counters, the
// phase, and (when mid-run) the Adam moments. Stored as JSON with exact
// round-trip doubles, so a resumed run reproduces the uninterrupted one
// bit for bit.
struct Checkpoint {
  RnnParams params;
  std::uint64_t seed = 0;
  long iteration = 0;
  long updates_so_far = 0;
  Phase phase = Phase::kData;
  std::optional<AdamState> adam;
  std::string manifest;  // path of the run manifest this checkpoint belongs to
};

void write_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace rydvmc
