#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydvmc/training.hpp"

namespace rydvmc {

std::string train_mode_name(TrainMode mode);
TrainMode train_mode_from_name(const std::string& name);

// Sidecar record of one CLI run: the fully resolved configuration, tool
// version, timestamp, and the paths of every input and output, so a run can
// be reproduced from the manifest alone. Manifests are the only output files
// that carry a timestamp; datasets, traces, and checkpoints stay byte-stable
// across reruns.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string created_at;  // ISO 8601 UTC, e.g. 2026-08-19T12:00:00Z

  // Lattice.
  int L = 0;
  double a = 1.0;
  double omega = 1.0;
  double delta = 1.0;
  double rb = 1.0;

  std::optional<int> nh;
  std::optional<std::uint64_t> seed;          // gen-data draw seed
  std::optional<std::uint64_t> sample_count;  // gen-data sample count
  std::optional<TrainConfig> train;           // resolved training configuration
  std::optional<double> reference_energy;
  std::optional<int> threads;

  std::vector<std::pair<std::string, std::string>> inputs;   // (role, path)
  std::vector<std::pair<std::string, std::string>> outputs;  // (role, path)
};

std::string current_utc_timestamp();

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

}  // namespace rydvmc
