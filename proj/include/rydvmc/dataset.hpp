#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rydvmc/lattice.hpp"

namespace rydvmc {

// An ordered collection of projective measurements. `source` records
// provenance: "oracle" for exact-sampler draws, "file" for datasets loaded
// from disk, "rnn" for draws from the autoregressive wavefunction.
struct Dataset {
  std::vector<Configuration> samples;
  std::uint64_t seed = 0;
  std::string source;
};

// Dataset file format (shared by the exact sampler and training): one header
// line
//   # L=<L> delta=<v> omega=<v> rb=<v> seed=<v> source=<tag>
// followed by one configuration per line, N characters from {0,1} in
// row-major site order.
struct DatasetHeader {
  int L = 0;
  double delta = 0.0;
  double omega = 0.0;
  double rb = 0.0;
  std::uint64_t seed = 0;
  std::string source;
};

void write_dataset(const std::string& path, const Dataset& dataset, const HamiltonianSpec& spec);

struct LoadedDataset {
  Dataset dataset;  // source is "file" after loading
  DatasetHeader header;
};
LoadedDataset read_dataset(const std::string& path);

}  // namespace rydvmc
