#include "rydvmc/dataset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "io_util.hpp"

namespace rydvmc {

namespace {

std::string header_line(const HamiltonianSpec& spec, const Dataset& dataset) {
  std::ostringstream out;
  out << "# L=" << spec.L << " delta=" << io::format_double(spec.delta)
      << " omega=" << io::format_double(spec.omega) << " rb=" << io::format_double(spec.rb)
      << " seed=" << dataset.seed << " source=" << dataset.source;
  return out.str();
}

std::string_view field_value(std::string_view token, std::string_view key) {
  if (token.substr(0, key.size()) != key) {
    throw std::invalid_argument("dataset header: expected '" + std::string(key) + "', got '" +
                                std::string(token) + "'");
  }
  return token.substr(key.size());
}

}  // namespace

void write_dataset(const std::string& path, const Dataset& dataset,
                   const HamiltonianSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open dataset file for writing: " + path);
  out << header_line(spec, dataset) << '\n';
  const std::size_t n = static_cast<std::size_t>(spec.n_atoms());
  std::string line(n, '0');
  for (const Configuration& sigma : dataset.samples) {
    if (sigma.size() != n) {
      throw std::invalid_argument("write_dataset: sample length does not match the lattice");
    }
    for (std::size_t i = 0; i < n; ++i) line[i] = sigma[i] ? '1' : '0';
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

LoadedDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw std::invalid_argument("dataset file missing '#' header line: " + path);
  }

  LoadedDataset loaded;
  std::istringstream header(line.substr(1));
  std::string token;
  int field = 0;
  while (header >> token) {
    switch (field++) {
      case 0:
        loaded.header.L = io::parse_int<int>(field_value(token, "L="), "L");
        break;
      case 1:
        loaded.header.delta = io::parse_double(field_value(token, "delta="), "delta");
        break;
      case 2:
        loaded.header.omega = io::parse_double(field_value(token, "omega="), "omega");
        break;
      case 3:
        loaded.header.rb = io::parse_double(field_value(token, "rb="), "rb");
        break;
      case 4:
        loaded.header.seed = io::parse_int<std::uint64_t>(field_value(token, "seed="), "seed");
        break;
      case 5:
        loaded.header.source = std::string(field_value(token, "source="));
        break;
      default:
        throw std::invalid_argument("dataset header has unexpected field: " + token);
    }
  }
  if (field != 6) throw std::invalid_argument("dataset header is incomplete: " + line);
  if (loaded.header.L < 1) throw std::invalid_argument("dataset header: L must be >= 1");

  const std::size_t n = static_cast<std::size_t>(loaded.header.L) * loaded.header.L;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.size() != n) {
      throw std::invalid_argument("dataset line has " + std::to_string(line.size()) +
                                  " sites, header implies " + std::to_string(n));
    }
    Configuration sigma(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (line[i] == '0') {
        sigma[i] = 0;
      } else if (line[i] == '1') {
        sigma[i] = 1;
      } else {
        throw std::invalid_argument("dataset line contains a character outside {0,1}");
      }
    }
    loaded.dataset.samples.push_back(std::move(sigma));
  }
  loaded.dataset.seed = loaded.header.seed;
  loaded.dataset.source = "file";
  return loaded;
}

}  // namespace rydvmc
