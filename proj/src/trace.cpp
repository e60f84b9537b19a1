#include "rydvmc/trace.hpp"

#include <sstream>
#include <stdexcept>

#include "io_util.hpp"

namespace rydvmc {

namespace {

constexpr const char* kHeader = "iteration,phase,updates_so_far,loss,energy_mean,energy_std";

std::string format_row(const TraceRow& row) {
  std::ostringstream out;
  out << row.iteration << ',' << phase_name(row.phase) << ',' << row.updates_so_far << ','
      << io::format_double(row.loss) << ',' << io::format_double(row.energy_mean) << ','
      << io::format_double(row.energy_std);
  return out.str();
}

}  // namespace

std::string phase_name(Phase phase) { return phase == Phase::kData ? "data" : "vmc"; }

Phase phase_from_name(const std::string& name) {
  if (name == "data") return Phase::kData;
  if (name == "vmc") return Phase::kVmc;
  throw std::invalid_argument("unknown phase '" + name + "' (expected data or vmc)");
}

void write_trace(const std::string& path, const EnergyTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open trace file for writing: " + path);
  out << kHeader << '\n';
  for (const TraceRow& row : trace) out << format_row(row) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

EnergyTrace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::invalid_argument("trace file missing the expected CSV header: " + path);
  }
  EnergyTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    TraceRow row;
    int i = 0;
    while (std::getline(fields, field, ',')) {
      switch (i++) {
        case 0: row.iteration = io::parse_int<long>(field, "iteration"); break;
        case 1: row.phase = phase_from_name(field); break;
        case 2: row.updates_so_far = io::parse_int<long>(field, "updates_so_far"); break;
        case 3: row.loss = io::parse_double(field, "loss"); break;
        case 4: row.energy_mean = io::parse_double(field, "energy_mean"); break;
        case 5: row.energy_std = io::parse_double(field, "energy_std"); break;
        default: throw std::invalid_argument("trace row has more than 6 fields: " + line);
      }
    }
    if (i != 6) throw std::invalid_argument("trace row has " + std::to_string(i) +
                                            " fields, expected 6: " + line);
    trace.push_back(row);
  }
  return trace;
}

TraceWriter::TraceWriter(const std::string& path, bool append)
    : out_(path, append ? std::ios::binary | std::ios::app : std::ios::binary) {
  if (!out_) throw std::invalid_argument("cannot open trace file for writing: " + path);
  if (!append) out_ << kHeader << '\n';
}

void TraceWriter::write_row(const TraceRow& row) {
  out_ << format_row(row) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("trace write failed");
}

}  // namespace rydvmc
