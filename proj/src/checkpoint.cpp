#include "rydvmc/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rydvmc {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "rydvmc-checkpoint";
constexpr int kVersion = 1;

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr, long expected, const std::string& what) {
  if (!arr.is_array() || static_cast<long>(arr.size()) != expected) {
    throw std::invalid_argument("checkpoint: " + what + " has " + std::to_string(arr.size()) +
                                " entries, expected " + std::to_string(expected));
  }
  Eigen::VectorXd v(expected);
  for (long i = 0; i < expected; ++i) v[i] = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  const RnnParams& params = checkpoint.params;
  if (params.nh < 1 || params.flat.size() != RnnParams::param_count(params.nh)) {
    throw std::invalid_argument("write_checkpoint: malformed parameter vector");
  }
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["nh"] = params.nh;
  doc["seed"] = checkpoint.seed;
  doc["iteration"] = checkpoint.iteration;
  doc["updates_so_far"] = checkpoint.updates_so_far;
  doc["phase"] = phase_name(checkpoint.phase);
  doc["manifest"] = checkpoint.manifest;

  json tensors;
  for (const TensorInfo& t : RnnParams::layout(params.nh)) {
    json entry;
    entry["rows"] = t.rows;
    entry["cols"] = t.cols;
    entry["data"] = vector_to_json(
        params.flat.segment(t.offset, static_cast<long>(t.rows) * t.cols));
    tensors[t.name] = std::move(entry);
  }
  doc["tensors"] = std::move(tensors);

  if (checkpoint.adam) {
    json adam;
    adam["t"] = checkpoint.adam->t;
    adam["m"] = vector_to_json(checkpoint.adam->m);
    adam["v"] = vector_to_json(checkpoint.adam->v);
    doc["adam"] = std::move(adam);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open checkpoint file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open checkpoint file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("checkpoint is not valid JSON: " + path + ": " + e.what());
  }
  if (doc.value("format", "") != kFormat) {
    throw std::invalid_argument("not a checkpoint file: " + path);
  }
  if (doc.value("version", 0) != kVersion) {
    throw std::invalid_argument("unsupported checkpoint version in " + path);
  }

  Checkpoint checkpoint;
  const int nh = doc.at("nh").get<int>();
  checkpoint.params = RnnParams(nh);
  checkpoint.seed = doc.at("seed").get<std::uint64_t>();
  checkpoint.iteration = doc.at("iteration").get<long>();
  checkpoint.updates_so_far = doc.at("updates_so_far").get<long>();
  checkpoint.phase = phase_from_name(doc.at("phase").get<std::string>());
  checkpoint.manifest = doc.value("manifest", "");

  const json& tensors = doc.at("tensors");
  for (const TensorInfo& t : RnnParams::layout(nh)) {
    if (!tensors.contains(t.name)) {
      throw std::invalid_argument("checkpoint is missing tensor '" + t.name + "': " + path);
    }
    const json& entry = tensors.at(t.name);
    if (entry.at("rows").get<int>() != t.rows || entry.at("cols").get<int>() != t.cols) {
      throw std::invalid_argument("checkpoint tensor '" + t.name +
                                  "' has the wrong shape for nh=" + std::to_string(nh));
    }
    const long size = static_cast<long>(t.rows) * t.cols;
    checkpoint.params.flat.segment(t.offset, size) =
        vector_from_json(entry.at("data"), size, t.name);
  }

  if (doc.contains("adam")) {
    const json& adam = doc.at("adam");
    AdamState state;
    state.t = adam.at("t").get<long>();
    const long n = RnnParams::param_count(nh);
    state.m = vector_from_json(adam.at("m"), n, "adam.m");
    state.v = vector_from_json(adam.at("v"), n, "adam.v");
    checkpoint.adam = std::move(state);
  }
  return checkpoint;
}

}  // namespace rydvmc
