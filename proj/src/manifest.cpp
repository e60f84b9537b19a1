#include "rydvmc/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rydvmc {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "rydvmc-manifest";
constexpr int kVersion = 1;

json paths_to_json(const std::vector<std::pair<std::string, std::string>>& paths) {
  json obj = json::object();
  for (const auto& [role, path] : paths) obj[role] = path;
  return obj;
}

std::vector<std::pair<std::string, std::string>> paths_from_json(const json& obj) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [role, path] : obj.items()) out.emplace_back(role, path.get<std::string>());
  return out;
}

json train_to_json(const TrainConfig& c) {
  json obj;
  obj["mode"] = train_mode_name(c.mode);
  obj["t_trans"] = c.t_trans;
  obj["total_iterations"] = c.total_iterations;
  obj["eta_data"] = c.eta_data;
  obj["eta_vmc"] = c.eta_vmc;
  obj["batch_size"] = c.batch_size;
  obj["n_samples"] = c.n_samples;
  obj["eval_samples"] = c.eval_samples;
  obj["eval_every"] = c.eval_every;
  obj["seed"] = c.seed;
  obj["adam_beta1"] = c.adam.beta1;
  obj["adam_beta2"] = c.adam.beta2;
  obj["adam_epsilon"] = c.adam.epsilon;
  obj["carry_adam_state"] = c.carry_adam_state;
  obj["grad_clip_norm"] = c.grad_clip_norm;
  obj["weight_decay"] = c.weight_decay;
  obj["lr_decay"] = c.lr_decay;
  obj["stop_threshold"] = c.stop_threshold;
  obj["stop_window"] = c.stop_window;
  obj["checkpoint_every"] = c.checkpoint_every;
  return obj;
}

TrainConfig train_from_json(const json& obj) {
  TrainConfig c;
  c.mode = train_mode_from_name(obj.at("mode").get<std::string>());
  c.t_trans = obj.at("t_trans").get<long>();
  c.total_iterations = obj.at("total_iterations").get<long>();
  c.eta_data = obj.at("eta_data").get<double>();
  c.eta_vmc = obj.at("eta_vmc").get<double>();
  c.batch_size = obj.at("batch_size").get<long>();
  c.n_samples = obj.at("n_samples").get<long>();
  c.eval_samples = obj.at("eval_samples").get<long>();
  c.eval_every = obj.at("eval_every").get<long>();
  c.seed = obj.at("seed").get<std::uint64_t>();
  c.adam.beta1 = obj.at("adam_beta1").get<double>();
  c.adam.beta2 = obj.at("adam_beta2").get<double>();
  c.adam.epsilon = obj.at("adam_epsilon").get<double>();
  c.carry_adam_state = obj.at("carry_adam_state").get<bool>();
  c.grad_clip_norm = obj.at("grad_clip_norm").get<double>();
  c.weight_decay = obj.at("weight_decay").get<double>();
  c.lr_decay = obj.at("lr_decay").get<double>();
  c.stop_threshold = obj.at("stop_threshold").get<double>();
  c.stop_window = obj.at("stop_window").get<long>();
  c.checkpoint_every = obj.at("checkpoint_every").get<long>();
  return c;
}

}  // namespace

std::string train_mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::kData: return "data";
    case TrainMode::kVmc: return "vmc";
    case TrainMode::kHybrid: return "hybrid";
  }
  throw std::invalid_argument("train_mode_name: unknown mode");
}

TrainMode train_mode_from_name(const std::string& name) {
  if (name == "data") return TrainMode::kData;
  if (name == "vmc") return TrainMode::kVmc;
  if (name == "hybrid") return TrainMode::kHybrid;
  throw std::invalid_argument("unknown training mode '" + name +
                              "' (expected data, vmc, or hybrid)");
}

std::string current_utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["command"] = m.command;
  doc["tool_version"] = m.tool_version;
  doc["created_at"] = m.created_at;
  json lattice;
  lattice["L"] = m.L;
  lattice["a"] = m.a;
  lattice["omega"] = m.omega;
  lattice["delta"] = m.delta;
  lattice["rb"] = m.rb;
  doc["lattice"] = std::move(lattice);
  if (m.nh) doc["nh"] = *m.nh;
  if (m.seed) doc["seed"] = *m.seed;
  if (m.sample_count) doc["sample_count"] = *m.sample_count;
  if (m.train) doc["train"] = train_to_json(*m.train);
  if (m.reference_energy) doc["reference_energy"] = *m.reference_energy;
  if (m.threads) doc["threads"] = *m.threads;
  doc["inputs"] = paths_to_json(m.inputs);
  doc["outputs"] = paths_to_json(m.outputs);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open manifest file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open manifest file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("manifest is not valid JSON: " + path + ": " + e.what());
  }
  if (doc.value("format", "") != kFormat) {
    throw std::invalid_argument("not a manifest file: " + path);
  }
  if (doc.value("version", 0) != kVersion) {
    throw std::invalid_argument("unsupported manifest version in " + path);
  }
  RunManifest m;
  m.command = doc.at("command").get<std::string>();
  m.tool_version = doc.at("tool_version").get<std::string>();
  m.created_at = doc.at("created_at").get<std::string>();
  const json& lattice = doc.at("lattice");
  m.L = lattice.at("L").get<int>();
  m.a = lattice.at("a").get<double>();
  m.omega = lattice.at("omega").get<double>();
  m.delta = lattice.at("delta").get<double>();
  m.rb = lattice.at("rb").get<double>();
  if (doc.contains("nh")) m.nh = doc.at("nh").get<int>();
  if (doc.contains("seed")) m.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("sample_count")) m.sample_count = doc.at("sample_count").get<std::uint64_t>();
  if (doc.contains("train")) m.train = train_from_json(doc.at("train"));
  if (doc.contains("reference_energy")) {
    m.reference_energy = doc.at("reference_energy").get<double>();
  }
  if (doc.contains("threads")) m.threads = doc.at("threads").get<int>();
  if (doc.contains("inputs")) m.inputs = paths_from_json(doc.at("inputs"));
  if (doc.contains("outputs")) m.outputs = paths_from_json(doc.at("outputs"));
  return m;
}

}  // namespace rydvmc
