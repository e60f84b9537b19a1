#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rydvmc/checkpoint.hpp"
#include "rydvmc/dataset.hpp"
#include "rydvmc/energy.hpp"
#include "rydvmc/errors.hpp"
#include "rydvmc/lattice.hpp"
#include "rydvmc/manifest.hpp"
#include "rydvmc/metrics.hpp"
#include "rydvmc/oracle.hpp"
#include "rydvmc/threads.hpp"
#include "rydvmc/trace.hpp"
#include "rydvmc/training.hpp"
#include "rydvmc/version.hpp"
#include "rydvmc/wavefunction.hpp"

namespace {

using namespace rydvmc;

// Exit codes: 0 success, 2 usage, 3 capacity, 4 numerical failure.
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumerical = 4;

struct LatticeFlags {
  int L = 0;
  double a = 1.0;
  double omega = 1.0;
  double delta = 1.0;
  double rb = default_blockade_radius();
};

void add_lattice_flags(CLI::App* cmd, LatticeFlags& lat) {
  cmd->add_option("--L", lat.L, "lattice side length (N = L*L atoms)")->required();
  cmd->add_option("--a", lat.a, "lattice spacing")->capture_default_str();
  cmd->add_option("--omega", lat.omega, "Rabi frequency")->capture_default_str();
  cmd->add_option("--delta", lat.delta, "detuning")->capture_default_str();
  cmd->add_option("--rb", lat.rb, "blockade radius (default 7^(1/6))")->capture_default_str();
}

void fill_lattice(RunManifest& m, const LatticeFlags& lat) {
  m.L = lat.L;
  m.a = lat.a;
  m.omega = lat.omega;
  m.delta = lat.delta;
  m.rb = lat.rb;
}

// The run manifest sits next to its outputs: <prefix>.manifest.json for
// training runs, <dataset>.manifest.json for generated datasets.
std::string manifest_path_for_trace(const std::string& trace_path) {
  const std::string suffix = ".trace.csv";
  if (trace_path.size() > suffix.size() &&
      trace_path.compare(trace_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return trace_path.substr(0, trace_path.size() - suffix.size()) + ".manifest.json";
  }
  return trace_path + ".manifest.json";
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataFlags {
  LatticeFlags lat;
  std::uint64_t count = 100000;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

void run_gen_data(const GenDataFlags& flags) {
  if (flags.threads > 0) set_max_threads(flags.threads);
  const HamiltonianSpec spec =
      build_spec(flags.lat.L, flags.lat.a, flags.lat.omega, flags.lat.delta, flags.lat.rb);
  const ExactGroundState gs = ground_state(spec);
  const Dataset dataset = sample_dataset(gs, spec, flags.count, flags.seed);
  write_dataset(flags.out, dataset, spec);

  RunManifest m;
  m.command = "gen-data";
  m.tool_version = kVersion;
  m.created_at = current_utc_timestamp();
  fill_lattice(m, flags.lat);
  m.seed = flags.seed;
  m.sample_count = flags.count;
  m.reference_energy = gs.energy;
  m.threads = max_threads();
  const std::string manifest_path = flags.out + ".manifest.json";
  m.outputs = {{"dataset", flags.out}, {"manifest", manifest_path}};
  write_manifest(manifest_path, m);

  std::cout << "wrote " << flags.count << " samples to " << flags.out << "\n"
            << "E0 = " << gs.energy << "  (E0/N = " << gs.energy / spec.n_atoms() << ")\n"
            << "manifest: " << manifest_path << "\n";
}

// ---------------------------------------------------------------------------
// train

struct TrainFlags {
  LatticeFlags lat;
  int nh = 0;  // 0 = default 2L
  std::string mode = "hybrid";
  std::string dataset_path;
  std::string out_prefix;
  TrainConfig cfg;
  std::optional<double> e0;
  bool resume = false;
  int threads = 0;
};

void run_train(TrainFlags& flags) {
  if (flags.threads > 0) set_max_threads(flags.threads);
  flags.cfg.mode = train_mode_from_name(flags.mode);
  // Normalize here as well so the manifest records the actual schedule.
  if (flags.cfg.mode == TrainMode::kData) flags.cfg.t_trans = flags.cfg.total_iterations;
  if (flags.cfg.mode == TrainMode::kVmc) flags.cfg.t_trans = 0;

  const HamiltonianSpec spec =
      build_spec(flags.lat.L, flags.lat.a, flags.lat.omega, flags.lat.delta, flags.lat.rb);
  const int nh = flags.nh > 0 ? flags.nh : 2 * flags.lat.L;

  std::optional<Dataset> dataset;
  std::optional<double> reference = flags.e0;
  if (!flags.dataset_path.empty()) {
    LoadedDataset loaded = read_dataset(flags.dataset_path);
    if (loaded.header.L != flags.lat.L) {
      throw std::invalid_argument("dataset " + flags.dataset_path + " is for L=" +
                                  std::to_string(loaded.header.L) + ", run requested L=" +
                                  std::to_string(flags.lat.L));
    }
    if (loaded.header.delta != flags.lat.delta || loaded.header.omega != flags.lat.omega ||
        loaded.header.rb != flags.lat.rb) {
      throw std::invalid_argument("dataset " + flags.dataset_path +
                                  " was generated for different Hamiltonian couplings");
    }
    dataset = std::move(loaded.dataset);
    if (!reference) {
      // The generator's manifest records E0; use it when present.
      try {
        reference = read_manifest(flags.dataset_path + ".manifest.json").reference_energy;
      } catch (const std::exception&) {
      }
    }
  }

  const std::string trace_path = flags.out_prefix + ".trace.csv";
  const std::string checkpoint_path = flags.out_prefix + ".checkpoint.json";
  const std::string manifest_path = flags.out_prefix + ".manifest.json";

  RnnParams params;
  std::optional<ResumeState> resume_state;
  if (flags.resume) {
    Checkpoint cp = read_checkpoint(checkpoint_path);
    if (cp.params.nh != nh) {
      throw std::invalid_argument("checkpoint has nh=" + std::to_string(cp.params.nh) +
                                  ", run requested nh=" + std::to_string(nh));
    }
    params = std::move(cp.params);
    ResumeState rs;
    rs.iteration = cp.iteration;
    rs.updates = cp.updates_so_far;
    rs.adam = cp.adam ? std::move(*cp.adam) : make_adam_state(params);
    resume_state = std::move(rs);
  } else {
    params = init_params(nh, flags.cfg.seed);
  }

  TraceWriter writer(trace_path, flags.resume);
  TrainHooks hooks;
  hooks.on_row = [&writer](const TraceRow& row) { writer.write_row(row); };
  hooks.on_checkpoint = [&](long iteration, Phase phase, long updates, const RnnParams& p,
                            const AdamState& adam) {
    Checkpoint cp;
    cp.params = p;
    cp.seed = flags.cfg.seed;
    cp.iteration = iteration;
    cp.updates_so_far = updates;
    cp.phase = phase;
    cp.adam = adam;
    cp.manifest = manifest_path;
    write_checkpoint(checkpoint_path, cp);
  };

  const TrainResult result =
      train(spec, std::move(params), dataset, flags.cfg, reference, hooks, resume_state);

  RunManifest m;
  m.command = "train";
  m.tool_version = kVersion;
  m.created_at = current_utc_timestamp();
  fill_lattice(m, flags.lat);
  m.nh = nh;
  m.train = flags.cfg;
  m.reference_energy = reference;
  m.threads = max_threads();
  if (!flags.dataset_path.empty()) m.inputs.emplace_back("dataset", flags.dataset_path);
  if (flags.resume) m.inputs.emplace_back("resume_checkpoint", checkpoint_path);
  m.outputs = {{"trace", trace_path},
               {"checkpoint", checkpoint_path},
               {"manifest", manifest_path}};
  write_manifest(manifest_path, m);

  std::cout << "trained " << result.trace.size() << " recorded iterations ("
            << result.updates << " updates total)";
  if (result.stopped_early) std::cout << ", stopped early at the energy threshold";
  std::cout << "\n";
  if (!result.trace.empty()) {
    const TraceRow& last = result.trace.back();
    std::cout << "final energy " << last.energy_mean << " +- " << last.energy_std;
    if (reference) {
      std::cout << "  (density error "
                << (last.energy_mean - *reference) / spec.n_atoms() << ")";
    }
    std::cout << "\n";
  }
  std::cout << "trace: " << trace_path << "\ncheckpoint: " << checkpoint_path
            << "\nmanifest: " << manifest_path << "\n";
}

// ---------------------------------------------------------------------------
// report

struct ReportFlags {
  std::vector<std::string> traces;
  std::optional<double> e0;
  int n_atoms = 0;  // 0 = take from each run's manifest
  double threshold = 0.015;
  int window = 50;
  std::string out;  // empty = stdout
};

void run_report(const ReportFlags& flags) {
  nlohmann::json doc;
  doc["threshold"] = flags.threshold;
  doc["window"] = flags.window;
  nlohmann::json runs = nlohmann::json::array();

  for (const std::string& path : flags.traces) {
    const EnergyTrace trace = read_trace(path);

    std::optional<double> reference = flags.e0;
    int n_atoms = flags.n_atoms;
    std::optional<RunManifest> manifest;
    try {
      manifest = read_manifest(manifest_path_for_trace(path));
    } catch (const std::exception&) {
    }
    if (manifest) {
      if (!reference) reference = manifest->reference_energy;
      if (n_atoms == 0) n_atoms = manifest->L * manifest->L;
    }
    if (!reference) {
      throw std::invalid_argument("no reference energy for " + path +
                                  ": pass --e0 or keep the run manifest next to the trace");
    }
    if (n_atoms < 1) {
      throw std::invalid_argument("no atom count for " + path +
                                  ": pass --n-atoms or keep the run manifest next to the trace");
    }

    nlohmann::json run;
    run["trace"] = path;
    run["rows"] = trace.size();
    run["reference_energy"] = *reference;
    run["n_atoms"] = n_atoms;
    if (manifest && manifest->train) run["t_trans"] = manifest->train->t_trans;

    const auto t_conv =
        convergence_time(trace, *reference, n_atoms, flags.threshold, flags.window);
    run["converged"] = t_conv.has_value();
    if (t_conv) {
      run["t_conv"] = *t_conv;
    } else {
      run["t_conv"] = nullptr;
    }
    if (static_cast<int>(trace.size()) >= flags.window) {
      const auto smoothed = running_average(trace, flags.window);
      run["final_smoothed_energy_density_error"] =
          (smoothed.back().second - *reference) / static_cast<double>(n_atoms);
    } else {
      run["final_smoothed_energy_density_error"] = nullptr;
    }
    runs.push_back(std::move(run));
  }
  doc["runs"] = std::move(runs);

  if (flags.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::ofstream out(flags.out, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open report file for writing: " + flags.out);
    out << doc.dump(2) << '\n';
    std::cout << "report: " << flags.out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground states of 2D Rydberg atom arrays with a recurrent-network "
               "wavefunction: exact sampler, trainer, and trace metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

  GenDataFlags gen;
  CLI::App* cmd_gen = app.add_subcommand(
      "gen-data", "solve the Hamiltonian exactly and sample measurement data");
  add_lattice_flags(cmd_gen, gen.lat);
  cmd_gen->add_option("--count", gen.count, "number of samples")->capture_default_str();
  cmd_gen->add_option("--seed", gen.seed, "sampling seed")->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "dataset output path")->required();
  cmd_gen->add_option("--threads", gen.threads, "worker thread cap (0 = auto)")
      ->capture_default_str();
  cmd_gen->set_config("--config");
  cmd_gen->callback([&gen]() { run_gen_data(gen); });

  TrainFlags tr;
  CLI::App* cmd_train =
      app.add_subcommand("train", "optimize the wavefunction on data, the Hamiltonian, or both");
  add_lattice_flags(cmd_train, tr.lat);
  cmd_train->add_option("--nh", tr.nh, "hidden units (default 2L)")->capture_default_str();
  cmd_train->add_option("--mode", tr.mode, "data | vmc | hybrid")
      ->check(CLI::IsMember({"data", "vmc", "hybrid"}))
      ->capture_default_str();
  cmd_train->add_option("--t-trans", tr.cfg.t_trans,
                        "data-driven iterations before the switch (hybrid mode)")
      ->capture_default_str();
  cmd_train->add_option("--iterations,--total-iterations", tr.cfg.total_iterations,
                        "total training iterations")
      ->required();
  cmd_train->add_option("--eta-data", tr.cfg.eta_data, "data-phase learning rate")
      ->capture_default_str();
  cmd_train->add_option("--eta-vmc", tr.cfg.eta_vmc, "Hamiltonian-phase learning rate")
      ->capture_default_str();
  cmd_train->add_option("--batch-size", tr.cfg.batch_size, "data-phase batch size")
      ->capture_default_str();
  cmd_train->add_option("--n-samples", tr.cfg.n_samples, "draws per Hamiltonian-phase update")
      ->capture_default_str();
  cmd_train->add_option("--eval-samples", tr.cfg.eval_samples,
                        "draws per trace-row energy estimate")
      ->capture_default_str();
  cmd_train->add_option("--eval-every", tr.cfg.eval_every, "record a trace row every k iterations")
      ->capture_default_str();
  cmd_train->add_option("--seed", tr.cfg.seed, "run seed")->capture_default_str();
  cmd_train->add_option("--adam-beta1", tr.cfg.adam.beta1, "Adam beta1")->capture_default_str();
  cmd_train->add_option("--adam-beta2", tr.cfg.adam.beta2, "Adam beta2")->capture_default_str();
  cmd_train->add_option("--adam-epsilon", tr.cfg.adam.epsilon, "Adam epsilon")
      ->capture_default_str();
  cmd_train->add_flag("--carry-adam-state", tr.cfg.carry_adam_state,
                      "keep optimizer moments across the t-trans switch");
  cmd_train->add_option("--grad-clip-norm", tr.cfg.grad_clip_norm,
                        "gradient 2-norm clip (0 = off)")
      ->capture_default_str();
  cmd_train->add_option("--weight-decay", tr.cfg.weight_decay, "L2 coefficient (0 = off)")
      ->capture_default_str();
  cmd_train->add_option("--lr-decay", tr.cfg.lr_decay,
                        "per-iteration learning-rate factor (1 = off)")
      ->capture_default_str();
  cmd_train->add_option("--stop-threshold", tr.cfg.stop_threshold,
                        "early-stop energy-density margin (0 = off; needs a reference energy)")
      ->capture_default_str();
  cmd_train->add_option("--stop-window", tr.cfg.stop_window,
                        "trailing window for the early stop")
      ->capture_default_str();
  cmd_train->add_option("--checkpoint-every", tr.cfg.checkpoint_every,
                        "checkpoint every k iterations (0 = end of run only)")
      ->capture_default_str();
  cmd_train->add_option("--dataset", tr.dataset_path, "measurement dataset for the data phase");
  cmd_train->add_option("--out-prefix", tr.out_prefix,
                        "output prefix (<prefix>.trace.csv / .checkpoint.json / .manifest.json)")
      ->required();
  cmd_train->add_option("--e0", tr.e0,
                        "reference ground-state energy (default: the dataset's manifest)");
  cmd_train->add_flag("--resume", tr.resume, "continue from <prefix>.checkpoint.json");
  cmd_train->add_option("--threads", tr.threads, "worker thread cap (0 = auto)")
      ->capture_default_str();
  cmd_train->set_config("--config");
  cmd_train->callback([&tr]() { run_train(tr); });

  ReportFlags rep;
  CLI::App* cmd_report =
      app.add_subcommand("report", "convergence metrics for one or more trace files");
  cmd_report->add_option("--trace", rep.traces, "trace CSV path (repeatable)")
      ->required()
      ->expected(-1);
  cmd_report->add_option("--e0", rep.e0, "reference ground-state energy");
  cmd_report->add_option("--n-atoms", rep.n_atoms, "atom count for the density normalization");
  cmd_report->add_option("--threshold", rep.threshold, "convergence margin per atom")
      ->capture_default_str();
  cmd_report->add_option("--window", rep.window, "running-average window")->capture_default_str();
  cmd_report->add_option("--out", rep.out, "write the JSON report here instead of stdout");
  cmd_report->set_config("--config");
  cmd_report->callback([&rep]() { run_report(rep); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const convergence_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
