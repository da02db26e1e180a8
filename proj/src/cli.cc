// Copyright 2026 The asgcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asgcl/cli.h"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "asgcl/checkpoint.h"
#include "asgcl/config.h"
#include "asgcl/errors.h"
#include "asgcl/evaluation.h"
#include "asgcl/format.h"
#include "asgcl/harness.h"
#include "asgcl/io.h"
#include "asgcl/log.h"
#include "asgcl/spectral_augment.h"
#include "asgcl/trainer.h"

namespace asgcl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> epochs;
  bool no_spectral = false;
  bool symmetric_encoder = false;
  bool no_upper = false;
  bool no_lower = false;
  bool raw_diffusion = false;
  bool verbose = false;
};

struct CommandFlags {
  std::string checkpoint;
  std::string task;
  bool raw_baseline = false;
  std::string sweep_param;
  bool retrain = false;
};

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig cfg = f.config_path.empty() ? RunConfig{}
                                        : load_run_config(f.config_path);
  if (f.seed) cfg.train.seed = *f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.epochs) cfg.train.epochs = *f.epochs;
  AblationFlags& a = cfg.train.ablation;
  a.no_spectral = a.no_spectral || f.no_spectral;
  a.symmetric_encoder = a.symmetric_encoder || f.symmetric_encoder;
  a.no_upper = a.no_upper || f.no_upper;
  a.no_lower = a.no_lower || f.no_lower;
  cfg.train.raw_diffusion = cfg.train.raw_diffusion || f.raw_diffusion;
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + cfg.out);
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const RunConfig& cfg, const std::vector<std::string>& args) {
  json m;
  m["artifact"] = "asgcl";
  m["version"] = kArtifactVersion;
  m["command"] = command;
  m["seed"] = cfg.train.seed;
  m["args"] = args;
  m["config"] = to_json(cfg);
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

std::string csv_of(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

std::string delta_pairs_csv(const FlipProbability& d) {
  std::ostringstream s;
  s << "i,j,probability\n";
  const Matrix& m = d.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) s << i << ',' << j << ',' << format_real(m(i, j)) << '\n';
    }
  }
  return s.str();
}

json aggregate_record(const std::string& source, const std::string& task,
                      const std::string& metric, const std::string& dataset,
                      const Aggregate& a) {
  return {{"source", source},       {"task", task},
          {"metric", metric},       {"dataset", dataset},
          {"seed_count", a.per_seed.size()},
          {"mean", a.mean},         {"std", a.std},
          {"per_seed", a.per_seed}};
}

void append_report(json& records, const std::string& source,
                   const std::string& dataset, const MetricReport& r) {
  const std::string task = to_string(r.task);
  if (r.task == Task::kClassification) {
    records.push_back(aggregate_record(source, task, "accuracy", dataset, r.accuracy));
  } else {
    records.push_back(aggregate_record(source, task, "acc", dataset, r.accuracy));
    records.push_back(aggregate_record(source, task, "nmi", dataset, r.nmi));
    records.push_back(aggregate_record(source, task, "ari", dataset, r.ari));
    records.push_back(aggregate_record(source, task, "fscore", dataset, r.fscore));
  }
}

std::string metrics_csv(const json& records) {
  std::ostringstream s;
  s << "source,task,metric,dataset,seed_count,mean,std\n";
  for (const json& r : records) {
    s << r["source"].get<std::string>() << ',' << r["task"].get<std::string>()
      << ',' << r["metric"].get<std::string>() << ','
      << r["dataset"].get<std::string>() << ',' << r["seed_count"].get<size_t>()
      << ',' << format_real(r["mean"].get<double>()) << ','
      << format_real(r["std"].get<double>()) << '\n';
  }
  return s.str();
}

// ---- subcommands ------------------------------------------------------------

void cmd_augment(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  Graph g = load_dataset(cfg.dataset);
  AugmentOptions opts;
  opts.rounds = cfg.train.augment_rounds;
  opts.step = cfg.train.augment_step;
  opts.noise = cfg.train.augment_noise;
  Rng rng(cfg.train.seed);
  for (int view = 1; view <= 2; ++view) {
    opts.budget = view == 1 ? cfg.train.view1_budget() : cfg.train.view2_budget();
    Rng view_rng(rng.fork_seed());
    AugmentResult r = optimize_delta(g, opts, view_rng);
    const std::string tag = "view" + std::to_string(view);
    write_text_file(dir / ("augment_" + tag + ".csv"), csv_of([&](std::ostream& s) {
                      write_trajectory_csv(s, r.trajectory);
                    }));
    write_text_file(dir / ("delta_" + tag + ".csv"), delta_pairs_csv(r.delta));
    out << tag << ": budget " << format_real(opts.budget) << ", spectral loss "
        << format_real(r.trajectory.front().loss) << " -> "
        << format_real(r.trajectory.back().loss) << ", nnz "
        << r.delta.nonzeros() << '\n';
  }
}

void cmd_train(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  Graph g = load_dataset(cfg.dataset);
  FitResult fitted = fit(g, cfg.train);
  write_text_file(dir / "training_log.csv", csv_of([&](std::ostream& s) {
                    write_training_log(s, fitted.log);
                  }));
  if (!cfg.train.ablation.no_spectral) {
    write_text_file(dir / "augment_view1.csv", csv_of([&](std::ostream& s) {
                      write_trajectory_csv(s, fitted.trajectory1);
                    }));
    write_text_file(dir / "augment_view2.csv", csv_of([&](std::ostream& s) {
                      write_trajectory_csv(s, fitted.trajectory2);
                    }));
  }
  json stored = to_json(cfg);
  stored.erase("out");
  Checkpoint ckpt{fitted.weights, fitted.adam, stored.dump(), cfg.train.seed};
  write_checkpoint(dir / "checkpoint.bin", ckpt);
  out << "trained " << fitted.log.size() << " epochs";
  if (!fitted.log.empty()) {
    out << ", final total loss " << format_real(fitted.log.back().total);
  }
  out << '\n';
}

void cmd_eval(const RunConfig& cfg, const CommandFlags& flags,
              const fs::path& dir, std::ostream& out) {
  Graph g = load_dataset(cfg.dataset);
  if (!g.has_labels()) throw DataError("evaluation needs node labels");
  const fs::path ckpt_path =
      flags.checkpoint.empty() ? dir / "checkpoint.bin" : fs::path(flags.checkpoint);
  Checkpoint ckpt = read_checkpoint(ckpt_path);
  if (ckpt.weights.input_dim() != g.num_features()) {
    throw DataError("checkpoint expects " +
                    std::to_string(ckpt.weights.input_dim()) +
                    " features but the dataset has " +
                    std::to_string(g.num_features()));
  }
  const std::string task = flags.task.empty() ? cfg.eval.task : flags.task;
  std::vector<Task> tasks;
  if (task == "classification" || task == "both") tasks.push_back(Task::kClassification);
  if (task == "clustering" || task == "both") tasks.push_back(Task::kClustering);
  if (tasks.empty()) throw UsageError("--task must be classification, clustering or both");

  json records = json::array();
  const bool self_loops = !cfg.train.raw_diffusion;
  for (Task t : tasks) {
    MetricReport r = evaluate(g, ckpt.weights, t, cfg.eval.seeds, self_loops);
    append_report(records, "encoder", cfg.dataset.name, r);
    if (cfg.eval.raw_baseline || flags.raw_baseline) {
      MetricReport raw =
          evaluate_embeddings(g.features(), *g.labels(), t, cfg.eval.seeds);
      append_report(records, "raw_features", cfg.dataset.name, raw);
    }
  }
  write_text_file(dir / "metrics.json", records.dump(2) + "\n");
  const std::string csv = metrics_csv(records);
  write_text_file(dir / "metrics.csv", csv);
  out << csv;
}

void cmd_spectra(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  Graph g = load_dataset(cfg.dataset);
  AugmentOptions opts;
  opts.rounds = cfg.train.augment_rounds;
  opts.step = cfg.train.augment_step;
  opts.noise = cfg.train.augment_noise;
  std::vector<SpectraRun> runs = spectra_runs(g, cfg.spectra.budgets,
                                              cfg.spectra.seeds, opts,
                                              cfg.train.seed);
  std::vector<SpectraSummary> rows = summarize_spectra(runs);
  const std::string csv =
      csv_of([&](std::ostream& s) { write_spectra_csv(s, rows); });
  write_text_file(dir / "spectra.csv", csv);
  write_text_file(dir / "spectra_runs.csv", csv_of([&](std::ostream& s) {
                    write_spectra_runs_csv(s, runs);
                  }));
  out << csv;
}

void cmd_robustness(RunConfig cfg, const CommandFlags& flags,
                    const fs::path& dir, std::ostream& out) {
  if (flags.retrain) cfg.robustness.retrain = true;
  Graph g = load_dataset(cfg.dataset);
  if (!g.has_labels()) throw DataError("robustness needs node labels");
  std::vector<RobustnessRow> rows = robustness_sweep(g, cfg);
  const std::string csv =
      csv_of([&](std::ostream& s) { write_robustness_csv(s, rows); });
  write_text_file(dir / "robustness.csv", csv);
  out << csv;
}

void cmd_sweep(const RunConfig& cfg, const CommandFlags& flags,
               const fs::path& dir, std::ostream& out) {
  const SweepParam param = parse_sweep_param(flags.sweep_param);
  Graph g = load_dataset(cfg.dataset);
  if (!g.has_labels()) throw DataError("sweep needs node labels");
  std::vector<SweepRow> rows = parameter_sweep(g, cfg, param);
  const std::string csv = csv_of([&](std::ostream& s) { write_sweep_csv(s, rows); });
  write_text_file(dir / ("sweep_" + flags.sweep_param + ".csv"), csv);
  out << csv;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Spectral-augmented asymmetric graph contrastive learning",
               "asgcl"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags common;
  CommandFlags flags;
  app.add_option("--config", common.config_path, "JSON run configuration");
  app.add_option("--seed", common.seed, "Run seed (overrides train.seed)");
  app.add_option("--out", common.out, "Output directory");
  app.add_option("--epochs", common.epochs, "Override train.epochs");
  app.add_flag("--no-spectral", common.no_spectral,
               "Uniform flip probabilities instead of the optimized ones");
  app.add_flag("--symmetric-encoder", common.symmetric_encoder,
               "Use k = 0 (no extra diffusion on view 2)");
  app.add_flag("--no-upper", common.no_upper, "Drop the upper-bound loss");
  app.add_flag("--no-lower", common.no_lower, "Drop the lower-bound loss");
  app.add_flag("--raw-diffusion", common.raw_diffusion,
               "Propagate with D^-1/2 A D^-1/2 (no self-loops)");
  app.add_flag("-v,--verbose", common.verbose, "Log progress to stderr");

  auto* augment = app.add_subcommand(
      "augment", "Optimize flip probabilities and write the loss trajectory");
  auto* train = app.add_subcommand("train", "Train the encoder; write checkpoint and log");
  auto* eval = app.add_subcommand("eval", "Classification/clustering metrics from a checkpoint");
  eval->add_option("--checkpoint", flags.checkpoint,
                   "Checkpoint path (default <out>/checkpoint.bin)");
  eval->add_option("--task", flags.task, "classification | clustering | both");
  eval->add_flag("--raw-baseline", flags.raw_baseline,
                 "Also score the raw feature matrix");
  auto* spectra = app.add_subcommand(
      "spectra", "Laplacian Frobenius distance: optimized vs random augmentation");
  auto* robustness = app.add_subcommand(
      "robustness", "Accuracy under edge deletion and feature masking");
  robustness->add_flag("--retrain", flags.retrain,
                       "Retrain on every perturbed graph instead of re-embedding");
  auto* sweep = app.add_subcommand("sweep", "Accuracy over a parameter grid");
  sweep->add_option("--param", flags.sweep_param, "epsilon | k | alpha-beta")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const LogLevel previous = log_level();
  if (common.verbose) set_log_level(LogLevel::kInfo);
  int code = kExitOk;
  try {
    RunConfig cfg = resolve_config(common);
    const fs::path dir = prepare_out(cfg);
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    write_manifest(dir, name, cfg, args);
    if (cmd == augment) {
      cmd_augment(cfg, dir, out);
    } else if (cmd == train) {
      cmd_train(cfg, dir, out);
    } else if (cmd == eval) {
      cmd_eval(cfg, flags, dir, out);
    } else if (cmd == spectra) {
      cmd_spectra(cfg, dir, out);
    } else if (cmd == robustness) {
      cmd_robustness(cfg, flags, dir, out);
    } else if (cmd == sweep) {
      cmd_sweep(cfg, flags, dir, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    code = kExitData;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    code = kExitNumeric;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    code = kExitInternal;
  }
  set_log_level(previous);
  return code;
}

}  // namespace asgcl
