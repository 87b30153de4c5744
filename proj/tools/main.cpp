// Copyright 2026 The snn2ann Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: train / eval / compare / report.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snn2ann/checkpoint.hpp"
#include "snn2ann/experiment.hpp"
#include "snn2ann/kernels.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string trainer;
  int64_t steps = -1;
  int64_t epochs = -1;
  int64_t seed = -1;
  std::string out;
  bool no_ata = false;
};

void add_common(CLI::App* cmd, CommonFlags* f) {
  cmd->add_option("--config", f->config_path, "experiment config file");
  cmd->add_option("--trainer", f->trainer,
                  "trainer: s2a-resu, s2a-stsu or stbp");
  cmd->add_option("--steps", f->steps, "time window T");
  cmd->add_option("--epochs", f->epochs, "training epochs");
  cmd->add_option("--seed", f->seed, "master seed");
  cmd->add_option("--out", f->out, "output directory");
  cmd->add_flag("--no-ata", f->no_ata, "disable adaptive threshold growth");
}

s2a::ExperimentConfig load_config(const CommonFlags& f) {
  std::string path = f.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SNN2ANN_CONFIG")) path = env;
  }
  s2a::ExperimentConfig cfg = path.empty()
                                  ? s2a::ExperimentConfig{}
                                  : s2a::ExperimentConfig::parse_file(path);
  cfg.apply_env();
  if (!f.trainer.empty()) cfg.train.trainer = s2a::trainer_from_name(f.trainer);
  if (f.steps > 0) cfg.train.time_steps = f.steps;
  if (f.epochs > 0) cfg.train.epochs = f.epochs;
  if (f.seed >= 0) cfg.train.seed = uint64_t(f.seed);
  if (!f.out.empty()) cfg.output.dir = f.out;
  if (f.no_ata) cfg.train.ata_enabled = false;
  return cfg;
}

std::string full(double v) {
  std::ostringstream oss;
  oss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return oss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os.good()) throw s2a::Error("cannot write '" + path.string() + "'");
  os << text;
}

void write_thresholds_csv(const fs::path& path,
                          const std::vector<std::vector<float>>& traj) {
  std::ostringstream oss;
  oss << "iteration,layer,vth\n";
  for (size_t it = 0; it < traj.size(); ++it) {
    for (size_t l = 0; l < traj[it].size(); ++l) {
      oss << it + 1 << "," << l + 1 << "," << full(traj[it][l]) << "\n";
    }
  }
  write_file(path, oss.str());
}

void emit_run_outputs(const fs::path& dir, const s2a::ExperimentConfig& cfg,
                      const s2a::RunArtifacts& art, const s2a::Network& net,
                      const std::string& log_text) {
  fs::create_directories(dir);
  write_file(dir / "effective.cfg", cfg.to_text());
  write_file(dir / "metrics.csv", art.metrics.to_csv());
  write_file(dir / "metrics.json", art.metrics.to_json());
  write_thresholds_csv(dir / "thresholds.csv", art.metrics.vth_trajectory);
  write_file(dir / "run.log", log_text);
  s2a::checkpoint_save(net, cfg.to_text(), (dir / "checkpoint.s2a").string());
}

int cmd_train(const CommonFlags& flags) {
  s2a::ExperimentConfig cfg = load_config(flags);
  std::ostringstream log;
  log << "trainer=" << s2a::trainer_name(cfg.train.trainer)
      << " kernels=" << s2a::kernels().name << " seed=" << cfg.train.seed
      << "\n";
  s2a::Experiment exp(cfg);
  s2a::RunArtifacts art = exp.run(&log);
  emit_run_outputs(cfg.output.dir, cfg, art, exp.net(), log.str());
  std::cout << log.str();
  std::cout << "accuracy=" << full(art.final_accuracy) << "\n";
  std::cout << "outputs written to " << cfg.output.dir << "\n";
  return 0;
}

int cmd_eval(const CommonFlags& flags, const std::string& checkpoint_path) {
  s2a::ExperimentConfig cfg = load_config(flags);
  fs::path ckpt = checkpoint_path.empty()
                      ? fs::path(cfg.output.dir) / "checkpoint.s2a"
                      : fs::path(checkpoint_path);
  s2a::Checkpoint loaded = s2a::checkpoint_load(ckpt.string());
  // The trainer kind that produced the model travels with the checkpoint;
  // evaluating an stbp model through the folded path would be wrong.
  s2a::TrainerKind kind = cfg.train.trainer;
  if (!loaded.config_text.empty()) {
    try {
      kind =
          s2a::ExperimentConfig::parse_text(loaded.config_text).train.trainer;
    } catch (const s2a::Error&) {
      // Foreign config block; fall back to the CLI-provided trainer.
    }
  }
  s2a::Dataset full_set = s2a::build_dataset(cfg);
  auto parts = full_set.split(cfg.dataset.train_fraction);
  s2a::MetricsReport report = s2a::evaluate_model(
      loaded.net, kind, loaded.net.spec.time_steps, parts.second,
      cfg.train.batch_size);
  std::cout << "accuracy=" << full(report.accuracy) << "\n";
  std::cout << "spikes_per_image=" << full(report.spikes_per_image_total)
            << "\n";
  std::cout << "energy_ratio=" << full(report.energy_ratio_value) << "\n";
  fs::create_directories(cfg.output.dir);
  write_file(fs::path(cfg.output.dir) / "eval.json", report.to_json());
  return 0;
}

int cmd_compare(const CommonFlags& flags) {
  s2a::ExperimentConfig base = load_config(flags);
  std::vector<s2a::CompareRow> rows;
  const s2a::TrainerKind kinds[] = {
      base.train.trainer == s2a::TrainerKind::kS2AReSU
          ? s2a::TrainerKind::kS2AReSU
          : s2a::TrainerKind::kS2ASTSU,
      s2a::TrainerKind::kStbp};
  for (s2a::TrainerKind kind : kinds) {
    s2a::ExperimentConfig cfg = base;
    cfg.train.trainer = kind;
    std::ostringstream log;
    s2a::Experiment exp(cfg);
    s2a::RunArtifacts art = exp.run(&log);
    s2a::CompareRow row;
    row.trainer = s2a::trainer_name(kind);
    row.accuracy = art.final_accuracy;
    row.steps = cfg.train.time_steps;
    row.spikes_per_image = art.metrics.spikes_per_image_total;
    row.sec_per_epoch = art.sec_per_epoch;
    rows.push_back(row);
  }
  std::cout << s2a::compare_table(rows);
  fs::create_directories(base.output.dir);
  write_file(fs::path(base.output.dir) / "compare.csv",
             s2a::compare_csv(rows));
  return 0;
}

int cmd_report(const CommonFlags& flags) {
  s2a::ExperimentConfig cfg = load_config(flags);
  const fs::path dir(cfg.output.dir);
  std::ifstream is(dir / "metrics.json");
  if (!is.good()) {
    throw s2a::Error("no stored metrics at '" +
                     (dir / "metrics.json").string() + "' (run train first)");
  }
  std::stringstream buf;
  buf << is.rdbuf();
  s2a::MetricsReport report = s2a::MetricsReport::from_json(buf.str());
  std::cout << report.to_csv();
  write_file(dir / "metrics.csv", report.to_csv());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiking-network training via a weight-shared ANN branch"};
  app.require_subcommand(1);

  CommonFlags train_flags, eval_flags, compare_flags, report_flags;
  std::string eval_checkpoint;

  CLI::App* train = app.add_subcommand(
      "train", "train a model and write checkpoint + metrics");
  add_common(train, &train_flags);
  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate a checkpoint: accuracy, spikes, energy");
  add_common(eval, &eval_flags);
  eval->add_option("--checkpoint", eval_checkpoint,
                   "checkpoint path (default <out>/checkpoint.s2a)");
  CLI::App* compare = app.add_subcommand(
      "compare", "run the s2a trainer and the stbp baseline side by side");
  add_common(compare, &compare_flags);
  CLI::App* report =
      app.add_subcommand("report", "re-emit metrics from a stored run");
  add_common(report, &report_flags);

  CLI11_PARSE(app, argc, argv);
  try {
    if (train->parsed()) return cmd_train(train_flags);
    if (eval->parsed()) return cmd_eval(eval_flags, eval_checkpoint);
    if (compare->parsed()) return cmd_compare(compare_flags);
    if (report->parsed()) return cmd_report(report_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
