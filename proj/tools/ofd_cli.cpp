#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ofd/ofd.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string phase;
  std::string platform;
  std::string out_dir;
  std::string grid;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool phased) {
  cmd->add_option("--config", o.config, "Pipeline configuration file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
  if (phased) {
    cmd->add_option("--phase", o.phase, "Phase: 1, 2 or both");
    cmd->add_option("--platform", o.platform, "Platform: zomato, swiggy or both");
    cmd->add_option("--grid", o.grid, "Hyperparameter grid: full, coarse or a JSON file");
    cmd->add_option("--jobs", o.jobs, "Parallel tuner trials");
  }
}

ofd::PipelineConfig resolve(const CommonOptions& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config.empty()) {
    try {
      j = nlohmann::json::parse(ofd::read_file(o.config));
    } catch (const nlohmann::json::exception& e) {
      throw ofd::ConfigError(o.config + ": " + e.what());
    }
  }
  if (o.seed) j["seed"] = *o.seed;
  if (!o.out_dir.empty()) j["out_dir"] = o.out_dir;
  if (!o.phase.empty()) {
    j.erase("phases");
    j["phase"] = o.phase;
  }
  if (!o.platform.empty()) {
    j.erase("platforms");
    j["platform"] = o.platform;
  }
  if (!o.grid.empty()) j["grid"] = o.grid;
  if (o.jobs) j["jobs"] = *o.jobs;
  return ofd::pipeline_config_from_json(j);
}

void log_line(const std::string& s) { std::clog << s << std::endl; }

void print_summary(const ofd::PipelineSummary& s) {
  for (const auto& m : s.metrics)
    std::cout << "phase " << m.phase << " " << m.platform << ": RMSE=" << m.rmse << " MAE=" << m.mae
              << " R2=" << m.r2 << "\n";
  for (const auto& [phase, rep] : s.bullwhip)
    for (const char* scope : ofd::kScopes) {
      std::cout << "phase " << phase << " B[" << scope << "]:";
      for (const char* seg : ofd::kSegments) std::cout << " " << seg << "=" << rep.get(seg, scope).b;
      std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online food delivery demand simulation, forecasting and inventory analysis"};
  app.set_version_flag("--version", std::string(OFD_VERSION));
  app.require_subcommand(1);

  CommonOptions sim_o, eda_o, tune_o, train_o, bw_o, pipe_o;
  auto* sim = app.add_subcommand("simulate", "Generate the synthetic demand dataset");
  add_common(sim, sim_o, false);
  auto* eda = app.add_subcommand("eda", "Exploratory statistics of the dataset");
  add_common(eda, eda_o, false);
  auto* tune = app.add_subcommand("tune", "Grid-search LSTM hyperparameters");
  add_common(tune, tune_o, true);
  auto* trn = app.add_subcommand("train", "Train the best configuration and evaluate on the test split");
  add_common(trn, train_o, true);
  auto* bw = app.add_subcommand("bullwhip", "Inventory plans and bullwhip report from trained models");
  add_common(bw, bw_o, true);
  auto* pipe = app.add_subcommand("pipeline", "Run every stage end to end");
  add_common(pipe, pipe_o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed()) {
      const auto cfg = resolve(sim_o);
      ofd::record_stage(cfg, "simulate", ofd::cmd_simulate(cfg, log_line));
    } else if (eda->parsed()) {
      const auto cfg = resolve(eda_o);
      ofd::record_stage(cfg, "eda", ofd::cmd_eda(cfg, log_line));
    } else if (tune->parsed()) {
      const auto cfg = resolve(tune_o);
      for (int p : cfg.phases)
        ofd::record_stage(cfg, "tune/phase" + std::to_string(p), ofd::cmd_tune(cfg, p, log_line));
    } else if (trn->parsed()) {
      const auto cfg = resolve(train_o);
      for (int p : cfg.phases)
        ofd::record_stage(cfg, "train/phase" + std::to_string(p), ofd::cmd_train_eval(cfg, p, log_line));
    } else if (bw->parsed()) {
      const auto cfg = resolve(bw_o);
      for (int p : cfg.phases)
        ofd::record_stage(cfg, "bullwhip/phase" + std::to_string(p), ofd::cmd_bullwhip(cfg, p, log_line));
    } else if (pipe->parsed()) {
      const auto cfg = resolve(pipe_o);
      print_summary(ofd::cmd_pipeline(cfg, log_line));
    }
  } catch (const ofd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ofd::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const ofd::TrainingError& e) {
    std::cerr << "training error (epoch " << e.epoch() << ", batch " << e.batch() << "): " << e.what()
              << "\n";
    return 4;
  } catch (const ofd::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
