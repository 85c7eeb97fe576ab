#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofd/core/checksum.hpp"
#include "ofd/core/error.hpp"
#include "ofd/core/rng.hpp"
#include "ofd/core/text.hpp"
#include "ofd/preprocess/features.hpp"
#include "ofd/sim/config.hpp"
#include "ofd/tuner/grid_search.hpp"

namespace ofd {

struct InventorySettings {
  double z_score = 1.96;
  int window_days = 7;             // trailing window of the historical plans
  int phase1_error_window_days = 7;   // forecast-error window, 5-time-lstm plan
  int phase2_error_window_days = 28;  // forecast-error window, daily-lstm plan
  int share_window_days = 7;       // trailing window of the platform demand share
};

struct PipelinePaths {
  std::string dataset = "dataset.csv";
  std::string models = "models";
  std::string reports = "reports";
  std::string trials = "trials";
};

struct PipelineConfig {
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";
  PipelinePaths paths;
  SimConfig simulation = SimConfig::defaults();
  bool simulation_seed_explicit = false;
  SplitSpec split;
  std::string grid_name = "coarse";  // coarse | full | custom
  HyperGrid grid = HyperGrid::coarse();
  std::optional<HyperParams> fixed_hyperparams;
  std::vector<int> phases{1, 2};
  std::vector<Platform> platforms{Platform::Zomato, Platform::Swiggy};
  int phase1_window_days = 1;
  FeatureSchema features;
  InventorySettings inventory;
  int jobs = 1;

  std::filesystem::path dataset_path() const { return out_dir / paths.dataset; }
  std::filesystem::path models_dir() const { return out_dir / paths.models; }
  std::filesystem::path reports_dir() const { return out_dir / paths.reports; }
  std::filesystem::path trials_dir() const { return out_dir / paths.trials; }

  // The simulation config with the seed derived from the master seed, unless
  // the config file pinned simulation.seed.
  SimConfig resolved_simulation() const {
    SimConfig s = simulation;
    if (!simulation_seed_explicit) s.seed = derive_seed(seed, "simulate");
    return s;
  }

  std::uint64_t stage_seed(const std::string& stage) const { return derive_seed(seed, stage); }
};

inline std::vector<int> parse_phase_selection(const std::string& s) {
  if (s == "1") return {1};
  if (s == "2") return {2};
  if (s == "both") return {1, 2};
  throw ConfigError("phase: expected 1, 2 or both, got '" + s + "'");
}

inline std::vector<Platform> parse_platform_selection(const std::string& s) {
  const std::string l = lower(s);
  if (l == "both" || l == "all") return {Platform::Zomato, Platform::Swiggy};
  try {
    return {parse_platform(l)};
  } catch (const DataError&) {
    throw ConfigError("platform: expected zomato, swiggy or both, got '" + s + "'");
  }
}

// Reads a grid given as a preset name or a JSON file path.
inline HyperGrid grid_from_spec(const std::string& spec, std::string* name = nullptr) {
  if (spec == "coarse") {
    if (name) *name = "coarse";
    return HyperGrid::coarse();
  }
  if (spec == "full") {
    if (name) *name = "full";
    return HyperGrid::full();
  }
  try {
    HyperGrid g = nlohmann::json::parse(read_file(spec)).get<HyperGrid>();
    validate(g);
    if (name) *name = "custom";
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("grid file " + spec + ": " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

inline nlohmann::json to_json(const FeatureSchema& s) {
  return {{"numeric_features", s.numeric_features}, {"one_hot_features", s.one_hot_features},
          {"ordinal_features", s.ordinal_features}, {"binary_features", s.binary_features},
          {"target", s.target},                     {"target_history", s.target_history},
          {"target_day_covariates", s.target_day_covariates}};
}

inline nlohmann::json to_json(const PipelineConfig& c) {
  using nlohmann::json;
  json plats = json::array();
  for (auto p : c.platforms) plats.push_back(lower(to_string(p)));
  json j = {{"seed", c.seed},
            {"out_dir", c.out_dir.string()},
            {"paths",
             {{"dataset", c.paths.dataset},
              {"models", c.paths.models},
              {"reports", c.paths.reports},
              {"trials", c.paths.trials}}},
            {"simulation", to_json(c.resolved_simulation())},
            {"split",
             {{"train_fraction", c.split.train_fraction},
              {"validation_fraction", c.split.validation_fraction},
              {"test_fraction", c.split.test_fraction}}},
            {"grid_name", c.grid_name},
            {"grid", c.grid},
            {"hyperparams", c.fixed_hyperparams ? json(*c.fixed_hyperparams) : json(nullptr)},
            {"phases", c.phases},
            {"platforms", plats},
            {"phase1_window_days", c.phase1_window_days},
            {"features", to_json(c.features)},
            {"inventory",
             {{"z_score", c.inventory.z_score},
              {"window_days", c.inventory.window_days},
              {"phase1_error_window_days", c.inventory.phase1_error_window_days},
              {"phase2_error_window_days", c.inventory.phase2_error_window_days},
              {"share_window_days", c.inventory.share_window_days}}},
            {"jobs", c.jobs}};
  return j;
}

inline void validate(const PipelineConfig& c) {
  validate(c.resolved_simulation());
  validate(c.split);
  validate(c.features);
  validate(c.grid);
  if (c.fixed_hyperparams) validate(*c.fixed_hyperparams);
  if (c.phases.empty()) throw ConfigError("phases: at least one phase required");
  for (int p : c.phases)
    if (p != 1 && p != 2) throw ConfigError("phases: entries must be 1 or 2");
  if (c.platforms.empty()) throw ConfigError("platforms: at least one platform required");
  if (c.phase1_window_days < 1) throw ConfigError("phase1_window_days: must be >= 1");
  const auto& inv = c.inventory;
  if (!(inv.z_score > 0.0)) throw ConfigError("inventory.z_score: must be > 0");
  if (inv.window_days < 2) throw ConfigError("inventory.window_days: must be >= 2");
  if (inv.phase1_error_window_days < 1 || inv.phase2_error_window_days < 1)
    throw ConfigError("inventory: error windows must be >= 1 day");
  if (inv.share_window_days < 1) throw ConfigError("inventory.share_window_days: must be >= 1");
  if (c.jobs < 1) throw ConfigError("jobs: must be >= 1");
}

// Builds a config from defaults plus a (partial) JSON document. Unknown keys
// are rejected with their full path.
inline PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  static const std::vector<std::string> top = {
      "seed", "out_dir", "paths", "simulation", "split", "grid", "grid_name", "hyperparams", "phases",
      "phase", "platforms", "platform", "phase1_window_days", "features", "inventory", "jobs"};
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(top.begin(), top.end(), it.key()) == top.end())
      throw ConfigError(it.key() + ": unknown configuration key");
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      for (auto it = p.begin(); it != p.end(); ++it) {
        const auto v = it.value().get<std::string>();
        if (it.key() == "dataset") c.paths.dataset = v;
        else if (it.key() == "models") c.paths.models = v;
        else if (it.key() == "reports") c.paths.reports = v;
        else if (it.key() == "trials") c.paths.trials = v;
        else throw ConfigError("paths." + it.key() + ": unknown configuration key");
      }
    }
    if (j.contains("simulation")) {
      const auto& s = j.at("simulation");
      c.simulation = apply_overrides(SimConfig::defaults(), s);
      c.simulation_seed_explicit = s.contains("seed");
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      for (auto it = s.begin(); it != s.end(); ++it) {
        const double v = it.value().get<double>();
        if (it.key() == "train_fraction") c.split.train_fraction = v;
        else if (it.key() == "validation_fraction") c.split.validation_fraction = v;
        else if (it.key() == "test_fraction") c.split.test_fraction = v;
        else throw ConfigError("split." + it.key() + ": unknown configuration key");
      }
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.is_string()) {
        c.grid = grid_from_spec(g.get<std::string>(), &c.grid_name);
      } else {
        c.grid = g.get<HyperGrid>();
        c.grid_name = j.value("grid_name", std::string("custom"));
      }
    }
    if (j.contains("hyperparams") && !j.at("hyperparams").is_null())
      c.fixed_hyperparams = j.at("hyperparams").get<HyperParams>();
    if (j.contains("phases")) c.phases = j.at("phases").get<std::vector<int>>();
    if (j.contains("phase")) c.phases = parse_phase_selection(j.at("phase").get<std::string>());
    if (j.contains("platforms")) {
      c.platforms.clear();
      for (const auto& p : j.at("platforms"))
        for (Platform q : parse_platform_selection(p.get<std::string>())) c.platforms.push_back(q);
    }
    if (j.contains("platform"))
      c.platforms = parse_platform_selection(j.at("platform").get<std::string>());
    if (j.contains("phase1_window_days")) c.phase1_window_days = j.at("phase1_window_days").get<int>();
    if (j.contains("features")) {
      const auto& f = j.at("features");
      for (auto it = f.begin(); it != f.end(); ++it) {
        const auto& k = it.key();
        if (k == "numeric_features") c.features.numeric_features = it.value().get<std::vector<std::string>>();
        else if (k == "one_hot_features") c.features.one_hot_features = it.value().get<std::vector<std::string>>();
        else if (k == "ordinal_features") c.features.ordinal_features = it.value().get<std::vector<std::string>>();
        else if (k == "binary_features") c.features.binary_features = it.value().get<std::vector<std::string>>();
        else if (k == "target") c.features.target = it.value().get<std::string>();
        else if (k == "target_history") c.features.target_history = it.value().get<bool>();
        else if (k == "target_day_covariates") c.features.target_day_covariates = it.value().get<bool>();
        else throw ConfigError("features." + k + ": unknown configuration key");
      }
    }
    c.inventory.z_score = c.simulation.z_score;
    if (j.contains("inventory")) {
      const auto& inv = j.at("inventory");
      for (auto it = inv.begin(); it != inv.end(); ++it) {
        const auto& k = it.key();
        if (k == "z_score") c.inventory.z_score = it.value().get<double>();
        else if (k == "window_days") c.inventory.window_days = it.value().get<int>();
        else if (k == "phase1_error_window_days") c.inventory.phase1_error_window_days = it.value().get<int>();
        else if (k == "phase2_error_window_days") c.inventory.phase2_error_window_days = it.value().get<int>();
        else if (k == "share_window_days") c.inventory.share_window_days = it.value().get<int>();
        else throw ConfigError("inventory." + k + ": unknown configuration key");
      }
    }
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

inline PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return pipeline_config_from_json(j);
}

// SHA-256 of the canonical (sorted-key, compact) resolved configuration.
inline std::string config_hash(const PipelineConfig& c) { return sha256_hex(to_json(c).dump()); }

}  // namespace ofd
