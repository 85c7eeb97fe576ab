#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofd/core/error.hpp"
#include "ofd/lstm/train.hpp"

namespace ofd {

struct HyperGrid {
  std::vector<int> epochs;
  std::vector<int> units;
  std::vector<int> batch_size;
  std::vector<double> dropout;
  std::vector<double> learning_rate;
  std::vector<int> layers;

  static HyperGrid full() {
    return {{50, 100, 200}, {32, 64, 128}, {16, 32, 64},
            {0.1, 0.3, 0.5}, {0.001, 0.005, 0.01}, {1, 2, 3}};
  }
  // Two values per axis.
  static HyperGrid coarse() {
    return {{50, 100}, {32, 64}, {16, 64}, {0.1, 0.3}, {0.001, 0.01}, {1, 2}};
  }
  static HyperGrid single(const HyperParams& h) {
    return {{h.epochs}, {h.units}, {h.batch_size}, {h.dropout}, {h.learning_rate}, {h.layers}};
  }

  std::size_t cardinality() const {
    return epochs.size() * units.size() * batch_size.size() * dropout.size() *
           learning_rate.size() * layers.size();
  }
};

inline void to_json(nlohmann::json& j, const HyperGrid& g) {
  j = {{"epochs", g.epochs},   {"units", g.units},
       {"batch_size", g.batch_size}, {"dropout", g.dropout},
       {"learning_rate", g.learning_rate}, {"layers", g.layers}};
}
inline void from_json(const nlohmann::json& j, HyperGrid& g) {
  g.epochs = j.at("epochs").get<std::vector<int>>();
  g.units = j.at("units").get<std::vector<int>>();
  g.batch_size = j.at("batch_size").get<std::vector<int>>();
  g.dropout = j.at("dropout").get<std::vector<double>>();
  g.learning_rate = j.at("learning_rate").get<std::vector<double>>();
  g.layers = j.at("layers").get<std::vector<int>>();
}

// Cartesian product in lexicographic order over (epochs, units, batch_size,
// dropout, learning_rate, layers); the last axis varies fastest.
inline std::vector<HyperParams> enumerate_grid(const HyperGrid& g) {
  if (g.epochs.empty() || g.units.empty() || g.batch_size.empty() || g.dropout.empty() ||
      g.learning_rate.empty() || g.layers.empty())
    throw ConfigError("hyperparameter grid: every axis needs at least one value");
  std::vector<HyperParams> out;
  out.reserve(g.cardinality());
  for (int e : g.epochs)
    for (int u : g.units)
      for (int b : g.batch_size)
        for (double d : g.dropout)
          for (double lr : g.learning_rate)
            for (int l : g.layers) {
              HyperParams h{e, u, b, d, lr, l};
              validate(h);
              out.push_back(h);
            }
  return out;
}

inline void validate(const HyperGrid& g) {
  for (const auto& h : enumerate_grid(g))
    if (!within_search_ranges(h))
      throw ConfigError("hyperparameter grid: a value lies outside the search ranges");
}

struct TrialResult {
  std::size_t index = 0;
  HyperParams hyperparams;
  double final_val_loss = std::numeric_limits<double>::infinity();
  std::vector<double> val_curve;
  std::vector<double> train_curve;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  bool diverged = false;
  std::string error;
};

struct GridSearchResult {
  std::size_t best_index = 0;
  HyperParams best;
  std::vector<TrialResult> trials;  // ordered by trial index
};

struct GridSearchOptions {
  // Order in which trials are executed; empty means enumeration order.
  std::vector<std::size_t> execution_order;
  int jobs = 1;
  TrainOptions train_options;
  std::function<void(const TrialResult&)> on_trial;
};

inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t index) {
  return base_seed ^ static_cast<std::uint64_t>(index);
}

// Minimum final validation loss; ties go to fewer layers, then fewer units,
// then the earlier trial index.
inline std::size_t select_best(const std::vector<TrialResult>& trials) {
  std::size_t best = trials.size();
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    if (t.diverged || !std::isfinite(t.final_val_loss)) continue;
    if (best == trials.size()) {
      best = i;
      continue;
    }
    const auto& b = trials[best];
    const auto key = [](const TrialResult& r) {
      return std::make_tuple(r.final_val_loss, r.hyperparams.layers, r.hyperparams.units, r.index);
    };
    if (key(t) < key(b)) best = i;
  }
  if (best == trials.size()) throw TrainingError("grid search: every trial diverged", 0, 0);
  return best;
}

inline TrialResult run_trial(const WindowedDataset& train_set, const WindowedDataset& val_set,
                             const HyperParams& hp, std::size_t index, std::uint64_t base_seed,
                             const TrainOptions& opt) {
  TrialResult r;
  r.index = index;
  r.hyperparams = hp;
  r.seed = trial_seed(base_seed, index);
  try {
    auto res = train(train_set, val_set, hp, r.seed, opt);
    r.val_curve = std::move(res.report.val_loss);
    r.train_curve = std::move(res.report.train_loss);
    r.seconds = res.report.seconds;
    r.final_val_loss = r.val_curve.empty() ? std::numeric_limits<double>::infinity() : r.val_curve.back();
  } catch (const TrainingError& e) {
    r.diverged = true;
    r.error = e.what();
  }
  return r;
}

inline GridSearchResult grid_search(const WindowedDataset& train_set,
                                    const WindowedDataset& val_set, const HyperGrid& grid,
                                    std::uint64_t base_seed, const GridSearchOptions& opt = {}) {
  if (train_set.samples() == 0 || val_set.samples() == 0)
    throw DataError("grid search: empty training or validation split");
  const auto combos = enumerate_grid(grid);
  std::vector<std::size_t> order = opt.execution_order;
  if (order.empty()) {
    order.resize(combos.size());
    std::iota(order.begin(), order.end(), 0);
  }
  {
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i)
      if (check.size() != combos.size() || check[i] != i)
        throw ConfigError("grid search: execution order must be a permutation of trial indices");
  }

  GridSearchResult out;
  out.trials.resize(combos.size());
  std::mutex mu;
  auto run = [&](std::size_t idx) {
    auto r = run_trial(train_set, val_set, combos[idx], idx, base_seed, opt.train_options);
    std::lock_guard<std::mutex> lock(mu);
    if (opt.on_trial) opt.on_trial(r);
    out.trials[idx] = std::move(r);
  };
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    for (std::size_t idx : order) run(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < order.size();) run(order[k]);
      });
    for (auto& t : pool) t.join();
  }
  out.best_index = select_best(out.trials);
  out.best = out.trials[out.best_index].hyperparams;
  return out;
}

// One trials-log record. Wall-clock time is deliberately left out so the log
// is byte-identical across reruns; timings go to a separate file.
inline nlohmann::json trial_to_json(const TrialResult& t) {
  return {{"index", t.index},
          {"seed", t.seed},
          {"hyperparams", t.hyperparams},
          {"diverged", t.diverged},
          {"final_val_loss", t.diverged ? nlohmann::json(nullptr) : nlohmann::json(t.final_val_loss)},
          {"val_loss", t.val_curve},
          {"train_loss", t.train_curve},
          {"error", t.error}};
}

}  // namespace ofd
