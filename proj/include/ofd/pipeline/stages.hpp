#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofd/analytics/bullwhip.hpp"
#include "ofd/analytics/eda.hpp"
#include "ofd/analytics/metrics.hpp"
#include "ofd/core/checksum.hpp"
#include "ofd/core/error.hpp"
#include "ofd/core/text.hpp"
#include "ofd/inventory/newsvendor.hpp"
#include "ofd/lstm/model_io.hpp"
#include "ofd/pipeline/config.hpp"
#include "ofd/preprocess/features.hpp"
#include "ofd/sim/dataset.hpp"
#include "ofd/sim/simulation.hpp"
#include "ofd/tuner/grid_search.hpp"

namespace ofd {

#ifndef OFD_VERSION
#define OFD_VERSION "0.0.0"
#endif

using Logger = std::function<void(const std::string&)>;

inline void log_to(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

// A stage failure, tagged with the stage that raised it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Paths written by a stage, relative to the output directory.
struct StageOutput {
  std::vector<std::filesystem::path> artifacts;
  double seconds = 0.0;
  std::map<std::string, double> timings;  // finer-grained wall-clock entries
};

namespace detail {

inline std::string platform_key(Platform p) { return lower(to_string(p)); }

inline std::string tag(int phase, Platform p) {
  return "phase" + std::to_string(phase) + "_" + platform_key(p);
}

inline std::filesystem::path write_artifact(const PipelineConfig& cfg, StageOutput& out,
                                            const std::filesystem::path& path,
                                            const std::string& content) {
  write_file(path, content);
  out.artifacts.push_back(std::filesystem::relative(path, cfg.out_dir));
  return path;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline Dataset load_dataset(const PipelineConfig& cfg) {
  const auto path = cfg.dataset_path();
  if (!std::filesystem::exists(path))
    throw DataError("dataset " + path.string() + " does not exist; run 'simulate' first");
  try {
    return read_dataset_csv(path);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

inline PreparedData prepare_for(const PipelineConfig& cfg, const Dataset& ds, Platform p, int phase) {
  return prepare(ds, p, phase, cfg.split, cfg.features, cfg.phase1_window_days);
}

inline std::filesystem::path best_path(const PipelineConfig& cfg, int phase, Platform p) {
  return cfg.models_dir() / ("best_" + tag(phase, p) + ".json");
}

inline std::filesystem::path model_path(const PipelineConfig& cfg, int phase, Platform p) {
  return cfg.models_dir() / ("model_" + tag(phase, p) + ".json");
}

inline bool same_scaler(const Scaler& a, const Scaler& b) {
  if (a.names != b.names || a.mean.size() != b.mean.size()) return false;
  for (std::size_t i = 0; i < a.mean.size(); ++i)
    if (std::abs(a.mean[i] - b.mean[i]) > 1e-9 * std::max(1.0, std::abs(a.mean[i])) ||
        std::abs(a.sd[i] - b.sd[i]) > 1e-9 * std::max(1.0, std::abs(a.sd[i])))
      return false;
  return true;
}

}  // namespace detail

// Tuning outcome persisted per phase and platform.
struct BestConfig {
  int phase = 1;
  std::string platform;
  HyperParams hyperparams;
  std::size_t trial_index = 0;
  std::uint64_t trial_seed = 0;
  double final_val_loss = 0.0;
  std::size_t grid_size = 0;
};

inline void to_json(nlohmann::json& j, const BestConfig& b) {
  j = {{"phase", b.phase},           {"platform", b.platform},     {"hyperparams", b.hyperparams},
       {"trial_index", b.trial_index}, {"trial_seed", b.trial_seed}, {"final_val_loss", b.final_val_loss},
       {"grid_size", b.grid_size}};
}
inline void from_json(const nlohmann::json& j, BestConfig& b) {
  b.phase = j.at("phase").get<int>();
  b.platform = j.at("platform").get<std::string>();
  b.hyperparams = j.at("hyperparams").get<HyperParams>();
  b.trial_index = j.at("trial_index").get<std::size_t>();
  b.trial_seed = j.at("trial_seed").get<std::uint64_t>();
  b.final_val_loss = j.at("final_val_loss").get<double>();
  b.grid_size = j.at("grid_size").get<std::size_t>();
}

inline BestConfig load_best_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw DataError("best configuration " + path.string() + " does not exist; run 'tune' first");
  try {
    return nlohmann::json::parse(read_file(path)).get<BestConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- simulate

inline StageOutput cmd_simulate(const PipelineConfig& cfg, const Logger& log = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  StageOutput out;
  const SimConfig sim = cfg.resolved_simulation();
  validate(sim);
  auto res = run_simulation(sim);
  detail::write_artifact(cfg, out, cfg.dataset_path(), to_csv(res.dataset));
  log_to(log, "simulate: " + std::to_string(res.dataset.size()) + " rows, " +
                  std::to_string(res.clamp_events) + " clamp events -> " +
                  cfg.dataset_path().string());
  out.seconds = detail::seconds_since(t0);
  return out;
}

// --------------------------------------------------------------------- eda

inline StageOutput cmd_eda(const PipelineConfig& cfg, const Logger& log = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  StageOutput out;
  const Dataset ds = detail::load_dataset(cfg);
  nlohmann::json summary;
  summary["days"] = ds.num_days();
  summary["rows"] = ds.size();
  for (Platform p : {Platform::Zomato, Platform::Swiggy}) {
    const auto key = detail::platform_key(p);
    const EdaReport r = eda(ds, p);
    const auto dir = cfg.reports_dir();
    detail::write_artifact(cfg, out, dir / ("eda_" + key + ".csv"), eda_series_csv(r));
    detail::write_artifact(cfg, out, dir / ("histogram_" + key + ".csv"), histogram_csv(r.histogram));
    detail::write_artifact(cfg, out, dir / ("qq_" + key + ".csv"), qq_csv(r.qq));
    summary["platforms"][key] = {{"mean_daily_average", stats::mean(r.daily_average)},
                                 {"sd_daily_average", stats::sd(r.daily_average)},
                                 {"final_cumulative_mean", r.cumulative_mean.back()},
                                 {"mean_rolling_variance", stats::mean(r.rolling_variance)},
                                 {"histogram_bins", r.histogram.counts.size()}};
  }
  summary["pearson_rho"] = estimate_correlation(ds.demand_series(Platform::Zomato),
                                                ds.demand_series(Platform::Swiggy));
  detail::write_artifact(cfg, out, cfg.reports_dir() / "eda_summary.json", detail::dump(summary));
  log_to(log, "eda: " + std::to_string(ds.num_days()) + " days summarized");
  out.seconds = detail::seconds_since(t0);
  return out;
}

// -------------------------------------------------------------------- tune

inline std::string val_curves_csv(const std::vector<TrialResult>& trials) {
  std::ostringstream o;
  o << "trial,epoch,train_loss,val_loss\n";
  for (const auto& t : trials)
    for (std::size_t e = 0; e < t.val_curve.size(); ++e)
      o << t.index << ',' << e + 1 << ',' << format_exact(t.train_curve[e]) << ','
        << format_exact(t.val_curve[e]) << '\n';
  return o.str();
}

inline StageOutput cmd_tune(const PipelineConfig& cfg, int phase, const Logger& log = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  StageOutput out;
  const Dataset ds = detail::load_dataset(cfg);
  const HyperGrid grid = cfg.fixed_hyperparams ? HyperGrid::single(*cfg.fixed_hyperparams) : cfg.grid;
  for (Platform p : cfg.platforms) {
    const auto t1 = std::chrono::steady_clock::now();
    const auto tag = detail::tag(phase, p);
    const PreparedData pd = detail::prepare_for(cfg, ds, p, phase);
    GridSearchOptions opt;
    opt.jobs = cfg.jobs;
    std::size_t done = 0;
    const std::size_t total = grid.cardinality();
    opt.on_trial = [&](const TrialResult& r) {
      ++done;
      std::ostringstream m;
      m << "tune " << tag << ": trial " << done << "/" << total << " (#" << r.index << ") ";
      if (r.diverged) m << "diverged";
      else m << "val_loss=" << r.final_val_loss;
      log_to(log, m.str());
    };
    const auto base = cfg.stage_seed("tune/" + tag);
    const GridSearchResult gs = grid_search(pd.train, pd.validation, grid, base, opt);

    std::string jsonl;
    nlohmann::json secs = nlohmann::json::array();
    for (const auto& t : gs.trials) {
      jsonl += trial_to_json(t).dump() + "\n";
      secs.push_back(t.seconds);
    }
    detail::write_artifact(cfg, out, cfg.trials_dir() / ("trials_" + tag + ".jsonl"), jsonl);
    detail::write_artifact(cfg, out, cfg.reports_dir() / ("val_curves_" + tag + ".csv"),
                           val_curves_csv(gs.trials));
    const auto& bt = gs.trials[gs.best_index];
    BestConfig best{phase, detail::platform_key(p), gs.best, bt.index, bt.seed, bt.final_val_loss,
                    gs.trials.size()};
    detail::write_artifact(cfg, out, detail::best_path(cfg, phase, p), detail::dump(best));
    log_to(log, "tune " + tag + ": best trial #" + std::to_string(bt.index) + " " +
                    nlohmann::json(gs.best).dump());
    out.timings["tune/" + tag] = detail::seconds_since(t1);
    for (std::size_t i = 0; i < gs.trials.size(); ++i)
      out.timings["tune/" + tag + "/trial" + std::to_string(i)] = gs.trials[i].seconds;
  }
  out.seconds = detail::seconds_since(t0);
  return out;
}

// ------------------------------------------------------------- train / eval

// Raw-unit predictions and actuals for every window of `w`, target days in order.
struct RawPredictions {
  std::vector<Date> dates;
  int outputs = 1;
  std::vector<double> predicted;  // row-major: sample x output
  std::vector<double> actual;
};

inline RawPredictions raw_predictions(const lstm::Network& net, const WindowedDataset& w,
                                      const Scaler& target_scaler) {
  RawPredictions r;
  r.dates = w.timestamps;
  r.outputs = static_cast<int>(w.outputs());
  const SequenceData seq = SequenceData::from(w);
  const lstm::Mat pred = predict_all(net, seq);  // outputs x samples
  const double m = target_scaler.mean.at(0), s = target_scaler.sd.at(0);
  for (Eigen::Index i = 0; i < pred.cols(); ++i)
    for (Eigen::Index k = 0; k < pred.rows(); ++k) {
      r.predicted.push_back(pred(k, i) * s + m);
      r.actual.push_back(w.Y(i, k) * s + m);
    }
  return r;
}

inline std::string actual_vs_pred_csv(const RawPredictions& r) {
  std::ostringstream o;
  o << "date,time_slot,actual,predicted\n";
  for (std::size_t i = 0; i < r.dates.size(); ++i)
    for (int k = 0; k < r.outputs; ++k) {
      const std::size_t j = i * static_cast<std::size_t>(r.outputs) + static_cast<std::size_t>(k);
      o << r.dates[i].iso() << ',' << (r.outputs == 1 ? std::string("Daily") : std::string(kSlotNames[k]))
        << ',' << format_decimal(r.actual[j]) << ',' << format_decimal(r.predicted[j]) << '\n';
    }
  return o.str();
}

inline StageOutput cmd_train_eval(const PipelineConfig& cfg, int phase, const Logger& log = {},
                                  std::vector<MetricsReport>* metrics_out = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  StageOutput out;
  const Dataset ds = detail::load_dataset(cfg);
  nlohmann::json metrics;
  metrics["phase"] = phase;
  for (Platform p : cfg.platforms) {
    const auto t1 = std::chrono::steady_clock::now();
    const auto tag = detail::tag(phase, p);
    const BestConfig best = load_best_config(detail::best_path(cfg, phase, p));
    if (best.phase != phase || best.platform != detail::platform_key(p))
      throw DataError(detail::best_path(cfg, phase, p).string() + ": phase/platform mismatch");
    const PreparedData pd = detail::prepare_for(cfg, ds, p, phase);
    if (pd.test.samples() == 0) throw DataError("train " + tag + ": empty test split");
    TrainResult tr;
    try {
      tr = train(pd.train, pd.validation, best.hyperparams, best.trial_seed);
    } catch (const TrainingError& e) {
      throw TrainingError("train " + tag + " (best trial #" + std::to_string(best.trial_index) +
                              "): " + e.what(),
                          e.epoch(), e.batch());
    }
    ModelBundle bundle{tr.network,      best.hyperparams,  best.trial_seed, phase,
                       detail::platform_key(p), pd.input_scaler, pd.target_scaler, pd.feature_names};
    detail::write_artifact(cfg, out, detail::model_path(cfg, phase, p),
                           model_to_json(bundle).dump() + "\n");

    const RawPredictions rp = raw_predictions(tr.network, pd.test, pd.target_scaler);
    const MetricsReport m = evaluate_metrics(rp.actual, rp.predicted, phase, detail::platform_key(p));
    if (metrics_out) metrics_out->push_back(m);
    metrics["platforms"][detail::platform_key(p)] = m;
    detail::write_artifact(cfg, out, cfg.reports_dir() / ("actual_vs_pred_" + tag + ".csv"),
                           actual_vs_pred_csv(rp));
    std::ostringstream lc;
    lc << "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < tr.report.val_loss.size(); ++e)
      lc << e + 1 << ',' << format_exact(tr.report.train_loss[e]) << ','
         << format_exact(tr.report.val_loss[e]) << '\n';
    detail::write_artifact(cfg, out, cfg.reports_dir() / ("loss_curve_" + tag + ".csv"), lc.str());
    std::ostringstream msg;
    msg << "train " << tag << ": rmse=" << m.rmse << " mae=" << m.mae << " r2=" << m.r2
        << " (n=" << m.n << ")";
    log_to(log, msg.str());
    out.timings["train/" + tag] = detail::seconds_since(t1);
  }
  detail::write_artifact(cfg, out, cfg.reports_dir() / ("metrics_phase" + std::to_string(phase) + ".json"),
                         detail::dump(metrics));
  out.seconds = detail::seconds_since(t0);
  return out;
}

// ---------------------------------------------------------------- bullwhip

// Rolling one-step forecasts of total (both platforms) demand over every day
// that has a full input window, in raw order units. Phase 1 yields slot points,
// phase 2 daily-average points.
inline std::vector<ForecastPoint> total_forecasts(const PipelineConfig& cfg, const Dataset& ds,
                                                  int phase,
                                                  const std::map<Platform, ModelBundle>& models) {
  std::vector<ForecastPoint> total;
  bool first = true;
  for (const auto& [p, bundle] : models) {
    const PreparedData pd = detail::prepare_for(cfg, ds, p, phase);
    if (!detail::same_scaler(pd.input_scaler, bundle.input_scaler) ||
        !detail::same_scaler(pd.target_scaler, bundle.target_scaler) ||
        pd.feature_names != bundle.feature_names)
      throw DataError("model " + detail::tag(phase, p) + " was not trained on this dataset/config");
    const RawPredictions rp = raw_predictions(bundle.network, pd.full, bundle.target_scaler);
    std::size_t j = 0;
    for (std::size_t i = 0; i < rp.dates.size(); ++i) {
      const std::size_t day = static_cast<std::size_t>(rp.dates[i].days_since(ds.date(0)));
      for (int k = 0; k < rp.outputs; ++k, ++j) {
        const int slot = rp.outputs == 1 ? -1 : k;
        // Actuals come straight from the dataset so they are exact.
        double actual = 0.0;
        if (slot >= 0) {
          actual = ds.at(day, slot).demand[int(p)];
        } else {
          for (int s = 0; s < kSlotsPerDay; ++s) actual += ds.at(day, s).demand[int(p)];
          actual /= kSlotsPerDay;
        }
        if (first) {
          total.push_back({rp.dates[i], slot, rp.predicted[j], actual});
        } else {
          if (j >= total.size() || total[j].date != rp.dates[i] || total[j].slot != slot)
            throw DataError("forecast series of the two platforms are not aligned");
          total[j].forecast += rp.predicted[j];
          total[j].actual += actual;
        }
      }
    }
    first = false;
  }
  return total;
}

inline StageOutput cmd_bullwhip(const PipelineConfig& cfg, int phase, const Logger& log = {},
                                BullwhipReport* report_out = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  StageOutput out;
  const Dataset ds = detail::load_dataset(cfg);
  std::map<Platform, ModelBundle> models;
  for (Platform p : {Platform::Zomato, Platform::Swiggy}) {
    const auto path = detail::model_path(cfg, phase, p);
    if (!std::filesystem::exists(path))
      throw DataError("missing model " + path.string() + "; run 'train' for both platforms first");
    models.emplace(p, load_model(path));
  }
  const auto fc = total_forecasts(cfg, ds, phase, models);
  const SplitBounds bounds = chronological_split(
      ds, cfg.split, static_cast<std::size_t>(phase == 1 ? cfg.phase1_window_days : kPhase2Window) + 1);

  NewsvendorParams np;
  np.z_score = cfg.inventory.z_score;
  np.window_days = cfg.inventory.window_days;
  const bool daily = phase == 2;
  const InventoryPlan hist =
      plan_from_history(ds, daily ? PlanVariant::Daily : PlanVariant::FiveTime, np);
  const int err_window =
      daily ? cfg.inventory.phase2_error_window_days : cfg.inventory.phase1_error_window_days;
  const InventoryPlan pred = plan_from_forecast(
      fc, err_window, daily ? PlanVariant::DailyLstm : PlanVariant::FiveTimeLstm, np);

  const BullwhipReport rep =
      bullwhip_report(ds, bounds, phase, hist, pred, cfg.inventory.share_window_days);
  if (report_out) *report_out = rep;
  const auto dir = cfg.reports_dir();
  const std::string ph = "phase" + std::to_string(phase);
  detail::write_artifact(cfg, out, dir / ("bullwhip_" + ph + ".json"), detail::dump(to_json(rep)));
  detail::write_artifact(cfg, out, dir / ("inventory_" + ph + "_" + to_string(hist.variant) + ".csv"),
                         plan_to_csv(hist));
  detail::write_artifact(cfg, out, dir / ("inventory_" + ph + "_" + to_string(pred.variant) + ".csv"),
                         plan_to_csv(pred));
  std::ostringstream f;
  f << "date,time_slot,forecast_total,actual_total\n";
  for (const auto& p : fc)
    f << p.date.iso() << ',' << (p.slot >= 0 ? std::string(kSlotNames[p.slot]) : std::string("Daily"))
      << ',' << format_decimal(p.forecast) << ',' << format_decimal(p.actual) << '\n';
  detail::write_artifact(cfg, out, dir / ("forecast_total_" + ph + ".csv"), f.str());

  std::ostringstream msg;
  msg << "bullwhip " << ph << ": overall B training=" << rep.get("training", "overall").b
      << " testing=" << rep.get("testing", "overall").b
      << " predicted=" << rep.get("predicted", "overall").b;
  log_to(log, msg.str());
  out.seconds = detail::seconds_since(t0);
  return out;
}

// ---------------------------------------------------------------- manifest

struct RunManifest {
  std::string tool_version = OFD_VERSION;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> artifacts;  // relative path -> sha256
  std::map<std::string, double> timings;         // stage -> seconds
};

inline nlohmann::json to_json(const RunManifest& m) {
  return {{"tool", "ofd"},
          {"tool_version", m.tool_version},
          {"config_hash", m.config_hash},
          {"seed", m.seed},
          {"artifacts", m.artifacts},
          {"timings", m.timings}};
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
  m.timings = j.at("timings").get<std::map<std::string, double>>();
  return m;
}

inline std::filesystem::path manifest_path(const PipelineConfig& cfg) { return cfg.out_dir / "manifest.json"; }

// Merges a stage's artifacts and timings into the run manifest. An existing
// manifest written under a different configuration is replaced. Timings also go
// to timings.json, which is not checksummed.
inline void record_stage(const PipelineConfig& cfg, const std::string& stage, const StageOutput& so) {
  RunManifest m;
  const auto path = manifest_path(cfg);
  const std::string hash = config_hash(cfg);
  if (std::filesystem::exists(path)) {
    try {
      RunManifest old = manifest_from_json(nlohmann::json::parse(read_file(path)));
      if (old.config_hash == hash) m = std::move(old);
    } catch (const std::exception&) {
      // An unreadable manifest is rebuilt from scratch.
    }
  }
  m.tool_version = OFD_VERSION;
  m.config_hash = hash;
  m.seed = cfg.seed;
  for (const auto& a : so.artifacts) m.artifacts[a.generic_string()] = sha256_file(cfg.out_dir / a);
  m.timings[stage] = so.seconds;
  for (const auto& [k, v] : so.timings) m.timings[k] = v;
  write_file(path, detail::dump(to_json(m)));
  write_file(cfg.out_dir / "timings.json", detail::dump(m.timings));
  write_file(cfg.out_dir / "config.resolved.json", detail::dump(to_json(cfg)));
}

// ---------------------------------------------------------------- pipeline

struct PipelineSummary {
  std::vector<MetricsReport> metrics;
  std::map<int, BullwhipReport> bullwhip;
  RunManifest manifest;
};

inline PipelineSummary cmd_pipeline(const PipelineConfig& cfg, const Logger& log = {}) {
  validate(cfg);
  PipelineSummary summary;
  std::filesystem::remove(manifest_path(cfg));
  auto run = [&](const std::string& stage, const std::function<StageOutput()>& f) {
    StageOutput so;
    try {
      so = f();
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
    record_stage(cfg, stage, so);
  };
  run("simulate", [&] { return cmd_simulate(cfg, log); });
  run("eda", [&] { return cmd_eda(cfg, log); });
  const bool both = cfg.platforms.size() == 2;
  for (int phase : cfg.phases) {
    const std::string ph = "phase" + std::to_string(phase);
    run("tune/" + ph, [&] { return cmd_tune(cfg, phase, log); });
    run("train/" + ph, [&] { return cmd_train_eval(cfg, phase, log, &summary.metrics); });
    if (both) {
      run("bullwhip/" + ph, [&] {
        BullwhipReport rep;
        auto so = cmd_bullwhip(cfg, phase, log, &rep);
        summary.bullwhip[phase] = rep;
        return so;
      });
    } else {
      log_to(log, "bullwhip " + ph + ": skipped, needs models for both platforms");
    }
  }
  summary.manifest = manifest_from_json(nlohmann::json::parse(read_file(manifest_path(cfg))));
  return summary;
}

}  // namespace ofd
