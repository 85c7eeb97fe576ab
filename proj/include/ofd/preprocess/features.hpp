#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "ofd/core/error.hpp"
#include "ofd/preprocess/encoding.hpp"
#include "ofd/preprocess/scaler.hpp"
#include "ofd/preprocess/windows.hpp"
#include "ofd/sim/dataset.hpp"

namespace ofd {

// Column groups for one platform's model. Numeric names refer to the modeled
// platform's columns ("price" means price_zomato for the Zomato model); the
// rival_* names refer to the other platform.
struct FeatureSchema {
  std::vector<std::string> numeric_features{"price", "lead_time", "distance"};
  std::vector<std::string> one_hot_features{"weather", "food_category"};
  std::vector<std::string> ordinal_features{"event_importance"};
  std::vector<std::string> binary_features{"public_holiday"};
  std::string target = "demand";
  // Feed the lagged target as the first input feature.
  bool target_history = true;
  // Append the target day's calendar context (weather, event, holiday) to each timestep.
  bool target_day_covariates = true;
};

inline const std::vector<std::string>& known_numeric_features() {
  static const std::vector<std::string> k{"price", "lead_time", "distance", "rival_price",
                                          "rival_lead_time", "rival_distance",
                                          "order_arrival_rate"};
  return k;
}

inline void validate(const FeatureSchema& s) {
  std::set<std::string> seen;
  auto add = [&seen](const std::vector<std::string>& group, const char* what) {
    for (const auto& c : group)
      if (!seen.insert(c).second)
        throw ConfigError("feature schema: column '" + c + "' appears in two groups (" + what + ")");
  };
  add(s.numeric_features, "numeric");
  add(s.one_hot_features, "one-hot");
  add(s.ordinal_features, "ordinal");
  add(s.binary_features, "binary");
  if (seen.count(s.target))
    throw ConfigError("feature schema: target '" + s.target + "' must not be an encoded input");
  if (s.target != "demand") throw ConfigError("feature schema: target must be 'demand'");
  for (const auto& c : s.numeric_features)
    if (std::find(known_numeric_features().begin(), known_numeric_features().end(), c) ==
        known_numeric_features().end())
      throw ConfigError("feature schema: unknown numeric feature '" + c + "'");
  for (const auto& c : s.one_hot_features)
    if (c != "weather" && c != "food_category")
      throw ConfigError("feature schema: unknown one-hot feature '" + c + "'");
  for (const auto& c : s.ordinal_features)
    if (c != "event_importance")
      throw ConfigError("feature schema: unknown ordinal feature '" + c + "'");
  for (const auto& c : s.binary_features)
    if (c != "public_holiday") throw ConfigError("feature schema: unknown binary feature '" + c + "'");
}

// Food categories in order of first appearance.
inline std::vector<std::string> food_categories(const Dataset& ds) {
  std::vector<std::string> out;
  for (const auto& r : ds.rows())
    if (std::find(out.begin(), out.end(), r.food_category) == out.end())
      out.push_back(r.food_category);
  return out;
}

struct FeatureMatrix {
  RowMatrix values;
  std::vector<std::string> names;
  std::vector<std::size_t> numeric_columns;  // columns that get standardized
};

inline double numeric_value(const DemandRecord& r, Platform p, const std::string& name) {
  const int i = int(p), j = 1 - i;
  if (name == "demand") return r.demand[i];
  if (name == "price") return r.price[i];
  if (name == "lead_time") return r.lead_time[i];
  if (name == "distance") return r.distance[i];
  if (name == "rival_price") return r.price[j];
  if (name == "rival_lead_time") return r.lead_time[j];
  if (name == "rival_distance") return r.distance[j];
  if (name == "order_arrival_rate") return r.order_arrival_rate;
  throw ConfigError("unknown numeric feature '" + name + "'");
}

// One row per record: [demand?, numeric..., one-hot..., ordinal..., binary...].
inline FeatureMatrix slot_feature_matrix(const Dataset& ds, Platform p, const FeatureSchema& s,
                                         const std::vector<std::string>& categories) {
  FeatureMatrix m;
  if (s.target_history) m.names.push_back("demand");
  for (const auto& c : s.numeric_features) m.names.push_back(c);
  for (std::size_t i = 0; i < m.names.size(); ++i) m.numeric_columns.push_back(i);
  const auto weathers = weather_categories();
  for (const auto& c : s.one_hot_features) {
    const auto& cats = c == "weather" ? weathers : categories;
    for (const auto& v : cats) m.names.push_back(c + "=" + v);
  }
  for (const auto& c : s.ordinal_features) m.names.push_back(c);
  for (const auto& c : s.binary_features) m.names.push_back(c);

  m.values = RowMatrix::Zero(static_cast<Eigen::Index>(ds.size()),
                             static_cast<Eigen::Index>(m.names.size()));
  for (std::size_t row = 0; row < ds.size(); ++row) {
    const auto& r = ds.rows()[row];
    Eigen::Index col = 0;
    if (s.target_history) m.values(row, col++) = r.demand[int(p)];
    for (const auto& c : s.numeric_features) m.values(row, col++) = numeric_value(r, p, c);
    for (const auto& c : s.one_hot_features) {
      const auto v = c == "weather" ? one_hot_encode(to_string(r.weather), weathers)
                                    : one_hot_encode(r.food_category, categories);
      for (double x : v) m.values(row, col++) = x;
    }
    for (std::size_t k = 0; k < s.ordinal_features.size(); ++k)
      m.values(row, col++) = ordinal_encode_event(r.event_importance);
    for (std::size_t k = 0; k < s.binary_features.size(); ++k)
      m.values(row, col++) = r.public_holiday ? 1.0 : 0.0;
  }
  return m;
}

// Mean of each day's five slot rows.
inline RowMatrix daily_means(const RowMatrix& slot_rows) {
  const Eigen::Index days = slot_rows.rows() / kSlotsPerDay;
  RowMatrix out(days, slot_rows.cols());
  for (Eigen::Index d = 0; d < days; ++d)
    out.row(d) = slot_rows.middleRows(d * kSlotsPerDay, kSlotsPerDay).colwise().mean();
  return out;
}

// Per-day calendar context known in advance: weather one-hot, event ordinal, holiday flag.
inline FeatureMatrix day_covariate_matrix(const Dataset& ds) {
  FeatureMatrix m;
  for (const auto& w : weather_categories()) m.names.push_back("target_weather=" + w);
  m.names.push_back("target_event_importance");
  m.names.push_back("target_public_holiday");
  m.values = RowMatrix::Zero(static_cast<Eigen::Index>(ds.num_days()),
                             static_cast<Eigen::Index>(m.names.size()));
  for (std::size_t d = 0; d < ds.num_days(); ++d) {
    const auto& r = ds.at(d, 0);
    m.values(d, int(r.weather)) = 1.0;
    m.values(d, 3) = ordinal_encode_event(r.event_importance);
    m.values(d, 4) = r.public_holiday ? 1.0 : 0.0;
  }
  return m;
}

struct PreparedData {
  int phase = 1;
  Platform platform = Platform::Zomato;
  int window_days = 1;  // n for phase 1, 6 for phase 2
  SplitBounds bounds;
  Scaler input_scaler;   // numeric input columns, fitted on the training segment
  Scaler target_scaler;  // target column, fitted on the training segment
  std::vector<std::string> feature_names;
  WindowedDataset train, validation, test;
  WindowedDataset full;  // every window of the whole series, for rolling forecasts
};

// Encodes, standardizes (training statistics only) and windows one platform's
// series for the given phase. Windows for train/validation/test stay inside
// their segment.
inline PreparedData prepare(const Dataset& ds, Platform p, int phase, const SplitSpec& split,
                            const FeatureSchema& schema = {}, int n = 1) {
  validate(schema);
  if (phase != 1 && phase != 2) throw ConfigError("phase must be 1 or 2");
  if (phase == 1 && n < 1) throw ConfigError("phase-1 window n must be >= 1");
  PreparedData out;
  out.phase = phase;
  out.platform = p;
  out.window_days = phase == 1 ? n : kPhase2Window;
  out.bounds = chronological_split(ds, split, static_cast<std::size_t>(out.window_days) + 1);

  const auto cats = food_categories(ds);
  FeatureMatrix slot = slot_feature_matrix(ds, p, schema, cats);
  const FeatureMatrix cov = schema.target_day_covariates ? day_covariate_matrix(ds) : FeatureMatrix{};

  RowMatrix base;
  std::vector<double> target;
  std::size_t rows_per_day = 1;
  if (phase == 1) {
    base = slot.values;
    target = ds.demand_series(p);
    rows_per_day = kSlotsPerDay;
  } else {
    base = daily_means(slot.values);
    target = ds.daily_average_series(p);
  }

  const auto& tr = out.bounds.train;
  const Eigen::Index tr_rows = static_cast<Eigen::Index>(tr.count * rows_per_day);
  // Standardize numeric columns with training statistics.
  RowMatrix numeric(base.rows(), static_cast<Eigen::Index>(slot.numeric_columns.size()));
  std::vector<std::string> numeric_names;
  for (std::size_t k = 0; k < slot.numeric_columns.size(); ++k) {
    numeric.col(static_cast<Eigen::Index>(k)) = base.col(static_cast<Eigen::Index>(slot.numeric_columns[k]));
    numeric_names.push_back(slot.names[slot.numeric_columns[k]]);
  }
  out.input_scaler = fit_scaler(numeric.topRows(tr_rows), numeric_names, "train");
  const RowMatrix scaled = transform(out.input_scaler, numeric);
  for (std::size_t k = 0; k < slot.numeric_columns.size(); ++k)
    base.col(static_cast<Eigen::Index>(slot.numeric_columns[k])) = scaled.col(static_cast<Eigen::Index>(k));

  RowMatrix tcol = Eigen::Map<const RowMatrix>(target.data(), static_cast<Eigen::Index>(target.size()), 1);
  out.target_scaler = fit_scaler(tcol.topRows(tr_rows), {"demand"}, "train");
  const RowMatrix tscaled = transform(out.target_scaler, tcol);
  std::vector<double> ys(tscaled.data(), tscaled.data() + tscaled.size());

  out.feature_names = slot.names;
  for (const auto& c : cov.names) out.feature_names.push_back(c);

  std::vector<Date> dates;
  for (std::size_t d = 0; d < ds.num_days(); ++d) dates.push_back(ds.date(d));

  auto make = [&](const DayRange& r) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(r.first * rows_per_day);
    const Eigen::Index rn = static_cast<Eigen::Index>(r.count * rows_per_day);
    const RowMatrix feats = base.middleRows(r0, rn);
    const std::span<const double> tgt(ys.data() + r0, static_cast<std::size_t>(rn));
    const std::span<const Date> dts(dates.data() + r.first, r.count);
    const RowMatrix c = cov.values.size() > 0
                            ? RowMatrix(cov.values.middleRows(static_cast<Eigen::Index>(r.first),
                                                              static_cast<Eigen::Index>(r.count)))
                            : RowMatrix();
    return phase == 1 ? window_phase1(feats, tgt, n, dts, c, out.feature_names)
                      : window_phase2(feats, tgt, dts, c, out.feature_names);
  };
  out.train = make(out.bounds.train);
  out.validation = make(out.bounds.validation);
  out.test = make(out.bounds.test);
  out.full = make(DayRange{0, ds.num_days()});
  return out;
}

}  // namespace ofd
