#pragma once

#include <cmath>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "ofd/core/error.hpp"
#include "ofd/core/stats.hpp"

namespace ofd {

namespace detail {
inline void check_pair(std::span<const double> a, std::span<const double> p, const char* what) {
  if (a.size() != p.size()) throw DataError(std::string(what) + ": length mismatch");
  if (a.empty()) throw DataError(std::string(what) + ": empty input");
}
}  // namespace detail

inline double rmse(std::span<const double> actual, std::span<const double> predicted) {
  detail::check_pair(actual, predicted, "rmse");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i)
    s += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
  return std::sqrt(s / static_cast<double>(actual.size()));
}

inline double mae(std::span<const double> actual, std::span<const double> predicted) {
  detail::check_pair(actual, predicted, "mae");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) s += std::abs(actual[i] - predicted[i]);
  return s / static_cast<double>(actual.size());
}

inline double r2(std::span<const double> actual, std::span<const double> predicted) {
  detail::check_pair(actual, predicted, "r2");
  const double m = stats::mean(actual);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += (actual[i] - m) * (actual[i] - m);
  }
  if (ss_tot == 0.0) throw DataError("r2: actual series is constant, R^2 is undefined");
  return 1.0 - ss_res / ss_tot;
}

struct MetricsReport {
  int phase = 1;
  std::string platform;
  double rmse = 0.0;
  double mae = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

inline MetricsReport evaluate_metrics(std::span<const double> actual,
                                      std::span<const double> predicted, int phase,
                                      std::string platform) {
  return {phase, std::move(platform), rmse(actual, predicted), mae(actual, predicted),
          r2(actual, predicted), actual.size()};
}

inline void to_json(nlohmann::json& j, const MetricsReport& m) {
  j = {{"phase", m.phase}, {"platform", m.platform}, {"rmse", m.rmse},
       {"mae", m.mae},     {"r2", m.r2},             {"n", m.n}};
}

}  // namespace ofd
