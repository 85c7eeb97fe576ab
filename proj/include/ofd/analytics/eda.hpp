#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "ofd/core/error.hpp"
#include "ofd/core/stats.hpp"
#include "ofd/core/text.hpp"
#include "ofd/sim/dataset.hpp"

namespace ofd {

inline constexpr int kRollingWindowDays = 7;

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
};

struct QQPoint {
  double theoretical;
  double sample;
};

struct EdaReport {
  std::vector<Date> dates;
  std::vector<double> daily_average;     // D_avg
  std::vector<double> cumulative_mean;   // CM, same length as D_avg
  std::vector<double> rolling_variance;  // RV, entry k belongs to day k + 6
  Histogram histogram;                   // of D_avg
  std::vector<QQPoint> qq;               // D_avg against a fitted normal
};

inline std::vector<double> cumulative_mean(std::span<const double> x) {
  std::vector<double> out;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i];
    out.push_back(s / static_cast<double>(i + 1));
  }
  return out;
}

// Population variance over each trailing window of `window` values.
inline std::vector<double> rolling_variance(std::span<const double> x,
                                            int window = kRollingWindowDays) {
  std::vector<double> out;
  for (std::size_t t = static_cast<std::size_t>(window) - 1; t < x.size(); ++t)
    out.push_back(stats::variance(x.subspan(t + 1 - static_cast<std::size_t>(window),
                                            static_cast<std::size_t>(window))));
  return out;
}

// Equal-width bins over [min, max]; bin count from Sturges' rule.
inline Histogram sturges_histogram(std::span<const double> x) {
  if (x.empty()) throw DataError("histogram: empty input");
  const std::size_t bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(x.size())))) + 1;
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it, hi = *hi_it;
  Histogram h;
  h.counts.assign(bins, 0);
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lo + width * static_cast<double>(b));
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

// Sorted sample against normal quantiles at plotting positions (i - 0.5) / n.
inline std::vector<QQPoint> qq_points(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double m = stats::mean(s), sd = stats::sd(s);
  std::vector<QQPoint> out;
  const double n = static_cast<double>(s.size());
  const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    out.push_back({m + sd * boost::math::quantile(std_normal, p), s[i]});
  }
  return out;
}

inline EdaReport eda(const Dataset& ds, Platform p) {
  if (ds.num_days() < static_cast<std::size_t>(kRollingWindowDays))
    throw DataError("eda: need at least 7 days, got " + std::to_string(ds.num_days()));
  EdaReport r;
  for (std::size_t d = 0; d < ds.num_days(); ++d) r.dates.push_back(ds.date(d));
  r.daily_average = ds.daily_average_series(p);
  r.cumulative_mean = cumulative_mean(r.daily_average);
  r.rolling_variance = rolling_variance(r.daily_average);
  r.histogram = sturges_histogram(r.daily_average);
  r.qq = qq_points(r.daily_average);
  return r;
}

inline std::string eda_series_csv(const EdaReport& r) {
  std::ostringstream out;
  out << "day,date,daily_average,cumulative_mean,rolling_variance_7d\n";
  for (std::size_t d = 0; d < r.dates.size(); ++d) {
    out << d + 1 << ',' << r.dates[d].iso() << ',' << format_decimal(r.daily_average[d]) << ','
        << format_decimal(r.cumulative_mean[d]) << ',';
    if (d + 1 >= static_cast<std::size_t>(kRollingWindowDays))
      out << format_decimal(r.rolling_variance[d + 1 - kRollingWindowDays]);
    out << '\n';
  }
  return out.str();
}

inline std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin,lower,upper,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    out << b + 1 << ',' << format_decimal(h.edges[b]) << ',' << format_decimal(h.edges[b + 1])
        << ',' << h.counts[b] << '\n';
  return out.str();
}

inline std::string qq_csv(const std::vector<QQPoint>& q) {
  std::ostringstream out;
  out << "theoretical,sample\n";
  for (const auto& p : q) out << format_decimal(p.theoretical) << ',' << format_decimal(p.sample) << '\n';
  return out.str();
}

}  // namespace ofd
