#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ofd/core/date.hpp"
#include "ofd/core/error.hpp"
#include "ofd/core/stats.hpp"
#include "ofd/core/text.hpp"
#include "ofd/sim/dataset.hpp"

namespace ofd {

enum class Granularity { Slot, Daily };
enum class StatsSource { Historical, Forecast };
enum class PlanVariant { FiveTime, Daily, FiveTimeLstm, DailyLstm };

inline std::string to_string(PlanVariant v) {
  switch (v) {
    case PlanVariant::FiveTime: return "5-time";
    case PlanVariant::Daily: return "daily";
    case PlanVariant::FiveTimeLstm: return "5-time-lstm";
    case PlanVariant::DailyLstm: return "daily-lstm";
  }
  return "?";
}

struct DemandStats {
  double mean = 0.0;
  double sd = 0.0;
  Granularity granularity = Granularity::Slot;
  StatsSource source = StatsSource::Historical;
  int window_days = 0;
  double rho = 0.0;  // platform correlation used for the combined sd
};

struct NewsvendorParams {
  double z_score = 1.96;
  // Fixed platform correlation. When empty, rho is estimated over each trailing window.
  std::optional<double> rho;
  int window_days = 7;
};

struct PlanPoint {
  Date date;
  int slot = -1;  // -1 for daily plans
  double mu = 0.0;
  double sigma = 0.0;
  double q_star = 0.0;
};

struct InventoryPlan {
  PlanVariant variant = PlanVariant::FiveTime;
  std::vector<PlanPoint> points;

  std::vector<double> q_series() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.q_star);
    return out;
  }
};

inline double combined_sd(double sigma_z, double sigma_s, double rho) {
  const double v = sigma_z * sigma_z + sigma_s * sigma_s + 2.0 * rho * sigma_z * sigma_s;
  return std::sqrt(std::max(0.0, v));
}

inline double q_star(double mu, double sigma, double z) { return std::max(0.0, mu + z * sigma); }

inline double estimate_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("estimate_correlation: length mismatch");
  if (a.size() < 2) throw DataError("estimate_correlation: need at least two points");
  const double va = stats::variance(a), vb = stats::variance(b);
  if (va == 0.0 || vb == 0.0) throw DataError("estimate_correlation: constant series");
  const double r = stats::covariance(a, b) / std::sqrt(va * vb);
  return std::clamp(r, -1.0, 1.0);
}

// Trailing statistics of total (Zomato + Swiggy) demand for one slot over the
// `window_days` days before `day`.
inline DemandStats slot_stats(const Dataset& history, std::size_t day, int slot, int window_days,
                              std::optional<double> fixed_rho = std::nullopt) {
  if (window_days < 2) throw DataError("slot_stats: window must span at least 2 days");
  if (day > history.num_days()) throw DataError("slot_stats: day beyond history");
  if (day < static_cast<std::size_t>(window_days))
    throw DataError("slot_stats: insufficient history (" + std::to_string(day) +
                    " days before the target, window " + std::to_string(window_days) + ")");
  std::vector<double> z, s;
  for (std::size_t d = day - window_days; d < day; ++d) {
    z.push_back(history.at(d, slot).demand[0]);
    s.push_back(history.at(d, slot).demand[1]);
  }
  const double sz = stats::sd(z), ss = stats::sd(s);
  double rho = 0.0;
  if (fixed_rho) {
    rho = *fixed_rho;
  } else if (sz > 0.0 && ss > 0.0) {
    rho = estimate_correlation(z, s);
  }
  return {stats::mean(z) + stats::mean(s), combined_sd(sz, ss, rho), Granularity::Slot,
          StatsSource::Historical, window_days, rho};
}

// Daily statistics as the mean of the five slot means and the mean of the five slot sds.
inline DemandStats daily_stats(std::span<const DemandStats> slots) {
  if (slots.size() != kSlotsPerDay) throw DataError("daily_stats: need exactly 5 slot stats");
  double m = 0.0, s = 0.0, r = 0.0;
  for (const auto& st : slots) {
    m += st.mean;
    s += st.sd;
    r += st.rho;
  }
  return {m / kSlotsPerDay, s / kSlotsPerDay, Granularity::Daily, slots[0].source,
          slots[0].window_days, r / kSlotsPerDay};
}

// Historical plan for days in [first_day, last_day); days without a full
// trailing window are skipped.
inline InventoryPlan plan_from_history(const Dataset& ds, PlanVariant variant,
                                       const NewsvendorParams& params, std::size_t first_day = 0,
                                       std::size_t last_day = static_cast<std::size_t>(-1)) {
  if (variant != PlanVariant::FiveTime && variant != PlanVariant::Daily)
    throw DataError("plan_from_history: variant must be 5-time or daily");
  last_day = std::min(last_day, ds.num_days());
  const std::size_t start = std::max(first_day, static_cast<std::size_t>(params.window_days));
  if (start >= last_day)
    throw DataError("plan_from_history: insufficient history for a " +
                    std::to_string(params.window_days) + "-day window");
  InventoryPlan plan{variant, {}};
  for (std::size_t d = start; d < last_day; ++d) {
    std::vector<DemandStats> st;
    for (int k = 0; k < kSlotsPerDay; ++k)
      st.push_back(slot_stats(ds, d, k, params.window_days, params.rho));
    if (variant == PlanVariant::FiveTime) {
      for (int k = 0; k < kSlotsPerDay; ++k)
        plan.points.push_back({ds.date(d), k, st[k].mean, st[k].sd,
                               q_star(st[k].mean, st[k].sd, params.z_score)});
    } else {
      const auto ds_ = daily_stats(st);
      plan.points.push_back({ds.date(d), -1, ds_.mean, ds_.sd,
                             q_star(ds_.mean, ds_.sd, params.z_score)});
    }
  }
  return plan;
}

struct ForecastPoint {
  Date date;
  int slot = -1;  // -1 for daily forecasts
  double forecast = 0.0;
  double actual = 0.0;
};

namespace detail {
inline void check_forecast_alignment(std::span<const ForecastPoint> f, bool slotted) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& p = f[i];
    if (slotted ? (p.slot < 0 || p.slot >= kSlotsPerDay) : p.slot != -1)
      throw DataError("forecast point " + std::to_string(i) + ": slot index does not match series granularity");
    if (i == 0) continue;
    const auto& q = f[i - 1];
    const bool ok = slotted ? ((p.date == q.date && p.slot == q.slot + 1) ||
                               (p.date > q.date && p.slot == 0 && q.slot == kSlotsPerDay - 1))
                            : p.date > q.date;
    if (!ok) throw DataError("forecast point " + std::to_string(i) + " (" + p.date.iso() +
                             "): misaligned forecast index");
  }
  if (slotted && !f.empty() && (f.front().slot != 0 || f.back().slot != kSlotsPerDay - 1))
    throw DataError("slot forecasts must cover whole days");
}

// Averages five slot forecasts (and actuals) into one daily point.
inline std::vector<ForecastPoint> to_daily(std::span<const ForecastPoint> f) {
  std::vector<ForecastPoint> out;
  for (std::size_t i = 0; i + kSlotsPerDay <= f.size(); i += kSlotsPerDay) {
    double fs = 0.0, as = 0.0;
    for (int k = 0; k < kSlotsPerDay; ++k) {
      fs += f[i + k].forecast;
      as += f[i + k].actual;
    }
    out.push_back({f[i].date, -1, fs / kSlotsPerDay, as / kSlotsPerDay});
  }
  return out;
}
}  // namespace detail

// Forecast-driven plan: Q* = forecast + z * sd(errors of the forecasts dated
// in the `error_sd_window_days` days before each point). Points with fewer than
// two prior errors in the window are skipped. For daily-lstm, slot forecasts
// are first averaged per day; daily forecasts are used as given.
inline InventoryPlan plan_from_forecast(std::span<const ForecastPoint> forecasts,
                                        int error_sd_window_days, PlanVariant variant,
                                        const NewsvendorParams& params) {
  if (variant != PlanVariant::FiveTimeLstm && variant != PlanVariant::DailyLstm)
    throw DataError("plan_from_forecast: variant must be 5-time-lstm or daily-lstm");
  if (error_sd_window_days < 1) throw DataError("plan_from_forecast: window must be >= 1 day");
  if (forecasts.empty()) return {variant, {}};
  const bool slotted = forecasts.front().slot != -1;
  detail::check_forecast_alignment(forecasts, slotted);
  if (variant == PlanVariant::FiveTimeLstm && !slotted)
    throw DataError("plan_from_forecast: 5-time-lstm needs slot forecasts");

  std::vector<ForecastPoint> series;
  if (variant == PlanVariant::DailyLstm && slotted)
    series = detail::to_daily(forecasts);
  else
    series.assign(forecasts.begin(), forecasts.end());

  InventoryPlan plan{variant, {}};
  std::size_t lo = 0;  // first point inside the trailing window
  std::size_t hi = 0;  // first point dated on or after the current day
  std::vector<double> errs;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& p = series[i];
    while (hi < series.size() && series[hi].date < p.date) ++hi;
    while (lo < hi && p.date.days_since(series[lo].date) > error_sd_window_days) ++lo;
    if (hi - lo < 2) continue;
    errs.clear();
    for (std::size_t j = lo; j < hi; ++j) errs.push_back(series[j].actual - series[j].forecast);
    const double sigma = stats::sd(errs);
    plan.points.push_back({p.date, p.slot, p.forecast, sigma,
                           q_star(p.forecast, sigma, params.z_score)});
  }
  return plan;
}

inline std::string plan_to_csv(const InventoryPlan& plan) {
  std::ostringstream out;
  out << "date,time_slot,variant,mu,sigma,q_star\n";
  for (const auto& p : plan.points)
    out << p.date.iso() << ',' << (p.slot >= 0 ? std::string(kSlotNames[p.slot]) : "Daily") << ','
        << to_string(plan.variant) << ',' << format_decimal(p.mu) << ','
        << format_decimal(p.sigma) << ',' << format_decimal(p.q_star) << '\n';
  return out.str();
}

}  // namespace ofd
