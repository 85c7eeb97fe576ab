#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "ofd/core/rng.hpp"
#include "ofd/core/text.hpp"
#include "ofd/inventory/newsvendor.hpp"
#include "ofd/sim/config.hpp"
#include "ofd/sim/dataset.hpp"
#include "ofd/sim/models.hpp"

namespace ofd {

struct SimulationResult {
  Dataset dataset;
  long clamp_events = 0;  // platform-slot demands clamped at zero
};

namespace detail {

// Realized order arrival rate: exponential inter-arrivals at `rate` counted
// over an observation window, as orders per minute.
inline double realized_arrival_rate(double rate, double window_minutes, RandomStream& rng) {
  double t = sample_interarrival(rate, rng);
  long count = 0;
  while (t <= window_minutes) {
    ++count;
    t += sample_interarrival(rate, rng);
  }
  return static_cast<double>(count) / window_minutes;
}

inline void fill_supplier_inventory(std::vector<DemandRecord>& rows, int window_days, double z) {
  const Dataset ds(rows);
  for (std::size_t d = 0; d < ds.num_days(); ++d) {
    const int w = static_cast<int>(std::min<std::size_t>(d, static_cast<std::size_t>(window_days)));
    for (int k = 0; k < kSlotsPerDay; ++k) {
      double q = 0.0;
      if (w >= 2) {
        const auto st = slot_stats(ds, d, k, w);
        q = q_star(st.mean, st.sd, z);
      }
      rows[d * kSlotsPerDay + k].supplier_inventory = round_to(q);
    }
  }
}

}  // namespace detail

// Generates five records per day over [start_date, end_date]. Pure function of cfg.
inline SimulationResult run_simulation(const SimConfig& cfg) {
  validate(cfg);
  const std::uint64_t seed = cfg.seed;
  RandomStream weather_rng(seed, "weather");
  RandomStream segment_rng(seed, "segments");
  RandomStream category_rng(seed, "categories");
  RandomStream noise_rng(seed, "noise");
  RandomStream arrival_rng(seed, "arrivals");
  RandomStream distance_rng(seed, "distances");
  RandomStream prep_rng(seed, "prep");
  RandomStream delivery_rng(seed, "delivery");
  RandomStream multiplier_rng(seed, "multipliers");

  std::map<Date, EventImportance> holidays;
  for (const auto& h : cfg.calendar.holidays) holidays[h.date] = h.importance;

  const long num_days = cfg.num_days();
  const auto& pm = cfg.price_model;
  const auto& lt = cfg.lead_time_model;
  SimulationResult result;
  std::vector<DemandRecord> rows;
  rows.reserve(static_cast<std::size_t>(num_days) * kSlotsPerDay);

  Weather weather = Weather::Clear;
  for (long d = 0; d < num_days; ++d) {
    const Date date = cfg.start_date.plus_days(d);
    const auto& wp = cfg.calendar.weather_probabilities.at(season_of(date));
    if (d == 0 || !weather_rng.bernoulli(cfg.calendar.weather_persistence))
      weather = static_cast<Weather>(weather_rng.categorical(wp));

    const auto hit = holidays.find(date);
    const bool holiday = hit != holidays.end();
    const EventImportance importance = holiday ? hit->second : EventImportance::None;

    const double frac = num_days > 1 ? static_cast<double>(d) / static_cast<double>(num_days - 1) : 0.0;
    std::array<double, 3> seg_p{};
    for (int i = 0; i < 3; ++i)
      seg_p[i] = (1.0 - frac) * cfg.calendar.segment_probabilities[i] +
                 frac * cfg.calendar.segment_probabilities_end[i];

    for (int k = 0; k < kSlotsPerDay; ++k) {
      const TimeSlot slot = kSlots[k];
      const DemandPeriod period = cfg.slot_periods[k];
      DemandRecord r;
      r.week_index = static_cast<int>(d / 7) + 1;
      r.date = date;
      r.day_of_week = date.weekday_name();
      r.time_slot = slot;
      r.public_holiday = holiday;
      r.event_importance = importance;
      r.weather = weather;
      r.customer_segment = static_cast<CustomerSegment>(segment_rng.categorical(seg_p));
      const auto cat = category_rng.categorical(pm.category_weights);
      r.food_category = pm.base_prices[cat].first;
      const double base = pm.base_prices[cat].second;

      const auto& ar = lt.arrival_rate_ranges[int(period)];
      r.order_arrival_rate = round_to(detail::realized_arrival_rate(
          arrival_rng.uniform(ar.lo, ar.hi), lt.arrival_window_minutes, arrival_rng));

      const double eps = noise_rng.normal(cfg.noise_mean, cfg.noise_sd);
      const ExternalContext ctx{slot, weather, holiday, importance, r.customer_segment};
      const double cyc = cyclical_factor(cfg.cyclical.slot_positions[k], cfg.cyclical);

      std::array<double, 2> F{};
      for (Platform p : kPlatforms) {
        const int i = int(p);
        r.distance[i] = distance_rng.uniform(lt.distance_range_km.lo, lt.distance_range_km.hi);
        const double prep = sample_prep_time(lt, prep_rng);
        const double delivery = sample_delivery_time(r.distance[i], lt, delivery_rng);
        r.lead_time[i] = lead_time(prep, delivery);
        r.price[i] = price(p, base, r.distance[i], pm);
        F[i] = cyc * seasonal_multiplier(ctx, period, cfg.multipliers, multiplier_rng);
      }
      for (Platform p : kPlatforms) {
        const int i = int(p), j = 1 - i;
        const double raw = raw_demand(p, r.price[i], r.price[j], r.lead_time[i], r.lead_time[j],
                                      F[i], eps, cfg);
        if (raw < 0.0) ++result.clamp_events;
        r.demand[i] = std::max(0.0, raw);
      }
      for (int i = 0; i < 2; ++i) {
        r.price[i] = round_to(r.price[i]);
        r.demand[i] = round_to(r.demand[i]);
        r.lead_time[i] = round_to(r.lead_time[i]);
        r.distance[i] = round_to(r.distance[i]);
      }
      rows.push_back(std::move(r));
    }
  }
  detail::fill_supplier_inventory(rows, cfg.inventory_window_days, cfg.z_score);
  result.dataset = Dataset(std::move(rows));
  return result;
}

}  // namespace ofd
