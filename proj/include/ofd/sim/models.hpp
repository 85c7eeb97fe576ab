#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "ofd/core/error.hpp"
#include "ofd/core/rng.hpp"
#include "ofd/sim/config.hpp"
#include "ofd/sim/types.hpp"

namespace ofd {

struct ExternalContext {
  TimeSlot time_slot = TimeSlot::Morning;
  Weather weather = Weather::Clear;
  bool holiday = false;
  EventImportance event_importance = EventImportance::None;
  CustomerSegment customer_segment = CustomerSegment::General;
};

inline double cyclical_factor(double slot_index, const CyclicalParams& p) {
  return p.amplitude * std::sin(std::numbers::pi / p.period * slot_index + p.phase_shift) +
         p.baseline;
}

struct AmplitudeBaseline {
  double amplitude;
  double baseline;
};

inline AmplitudeBaseline amplitude_from_volumes(double peak_orders, double offpeak_orders) {
  if (peak_orders == 0.0) throw ConfigError("amplitude_from_volumes: peak volume is zero");
  if (!(peak_orders >= offpeak_orders && offpeak_orders >= 0.0))
    throw ConfigError("amplitude_from_volumes: need peak >= off-peak >= 0");
  return {(peak_orders - offpeak_orders) / (2.0 * peak_orders),
          (peak_orders + offpeak_orders) / (2.0 * peak_orders)};
}

// F = T * W * E * beta_customer, each factor drawn uniformly from its range.
inline double seasonal_multiplier(const ExternalContext& ctx, DemandPeriod period,
                                  const MultiplierModel& m, RandomStream& rng) {
  auto draw = [&rng](const Range& r) { return rng.uniform(r.lo, r.hi); };
  const double t = draw(m.time_of_day[int(period)]);
  const double w = draw(m.weather[int(ctx.weather)]);
  const double e = ctx.holiday ? draw(m.holiday[int(ctx.event_importance)]) : draw(m.regular_day);
  const double b = draw(m.segment[int(ctx.customer_segment)]);
  return t * w * e * b;
}

struct LognormalParams {
  double log_mu;
  double log_sigma;
};

inline LognormalParams lognormal_params_from_moments(double mean, double sd) {
  if (!(mean > 0.0) || !(sd > 0.0))
    throw ConfigError("lognormal_params_from_moments: mean and sd must be positive");
  return {std::log(mean * mean / std::sqrt(sd * sd + mean * mean)),
          std::sqrt(std::log1p(sd * sd / (mean * mean)))};
}

inline double sample_prep_time(const LeadTimeModel& m, RandomStream& rng) {
  return rng.lognormal(m.prep_log_mu, m.prep_log_sigma);
}

inline const DistanceBand& band_for(double distance_km, const LeadTimeModel& m) {
  for (std::size_t i = 0; i < m.distance_bands.size(); ++i) {
    const auto& b = m.distance_bands[i];
    const bool last = i + 1 == m.distance_bands.size();
    if (distance_km >= b.min_km && (distance_km < b.max_km || (last && distance_km <= b.max_km)))
      return b;
  }
  throw ConfigError("distance " + std::to_string(distance_km) + " km lies outside all bands");
}

inline double sample_delivery_time(double distance_km, const LeadTimeModel& m, RandomStream& rng) {
  const auto& b = band_for(distance_km, m);
  return rng.uniform(b.a, b.b);
}

inline double sample_interarrival(double rate, RandomStream& rng) {
  if (!(rate > 0.0)) throw ConfigError("sample_interarrival: rate must be > 0");
  return rng.exponential(rate);
}

inline double lead_time(double prep, double delivery) { return prep + delivery; }

inline double price(Platform platform, double base_price, double distance_km,
                    const PriceModel& m) {
  const int k = int(platform);
  const double small = base_price <= m.small_order_threshold ? m.small_order_fee : 0.0;
  return base_price * m.gst_multiplier + m.platform_fee[k] + m.base_delivery_fee[k] +
         m.per_km_rate[k] * distance_km + small;
}

inline double price(Platform platform, const std::string& category, double distance_km,
                    const PriceModel& m) {
  return price(platform, m.base_price(category), distance_km, m);
}

// Unclamped bracket times F. Negative values signal a clamp event.
inline double raw_demand(Platform platform, double own_price, double rival_price, double own_lead,
                         double rival_lead, double F, double epsilon, const SimConfig& cfg) {
  const auto& p = cfg.params(platform);
  const double bracket = p.alpha - p.beta * own_price - cfg.gamma * own_lead +
                         cfg.tau * (rival_price - own_price) -
                         cfg.delta * (own_lead - rival_lead) + epsilon;
  return bracket * F;
}

inline double demand(Platform platform, double own_price, double rival_price, double own_lead,
                     double rival_lead, double F, double epsilon, const SimConfig& cfg) {
  return std::max(0.0, raw_demand(platform, own_price, rival_price, own_lead, rival_lead, F,
                                  epsilon, cfg));
}

}  // namespace ofd
