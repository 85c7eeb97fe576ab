#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofd/core/date.hpp"
#include "ofd/core/error.hpp"
#include "ofd/sim/types.hpp"

namespace ofd {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct PlatformParams {
  std::string name;
  double alpha = 0.0;
  double beta = 1.5;
};

struct CyclicalParams {
  double amplitude = 0.475;
  double period = 5.0;
  double phase_shift = 1.5;
  double baseline = 0.525;
  // Position of each slot (Morning..Midnight) on the cycle. Dinner sits at
  // position 0 where sin(phase_shift) is closest to the crest.
  std::array<int, 5> slot_positions{3, 1, 0, 2, 4};
};

struct HolidayEntry {
  Date date;
  EventImportance importance = EventImportance::Low;
  std::string name;
};

struct EventCalendar {
  std::vector<HolidayEntry> holidays;
  // Keys: winter (Dec-Feb), summer (Mar-May), monsoon (Jun-Sep), post_monsoon (Oct-Nov).
  std::map<std::string, std::array<double, 3>> weather_probabilities;
  // Probability that a day keeps the previous day's weather.
  double weather_persistence = 0.8;
  std::array<double, 3> segment_probabilities{0.25, 0.60, 0.15};
  // Segment mix on the last simulated day; interpolated linearly from the
  // start mix. Equal to segment_probabilities for a stationary mix.
  std::array<double, 3> segment_probabilities_end{0.05, 0.60, 0.35};
};

struct DistanceBand {
  double min_km = 0.0;
  double max_km = 0.0;
  double a = 0.0;
  double b = 0.0;
};

struct LeadTimeModel {
  double prep_log_mu = 3.35;
  double prep_log_sigma = 0.32;
  std::vector<DistanceBand> distance_bands{
      {1.0, 5.0, 15.0, 20.0}, {5.0, 10.0, 30.0, 35.0}, {10.0, 15.0, 40.0, 45.0}};
  // Indexed by DemandPeriod: peak, standard, late night.
  std::array<Range, 3> arrival_rate_ranges{Range{3.0, 10.0}, Range{2.0, 6.0}, Range{1.0, 3.0}};
  Range distance_range_km{1.0, 15.0};
  // Length of the observation window over which the realized arrival rate is counted.
  double arrival_window_minutes = 60.0;
};

struct PriceModel {
  std::vector<std::pair<std::string, double>> base_prices;
  std::vector<double> category_weights;  // same order as base_prices
  double gst_multiplier = 1.05;
  std::array<double, 2> platform_fee{10.0, 10.0};
  std::array<double, 2> base_delivery_fee{20.0, 20.0};
  std::array<double, 2> per_km_rate{6.0, 6.0};
  double small_order_threshold = 100.0;
  double small_order_fee = 25.0;

  double base_price(const std::string& category) const {
    for (const auto& [name, p] : base_prices)
      if (name == category) return p;
    throw ConfigError("unknown food category '" + category + "'");
  }
};

struct MultiplierModel {
  // Indexed by DemandPeriod.
  std::array<Range, 3> time_of_day{Range{1.2, 1.5}, Range{1.0, 1.2}, Range{0.8, 1.0}};
  // Indexed by Weather.
  std::array<Range, 3> weather{Range{1.0, 1.0}, Range{1.1, 1.3}, Range{1.4, 1.6}};
  // Holiday multiplier by event importance; an unlabeled holiday uses the None entry.
  std::array<Range, 4> holiday{Range{1.2, 1.5}, Range{1.2, 1.3}, Range{1.3, 1.4},
                               Range{1.4, 1.5}};
  Range regular_day{1.0, 1.0};
  // Indexed by CustomerSegment.
  std::array<Range, 3> segment{Range{0.7, 0.9}, Range{1.0, 1.0}, Range{1.1, 1.2}};
};

struct SimConfig {
  Date start_date{2023, 1, 1};
  Date end_date{2025, 1, 1};  // inclusive
  int slots_per_day = kSlotsPerDay;
  std::uint64_t seed = 42;
  std::array<PlatformParams, 2> platform_params{PlatformParams{"Zomato", 10000.0, 1.5},
                                                PlatformParams{"Swiggy", 12000.0, 1.5}};
  double noise_mean = 0.0;
  double noise_sd = 20.0;
  double gamma = 0.5;
  double delta = 0.5;
  double tau = 0.5;
  double z_score = 1.96;
  std::array<DemandPeriod, 5> slot_periods{DemandPeriod::Standard, DemandPeriod::Peak,
                                           DemandPeriod::Peak, DemandPeriod::Standard,
                                           DemandPeriod::LateNight};
  int inventory_window_days = 7;
  EventCalendar calendar;
  PriceModel price_model;
  LeadTimeModel lead_time_model;
  CyclicalParams cyclical;
  MultiplierModel multipliers;

  static SimConfig defaults();

  long num_days() const { return end_date.days_since(start_date) + 1; }
  const PlatformParams& params(Platform p) const { return platform_params[int(p)]; }
};

inline std::string season_of(const Date& d) {
  const unsigned m = d.month();
  if (m == 12 || m <= 2) return "winter";
  if (m <= 5) return "summer";
  if (m <= 9) return "monsoon";
  return "post_monsoon";
}

inline std::vector<HolidayEntry> default_holidays() {
  using E = EventImportance;
  const std::vector<std::tuple<const char*, E, const char*>> rows = {
      {"2023-01-01", E::High, "New Year's Day"},
      {"2023-01-26", E::Medium, "Republic Day"},
      {"2023-03-08", E::Medium, "Holi"},
      {"2023-04-14", E::Low, "Ambedkar Jayanti"},
      {"2023-04-22", E::Medium, "Eid al-Fitr"},
      {"2023-08-15", E::Medium, "Independence Day"},
      {"2023-09-19", E::Low, "Ganesh Chaturthi"},
      {"2023-10-02", E::Low, "Gandhi Jayanti"},
      {"2023-10-24", E::Medium, "Dussehra"},
      {"2023-11-12", E::High, "Diwali"},
      {"2023-12-25", E::Medium, "Christmas"},
      {"2023-12-31", E::High, "New Year's Eve"},
      {"2024-01-01", E::High, "New Year's Day"},
      {"2024-01-26", E::Medium, "Republic Day"},
      {"2024-03-25", E::Medium, "Holi"},
      {"2024-04-11", E::Medium, "Eid al-Fitr"},
      {"2024-04-14", E::Low, "Ambedkar Jayanti"},
      {"2024-08-15", E::Medium, "Independence Day"},
      {"2024-09-07", E::Low, "Ganesh Chaturthi"},
      {"2024-10-02", E::Low, "Gandhi Jayanti"},
      {"2024-10-12", E::Medium, "Dussehra"},
      {"2024-11-01", E::High, "Diwali"},
      {"2024-12-25", E::Medium, "Christmas"},
      {"2024-12-31", E::High, "New Year's Eve"},
      {"2025-01-01", E::High, "New Year's Day"},
  };
  std::vector<HolidayEntry> out;
  for (const auto& [d, imp, name] : rows) out.push_back({Date::parse(d), imp, name});
  return out;
}

inline SimConfig SimConfig::defaults() {
  SimConfig c;
  c.calendar.holidays = default_holidays();
  c.calendar.weather_probabilities = {
      {"winter", {0.50, 0.30, 0.20}},
      {"summer", {0.50, 0.30, 0.20}},
      {"monsoon", {0.30, 0.40, 0.30}},
      {"post_monsoon", {0.45, 0.35, 0.20}},
  };
  c.price_model.base_prices = {
      {"Burger", 150.0}, {"Biryani", 250.0}, {"Pizza", 350.0},
      {"South Indian", 120.0}, {"Beverages", 90.0}};
  c.price_model.category_weights = {0.2, 0.2, 0.2, 0.2, 0.2};
  return c;
}

// Drops holidays that fall outside [start_date, end_date].
inline void clip_calendar_to_range(SimConfig& cfg) {
  std::vector<HolidayEntry> kept;
  for (const auto& h : cfg.calendar.holidays)
    if (h.date >= cfg.start_date && h.date <= cfg.end_date) kept.push_back(h);
  cfg.calendar.holidays = std::move(kept);
}

namespace detail {
inline void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(field + ": " + msg);
}
inline void require_probabilities(const std::vector<double>& p, const std::string& field) {
  double s = 0.0;
  for (double v : p) {
    require(v >= 0.0 && std::isfinite(v), field, "probabilities must be finite and >= 0");
    s += v;
  }
  require(std::abs(s - 1.0) <= 1e-9, field, "probabilities must sum to 1");
}
inline void require_range(const Range& r, const std::string& field, bool positive = true) {
  require(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi, field,
          "range must satisfy lo <= hi");
  if (positive) require(r.lo > 0.0, field, "range must be positive");
}
}  // namespace detail

// Throws ConfigError naming the offending field.
inline void validate(const SimConfig& c) {
  using detail::require;
  require(c.start_date <= c.end_date, "start_date", "must not be after end_date");
  require(c.slots_per_day == kSlotsPerDay, "slots_per_day", "must be 5");
  require(c.noise_sd >= 0.0, "noise_sd", "must be >= 0");
  require(c.z_score > 0.0, "z_score", "must be > 0");
  require(c.gamma >= 0.0, "gamma", "must be >= 0");
  require(c.delta >= 0.0, "delta", "must be >= 0");
  require(c.tau >= 0.0, "tau", "must be >= 0");
  require(c.inventory_window_days >= 2, "inventory_window_days", "must be >= 2");
  for (const auto& p : c.platform_params) {
    require(p.alpha > 0.0, "platform_params." + p.name + ".alpha", "must be > 0");
    require(p.beta >= 0.0, "platform_params." + p.name + ".beta", "must be >= 0");
  }
  const auto& cy = c.cyclical;
  require(cy.period > 0.0, "cyclical.period", "must be > 0");
  require(cy.baseline - cy.amplitude >= 0.0, "cyclical", "baseline - amplitude must be >= 0");
  for (int pos : cy.slot_positions)
    require(pos >= 0 && pos <= cy.period, "cyclical.slot_positions", "must lie in [0, period]");

  const auto& cal = c.calendar;
  require(!cal.weather_probabilities.empty(), "calendar.weather_probabilities",
          "calendar is empty");
  for (const char* season : {"winter", "summer", "monsoon", "post_monsoon"}) {
    auto it = cal.weather_probabilities.find(season);
    require(it != cal.weather_probabilities.end(), "calendar.weather_probabilities",
            std::string("missing season '") + season + "'");
    detail::require_probabilities({it->second.begin(), it->second.end()},
                                  std::string("calendar.weather_probabilities.") + season);
  }
  require(cal.weather_persistence >= 0.0 && cal.weather_persistence < 1.0,
          "calendar.weather_persistence", "must lie in [0, 1)");
  detail::require_probabilities({cal.segment_probabilities.begin(), cal.segment_probabilities.end()},
                                "calendar.segment_probabilities");
  detail::require_probabilities(
      {cal.segment_probabilities_end.begin(), cal.segment_probabilities_end.end()},
      "calendar.segment_probabilities_end");
  for (const auto& h : cal.holidays)
    require(h.date >= c.start_date && h.date <= c.end_date, "calendar.holidays",
            "holiday " + h.date.iso() + " lies outside the simulated date range");

  const auto& pm = c.price_model;
  require(!pm.base_prices.empty(), "price_model.base_prices", "must not be empty");
  require(pm.category_weights.size() == pm.base_prices.size(), "price_model.category_weights",
          "must have one weight per base price");
  detail::require_probabilities(pm.category_weights, "price_model.category_weights");
  for (const auto& [name, p] : pm.base_prices)
    require(p >= 0.0, "price_model.base_prices." + name, "must be >= 0");
  require(pm.gst_multiplier >= 1.0, "price_model.gst_multiplier", "must be >= 1");
  for (int k = 0; k < 2; ++k) {
    require(pm.platform_fee[k] >= 0.0, "price_model.platform_fee", "must be >= 0");
    require(pm.base_delivery_fee[k] >= 0.0, "price_model.base_delivery_fee", "must be >= 0");
    require(pm.per_km_rate[k] >= 0.0, "price_model.per_km_rate", "must be >= 0");
  }
  require(pm.small_order_threshold >= 0.0, "price_model.small_order_threshold", "must be >= 0");
  require(pm.small_order_fee >= 0.0, "price_model.small_order_fee", "must be >= 0");

  const auto& lt = c.lead_time_model;
  require(lt.prep_log_sigma > 0.0, "lead_time_model.prep_log_sigma", "must be > 0");
  detail::require_range(lt.distance_range_km, "lead_time_model.distance_range_km", false);
  require(lt.distance_range_km.lo >= 0.0, "lead_time_model.distance_range_km", "must be >= 0");
  require(!lt.distance_bands.empty(), "lead_time_model.distance_bands", "must not be empty");
  double expect = lt.distance_range_km.lo;
  for (const auto& b : lt.distance_bands) {
    require(b.a < b.b, "lead_time_model.distance_bands", "every band needs a < b");
    require(b.a >= 0.0, "lead_time_model.distance_bands", "band bounds must be >= 0");
    require(b.min_km == expect && b.max_km > b.min_km, "lead_time_model.distance_bands",
            "bands must partition the distance range in ascending order");
    expect = b.max_km;
  }
  require(expect == lt.distance_range_km.hi, "lead_time_model.distance_bands",
          "bands must cover the whole distance range");
  for (const auto& r : lt.arrival_rate_ranges)
    detail::require_range(r, "lead_time_model.arrival_rate_ranges");
  require(lt.arrival_window_minutes > 0.0, "lead_time_model.arrival_window_minutes",
          "must be > 0");

  const auto& mm = c.multipliers;
  for (const auto& r : mm.time_of_day) detail::require_range(r, "multipliers.time_of_day");
  for (const auto& r : mm.weather) detail::require_range(r, "multipliers.weather");
  for (const auto& r : mm.holiday) detail::require_range(r, "multipliers.holiday");
  detail::require_range(mm.regular_day, "multipliers.regular_day");
  for (const auto& r : mm.segment) detail::require_range(r, "multipliers.segment");
}

// ---- JSON mapping -------------------------------------------------------

inline void to_json(nlohmann::json& j, const Range& r) { j = nlohmann::json::array({r.lo, r.hi}); }
inline void from_json(const nlohmann::json& j, Range& r) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("range must be a [lo, hi] pair");
  r.lo = j[0].get<double>();
  r.hi = j[1].get<double>();
}

inline nlohmann::json to_json(const SimConfig& c) {
  using nlohmann::json;
  json j;
  j["start_date"] = c.start_date.iso();
  j["end_date"] = c.end_date.iso();
  j["slots_per_day"] = c.slots_per_day;
  j["seed"] = c.seed;
  for (const auto& p : c.platform_params)
    j["platform_params"][lower(p.name)] = {{"alpha", p.alpha}, {"beta", p.beta}};
  j["noise_mean"] = c.noise_mean;
  j["noise_sd"] = c.noise_sd;
  j["gamma"] = c.gamma;
  j["delta"] = c.delta;
  j["tau"] = c.tau;
  j["z_score"] = c.z_score;
  for (int s = 0; s < 5; ++s)
    j["slot_periods"][std::string(kSlotNames[s])] = to_string(c.slot_periods[s]);
  j["inventory_window_days"] = c.inventory_window_days;

  json hol = json::array();
  for (const auto& h : c.calendar.holidays)
    hol.push_back({{"date", h.date.iso()}, {"importance", to_string(h.importance)},
                   {"name", h.name}});
  j["calendar"] = {{"holidays", hol},
                   {"weather_probabilities", c.calendar.weather_probabilities},
                   {"weather_persistence", c.calendar.weather_persistence},
                   {"segment_probabilities", c.calendar.segment_probabilities},
                   {"segment_probabilities_end", c.calendar.segment_probabilities_end}};

  const auto& pm = c.price_model;
  json bp = json::array();
  for (std::size_t i = 0; i < pm.base_prices.size(); ++i)
    bp.push_back({{"category", pm.base_prices[i].first},
                  {"price", pm.base_prices[i].second},
                  {"weight", i < pm.category_weights.size() ? pm.category_weights[i] : 0.0}});
  j["price_model"] = {{"base_prices", bp},
                      {"gst_multiplier", pm.gst_multiplier},
                      {"platform_fee", {{"zomato", pm.platform_fee[0]}, {"swiggy", pm.platform_fee[1]}}},
                      {"base_delivery_fee",
                       {{"zomato", pm.base_delivery_fee[0]}, {"swiggy", pm.base_delivery_fee[1]}}},
                      {"per_km_rate", {{"zomato", pm.per_km_rate[0]}, {"swiggy", pm.per_km_rate[1]}}},
                      {"small_order_threshold", pm.small_order_threshold},
                      {"small_order_fee", pm.small_order_fee}};

  const auto& lt = c.lead_time_model;
  json bands = json::array();
  for (const auto& b : lt.distance_bands)
    bands.push_back({{"min_km", b.min_km}, {"max_km", b.max_km}, {"a", b.a}, {"b", b.b}});
  json rates;
  for (int p = 0; p < 3; ++p) rates[std::string(kPeriodNames[p])] = lt.arrival_rate_ranges[p];
  j["lead_time_model"] = {{"prep_log_mu", lt.prep_log_mu},
                          {"prep_log_sigma", lt.prep_log_sigma},
                          {"distance_bands", bands},
                          {"arrival_rate_ranges", rates},
                          {"distance_range_km", lt.distance_range_km},
                          {"arrival_window_minutes", lt.arrival_window_minutes}};

  const auto& cy = c.cyclical;
  j["cyclical"] = {{"amplitude", cy.amplitude},
                   {"period", cy.period},
                   {"phase_shift", cy.phase_shift},
                   {"baseline", cy.baseline},
                   {"slot_positions", cy.slot_positions}};

  const auto& mm = c.multipliers;
  json m;
  for (int p = 0; p < 3; ++p) m["time_of_day"][std::string(kPeriodNames[p])] = mm.time_of_day[p];
  for (int w = 0; w < 3; ++w) m["weather"][std::string(kWeatherNames[w])] = mm.weather[w];
  for (int e = 0; e < 4; ++e) m["holiday"][std::string(kEventNames[e])] = mm.holiday[e];
  m["regular_day"] = mm.regular_day;
  for (int s = 0; s < 3; ++s) m["segment"][std::string(kSegmentNames[s])] = mm.segment[s];
  j["multipliers"] = m;
  return j;
}

inline SimConfig sim_config_from_json(const nlohmann::json& j) {
  SimConfig c;
  try {
    c.start_date = Date::parse(j.at("start_date").get<std::string>());
    c.end_date = Date::parse(j.at("end_date").get<std::string>());
    c.slots_per_day = j.at("slots_per_day").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (auto& p : c.platform_params) {
      const auto& pj = j.at("platform_params").at(lower(p.name));
      p.alpha = pj.at("alpha").get<double>();
      p.beta = pj.at("beta").get<double>();
    }
    c.noise_mean = j.at("noise_mean").get<double>();
    c.noise_sd = j.at("noise_sd").get<double>();
    c.gamma = j.at("gamma").get<double>();
    c.delta = j.at("delta").get<double>();
    c.tau = j.at("tau").get<double>();
    c.z_score = j.at("z_score").get<double>();
    for (int s = 0; s < 5; ++s) {
      const auto name = j.at("slot_periods").at(std::string(kSlotNames[s])).get<std::string>();
      c.slot_periods[s] = detail::parse_enum<DemandPeriod>(name, kPeriodNames, "demand period");
    }
    c.inventory_window_days = j.at("inventory_window_days").get<int>();

    const auto& cal = j.at("calendar");
    c.calendar.holidays.clear();
    for (const auto& h : cal.at("holidays"))
      c.calendar.holidays.push_back({Date::parse(h.at("date").get<std::string>()),
                                     parse_event(h.at("importance").get<std::string>()),
                                     h.value("name", std::string{})});
    c.calendar.weather_probabilities =
        cal.at("weather_probabilities").get<std::map<std::string, std::array<double, 3>>>();
    c.calendar.weather_persistence = cal.at("weather_persistence").get<double>();
    c.calendar.segment_probabilities = cal.at("segment_probabilities").get<std::array<double, 3>>();
    c.calendar.segment_probabilities_end =
        cal.at("segment_probabilities_end").get<std::array<double, 3>>();

    const auto& pm = j.at("price_model");
    c.price_model.base_prices.clear();
    c.price_model.category_weights.clear();
    for (const auto& b : pm.at("base_prices")) {
      c.price_model.base_prices.emplace_back(b.at("category").get<std::string>(),
                                             b.at("price").get<double>());
      c.price_model.category_weights.push_back(b.at("weight").get<double>());
    }
    c.price_model.gst_multiplier = pm.at("gst_multiplier").get<double>();
    for (int k = 0; k < 2; ++k) {
      const std::string key = lower(kPlatformNames[k]);
      c.price_model.platform_fee[k] = pm.at("platform_fee").at(key).get<double>();
      c.price_model.base_delivery_fee[k] = pm.at("base_delivery_fee").at(key).get<double>();
      c.price_model.per_km_rate[k] = pm.at("per_km_rate").at(key).get<double>();
    }
    c.price_model.small_order_threshold = pm.at("small_order_threshold").get<double>();
    c.price_model.small_order_fee = pm.at("small_order_fee").get<double>();

    const auto& lt = j.at("lead_time_model");
    c.lead_time_model.prep_log_mu = lt.at("prep_log_mu").get<double>();
    c.lead_time_model.prep_log_sigma = lt.at("prep_log_sigma").get<double>();
    c.lead_time_model.distance_bands.clear();
    for (const auto& b : lt.at("distance_bands"))
      c.lead_time_model.distance_bands.push_back({b.at("min_km").get<double>(),
                                                  b.at("max_km").get<double>(),
                                                  b.at("a").get<double>(), b.at("b").get<double>()});
    for (int p = 0; p < 3; ++p)
      c.lead_time_model.arrival_rate_ranges[p] =
          lt.at("arrival_rate_ranges").at(std::string(kPeriodNames[p])).get<Range>();
    c.lead_time_model.distance_range_km = lt.at("distance_range_km").get<Range>();
    c.lead_time_model.arrival_window_minutes = lt.at("arrival_window_minutes").get<double>();

    const auto& cy = j.at("cyclical");
    c.cyclical.amplitude = cy.at("amplitude").get<double>();
    c.cyclical.period = cy.at("period").get<double>();
    c.cyclical.phase_shift = cy.at("phase_shift").get<double>();
    c.cyclical.baseline = cy.at("baseline").get<double>();
    c.cyclical.slot_positions = cy.at("slot_positions").get<std::array<int, 5>>();

    const auto& m = j.at("multipliers");
    for (int p = 0; p < 3; ++p)
      c.multipliers.time_of_day[p] = m.at("time_of_day").at(std::string(kPeriodNames[p])).get<Range>();
    for (int w = 0; w < 3; ++w)
      c.multipliers.weather[w] = m.at("weather").at(std::string(kWeatherNames[w])).get<Range>();
    for (int e = 0; e < 4; ++e)
      c.multipliers.holiday[e] = m.at("holiday").at(std::string(kEventNames[e])).get<Range>();
    c.multipliers.regular_day = m.at("regular_day").get<Range>();
    for (int s = 0; s < 3; ++s)
      c.multipliers.segment[s] = m.at("segment").at(std::string(kSegmentNames[s])).get<Range>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("simulation config: ") + e.what());
  } catch (const DataError& e) {
    throw ConfigError(std::string("simulation config: ") + e.what());
  }
  return c;
}

namespace detail {
// Rejects keys in `user` that do not exist in `reference`, naming the full path.
inline void check_known_keys(const nlohmann::json& user, const nlohmann::json& reference,
                             const std::string& path) {
  if (!user.is_object() || !reference.is_object()) return;
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string p = path.empty() ? it.key() : path + "." + it.key();
    if (!reference.contains(it.key())) throw ConfigError(p + ": unknown configuration key");
    check_known_keys(it.value(), reference.at(it.key()), p);
  }
}
}  // namespace detail

// Applies a (partial) JSON override on top of `base`. Arrays are replaced
// wholesale. When the date range changes and no holiday list is given, the
// base holidays are clipped to the new range.
inline SimConfig apply_overrides(const SimConfig& base, const nlohmann::json& overrides) {
  nlohmann::json j = to_json(base);
  detail::check_known_keys(overrides, j, "simulation");
  j.merge_patch(overrides);
  SimConfig c = sim_config_from_json(j);
  const bool holidays_given =
      overrides.contains("calendar") && overrides.at("calendar").contains("holidays");
  if (!holidays_given) clip_calendar_to_range(c);
  validate(c);
  return c;
}

}  // namespace ofd
