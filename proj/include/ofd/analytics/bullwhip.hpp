#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofd/core/error.hpp"
#include "ofd/core/stats.hpp"
#include "ofd/inventory/newsvendor.hpp"
#include "ofd/preprocess/windows.hpp"
#include "ofd/sim/dataset.hpp"

namespace ofd {

// Population variance ratio of inventory to demand.
inline double bullwhip(std::span<const double> inventory, std::span<const double> demand) {
  if (inventory.size() < 2 || demand.size() < 2)
    throw DataError("bullwhip: need at least two points in each series");
  const double vd = stats::variance(demand);
  if (vd == 0.0) throw DataError("bullwhip: demand variance is zero");
  return stats::variance(inventory) / vd;
}

inline constexpr std::array<const char*, 3> kSegments{"training", "testing", "predicted"};
inline constexpr std::array<const char*, 3> kScopes{"zomato", "swiggy", "overall"};

struct BullwhipEntry {
  std::string segment;  // training | testing | predicted
  std::string scope;    // zomato | swiggy | overall
  double inventory_variance = 0.0;
  double demand_variance = 0.0;
  double b = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = false;  // demand variance is zero, B undefined
  std::size_t n = 0;
};

struct BullwhipReport {
  int phase = 1;
  std::vector<BullwhipEntry> entries;

  const BullwhipEntry& get(const std::string& segment, const std::string& scope) const {
    for (const auto& e : entries)
      if (e.segment == segment && e.scope == scope) return e;
    throw DataError("bullwhip report: no entry for " + segment + "/" + scope);
  }
  bool degenerate() const {
    for (const auto& e : entries)
      if (e.degenerate) return true;
    return false;
  }
};

// Zomato share of demand over the `window_days` days before `day`, for one
// slot (slot >= 0) or all slots (slot == -1). Falls back to 0.5 without history
// or with zero demand.
inline double trailing_share(const Dataset& ds, std::size_t day, int slot, int window_days) {
  const std::size_t first = day >= static_cast<std::size_t>(window_days) ? day - window_days : 0;
  double z = 0.0, s = 0.0;
  for (std::size_t d = first; d < day; ++d)
    for (int k = 0; k < kSlotsPerDay; ++k) {
      if (slot >= 0 && k != slot) continue;
      z += ds.at(d, k).demand[0];
      s += ds.at(d, k).demand[1];
    }
  return z + s > 0.0 ? z / (z + s) : 0.5;
}

namespace detail {

inline BullwhipEntry make_entry(const std::string& segment, const std::string& scope,
                                const std::vector<double>& inv, const std::vector<double>& dem) {
  BullwhipEntry e;
  e.segment = segment;
  e.scope = scope;
  e.n = inv.size();
  if (inv.size() < 2) throw DataError("bullwhip report: segment " + segment + " has fewer than two points");
  e.inventory_variance = stats::variance(inv);
  e.demand_variance = stats::variance(dem);
  if (e.demand_variance == 0.0) {
    e.degenerate = true;
  } else {
    e.b = e.inventory_variance / e.demand_variance;
  }
  return e;
}

inline std::size_t day_index(const Dataset& ds, const Date& d) {
  const long k = d.days_since(ds.date(0));
  if (k < 0 || static_cast<std::size_t>(k) >= ds.num_days())
    throw DataError("bullwhip report: plan date " + d.iso() + " outside the dataset");
  return static_cast<std::size_t>(k);
}

// Adds the three scope entries for the plan points whose day lies in `range`.
inline void add_segment(BullwhipReport& rep, const std::string& segment, const Dataset& ds,
                        const InventoryPlan& plan, const DayRange& range, int share_window) {
  std::vector<double> inv[3], dem[3];
  for (const auto& p : plan.points) {
    const std::size_t d = day_index(ds, p.date);
    if (d < range.first || d >= range.end()) continue;
    const double share = trailing_share(ds, d, p.slot, share_window);
    double z = 0.0, s = 0.0;
    if (p.slot >= 0) {
      z = ds.at(d, p.slot).demand[0];
      s = ds.at(d, p.slot).demand[1];
    } else {
      for (int k = 0; k < kSlotsPerDay; ++k) {
        z += ds.at(d, k).demand[0] / kSlotsPerDay;
        s += ds.at(d, k).demand[1] / kSlotsPerDay;
      }
    }
    inv[0].push_back(p.q_star * share);
    inv[1].push_back(p.q_star * (1.0 - share));
    inv[2].push_back(p.q_star);
    dem[0].push_back(z);
    dem[1].push_back(s);
    dem[2].push_back(z + s);
  }
  for (int k = 0; k < 3; ++k) rep.entries.push_back(make_entry(segment, kScopes[k], inv[k], dem[k]));
}

}  // namespace detail

// Training and testing use the historical plan over the train and test day
// ranges; predicted uses the forecast plan over the test range. Per-platform
// inventory is the total Q* scaled by the trailing demand share.
inline BullwhipReport bullwhip_report(const Dataset& ds, const SplitBounds& bounds, int phase,
                                      const InventoryPlan& historical, const InventoryPlan& forecast,
                                      int share_window_days = 7) {
  const bool daily = phase == 2;
  const auto hv = daily ? PlanVariant::Daily : PlanVariant::FiveTime;
  const auto fv = daily ? PlanVariant::DailyLstm : PlanVariant::FiveTimeLstm;
  if (historical.variant != hv || forecast.variant != fv)
    throw DataError("bullwhip report: plan variants do not match phase " + std::to_string(phase));
  BullwhipReport rep;
  rep.phase = phase;
  detail::add_segment(rep, "training", ds, historical, bounds.train, share_window_days);
  detail::add_segment(rep, "testing", ds, historical, bounds.test, share_window_days);
  detail::add_segment(rep, "predicted", ds, forecast, bounds.test, share_window_days);
  return rep;
}

inline nlohmann::json to_json(const BullwhipReport& r) {
  nlohmann::json j;
  j["phase"] = r.phase;
  j["degenerate"] = r.degenerate();
  for (const auto& e : r.entries)
    j["segments"][e.segment][e.scope] = {
        {"B", e.degenerate ? nlohmann::json(nullptr) : nlohmann::json(e.b)},
        {"inventory_variance", e.inventory_variance},
        {"demand_variance", e.demand_variance},
        {"n", e.n},
        {"degenerate", e.degenerate}};
  return j;
}

}  // namespace ofd
