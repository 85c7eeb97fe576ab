#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ofd/sim/dataset.hpp"

namespace ofd::testing {

// A structurally valid dataset whose demands come from `demand(day, slot, platform)`.
inline Dataset synthetic_dataset(std::size_t days,
                                 const std::function<double(std::size_t, int, int)>& demand,
                                 Date start = Date(2024, 1, 1)) {
  std::vector<DemandRecord> rows;
  for (std::size_t d = 0; d < days; ++d) {
    const Date date = start.plus_days(static_cast<long>(d));
    for (int k = 0; k < kSlotsPerDay; ++k) {
      DemandRecord r;
      r.week_index = static_cast<int>(d / 7) + 1;
      r.date = date;
      r.day_of_week = date.weekday_name();
      r.time_slot = static_cast<TimeSlot>(k);
      r.food_category = (d + static_cast<std::size_t>(k)) % 2 == 0 ? "Burger" : "Pizza";
      for (int p = 0; p < 2; ++p) {
        r.demand[p] = demand(d, k, p);
        r.price[p] = 200.0 + 10.0 * k + static_cast<double>(d % 3) + p;
        r.lead_time[p] = 40.0 + static_cast<double>((d + static_cast<std::size_t>(k)) % 5) + p;
        r.distance[p] = 3.0 + static_cast<double>((d * 7 + static_cast<std::size_t>(k)) % 10);
      }
      r.weather = static_cast<Weather>(d % 3);
      r.event_importance = d % 11 == 0 ? EventImportance::High : EventImportance::None;
      r.public_holiday = d % 11 == 0;
      r.order_arrival_rate = 2.0;
      rows.push_back(r);
    }
  }
  return Dataset(std::move(rows));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ofd_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace ofd::testing
