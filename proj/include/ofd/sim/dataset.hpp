#pragma once

#include <array>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "ofd/core/date.hpp"
#include "ofd/core/error.hpp"
#include "ofd/core/text.hpp"
#include "ofd/sim/types.hpp"

namespace ofd {

struct DemandRecord {
  int week_index = 1;
  Date date;
  std::string day_of_week;
  TimeSlot time_slot = TimeSlot::Morning;
  std::string food_category;
  std::array<double, 2> price{};       // indexed by Platform
  std::array<double, 2> demand{};
  std::array<double, 2> lead_time{};   // minutes
  std::array<double, 2> distance{};    // km
  double supplier_inventory = 0.0;
  bool public_holiday = false;
  EventImportance event_importance = EventImportance::None;
  Weather weather = Weather::Clear;
  CustomerSegment customer_segment = CustomerSegment::General;
  double order_arrival_rate = 0.0;     // orders per minute
};

inline constexpr std::array<const char*, 19> kDatasetColumns{
    "week_index",       "date",           "day_of_week",        "time_slot",
    "food_category",    "price_zomato",   "price_swiggy",       "demand_zomato",
    "demand_swiggy",    "lead_time_zomato", "lead_time_swiggy", "distance_zomato",
    "distance_swiggy",  "supplier_inventory", "public_holiday", "event_importance",
    "weather_condition", "customer_segment", "order_arrival_rate"};

// Rows ordered by (date, slot), five rows per day.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<DemandRecord> rows) : rows_(std::move(rows)) { check_shape(); }

  const std::vector<DemandRecord>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  std::size_t num_days() const { return rows_.size() / kSlotsPerDay; }

  const DemandRecord& at(std::size_t day, int slot) const {
    return rows_.at(day * kSlotsPerDay + static_cast<std::size_t>(slot));
  }
  Date date(std::size_t day) const { return at(day, 0).date; }

  // Contiguous day range [first, first + count).
  Dataset slice_days(std::size_t first, std::size_t count) const {
    if (first + count > num_days()) throw DataError("slice_days: range exceeds dataset");
    return Dataset(std::vector<DemandRecord>(
        rows_.begin() + static_cast<long>(first * kSlotsPerDay),
        rows_.begin() + static_cast<long>((first + count) * kSlotsPerDay)));
  }

  // Slot-level demand series in (date, slot) order.
  std::vector<double> demand_series(Platform p) const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.demand[int(p)]);
    return out;
  }

  std::vector<double> total_demand_series() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.demand[0] + r.demand[1]);
    return out;
  }

  // Mean of the five slot demands of each day.
  std::vector<double> daily_average_series(Platform p) const {
    std::vector<double> out(num_days());
    for (std::size_t d = 0; d < num_days(); ++d) {
      double s = 0.0;
      for (int k = 0; k < kSlotsPerDay; ++k) s += at(d, k).demand[int(p)];
      out[d] = s / kSlotsPerDay;
    }
    return out;
  }

 private:
  void check_shape() const {
    if (rows_.size() % kSlotsPerDay != 0)
      throw DataError("dataset row count " + std::to_string(rows_.size()) +
                      " is not a multiple of 5");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto& r = rows_[i];
      if (int(r.time_slot) != static_cast<int>(i % kSlotsPerDay))
        throw DataError("row " + std::to_string(i + 1) + ": slots out of order");
      if (i % kSlotsPerDay != 0 && r.date != rows_[i - 1].date)
        throw DataError("row " + std::to_string(i + 1) + ": day has fewer than 5 slots");
      if (i >= kSlotsPerDay && i % kSlotsPerDay == 0 &&
          r.date.days_since(rows_[i - 1].date) != 1)
        throw DataError("row " + std::to_string(i + 1) + ": dates are not consecutive");
    }
  }

  std::vector<DemandRecord> rows_;
};

inline std::string to_csv(const Dataset& ds) {
  std::ostringstream out;
  for (std::size_t c = 0; c < kDatasetColumns.size(); ++c)
    out << (c ? "," : "") << kDatasetColumns[c];
  out << '\n';
  auto f = [](double x) { return format_decimal(x, 6); };
  for (const auto& r : ds.rows()) {
    out << r.week_index << ',' << r.date.iso() << ',' << r.day_of_week << ','
        << to_string(r.time_slot) << ',' << r.food_category << ',' << f(r.price[0]) << ','
        << f(r.price[1]) << ',' << f(r.demand[0]) << ',' << f(r.demand[1]) << ','
        << f(r.lead_time[0]) << ',' << f(r.lead_time[1]) << ',' << f(r.distance[0]) << ','
        << f(r.distance[1]) << ',' << f(r.supplier_inventory) << ','
        << (r.public_holiday ? 1 : 0) << ',' << to_string(r.event_importance) << ','
        << to_string(r.weather) << ',' << to_string(r.customer_segment) << ','
        << f(r.order_arrival_rate) << '\n';
  }
  return out.str();
}

inline void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  write_file(path, to_csv(ds));
}

// Parses the 19-column CSV. Errors name the offending line and column.
inline Dataset parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("line 1: empty dataset file");
  const auto header = split_csv_line(line);
  if (header.size() != kDatasetColumns.size())
    throw DataError("line 1: expected 19 columns, found " + std::to_string(header.size()));
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] != kDatasetColumns[c])
      throw DataError("line 1, column " + std::to_string(c + 1) + ": expected header '" +
                      kDatasetColumns[c] + "', found '" + header[c] + "'");

  std::vector<DemandRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    const std::string where = "line " + std::to_string(lineno);
    if (f.size() != kDatasetColumns.size())
      throw DataError(where + ": expected 19 columns, found " + std::to_string(f.size()));
    std::size_t col = 0;
    try {
      DemandRecord r;
      r.week_index = static_cast<int>(parse_int(f[col = 0]));
      r.date = Date::parse(f[col = 1]);
      r.day_of_week = f[col = 2];
      r.time_slot = parse_slot(f[col = 3]);
      r.food_category = f[col = 4];
      r.price[0] = parse_double(f[col = 5]);
      r.price[1] = parse_double(f[col = 6]);
      r.demand[0] = parse_double(f[col = 7]);
      r.demand[1] = parse_double(f[col = 8]);
      r.lead_time[0] = parse_double(f[col = 9]);
      r.lead_time[1] = parse_double(f[col = 10]);
      r.distance[0] = parse_double(f[col = 11]);
      r.distance[1] = parse_double(f[col = 12]);
      r.supplier_inventory = parse_double(f[col = 13]);
      const auto hol = parse_int(f[col = 14]);
      if (hol != 0 && hol != 1) throw DataError("public_holiday must be 0 or 1");
      r.public_holiday = hol == 1;
      r.event_importance = parse_event(f[col = 15]);
      r.weather = parse_weather(f[col = 16]);
      r.customer_segment = parse_segment(f[col = 17]);
      r.order_arrival_rate = parse_double(f[col = 18]);
      rows.push_back(std::move(r));
    } catch (const DataError& e) {
      throw DataError(where + ", column " + std::to_string(col + 1) + " (" +
                      kDatasetColumns[col] + "): " + e.what());
    }
  }
  try {
    return Dataset(std::move(rows));
  } catch (const DataError& e) {
    throw DataError(std::string("dataset structure: ") + e.what());
  }
}

inline Dataset read_dataset_csv(const std::filesystem::path& path) {
  return parse_dataset_csv(read_file(path));
}

}  // namespace ofd
