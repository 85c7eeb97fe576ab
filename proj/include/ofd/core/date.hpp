#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "ofd/core/error.hpp"

namespace ofd {

// Calendar day backed by std::chrono::sys_days.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::sys_days d) : days_(d) {}
  Date(int y, unsigned m, unsigned d) {
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) throw DataError("invalid calendar date");
    days_ = std::chrono::sys_days{ymd};
  }

  static Date parse(std::string_view iso) {
    int y = 0;
    unsigned m = 0, d = 0;
    std::string s(iso);
    char tail = 0;
    if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3)
      throw DataError("invalid ISO date '" + s + "'");
    return Date(y, m, d);
  }

  std::string iso() const {
    const auto ymd = year_month_day();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

  std::chrono::year_month_day year_month_day() const {
    return std::chrono::year_month_day{days_};
  }
  int year() const { return static_cast<int>(year_month_day().year()); }
  unsigned month() const { return static_cast<unsigned>(year_month_day().month()); }
  unsigned day() const { return static_cast<unsigned>(year_month_day().day()); }

  // ISO weekday: Monday = 1 ... Sunday = 7.
  unsigned iso_weekday() const {
    return std::chrono::weekday{days_}.iso_encoding();
  }

  std::string weekday_name() const {
    static constexpr const char* kNames[] = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                             "Friday", "Saturday", "Sunday"};
    return kNames[iso_weekday() - 1];
  }

  Date plus_days(long n) const { return Date(days_ + std::chrono::days{n}); }
  long days_since(const Date& other) const { return (days_ - other.days_).count(); }

  auto operator<=>(const Date&) const = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace ofd
