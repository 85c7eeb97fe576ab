#pragma once

#include <array>
#include <string>
#include <string_view>

#include "ofd/core/error.hpp"

namespace ofd {

enum class Platform { Zomato = 0, Swiggy = 1 };
enum class TimeSlot { Morning = 0, Noon, Evening, Night, Midnight };
enum class Weather { Clear = 0, Mild, Extreme };
enum class EventImportance { None = 0, Low, Medium, High };
enum class CustomerSegment { Mismatched = 0, General, Loyal };
enum class DemandPeriod { Peak = 0, Standard, LateNight };

inline constexpr int kSlotsPerDay = 5;
inline constexpr std::array<Platform, 2> kPlatforms{Platform::Zomato, Platform::Swiggy};
inline constexpr std::array<TimeSlot, 5> kSlots{TimeSlot::Morning, TimeSlot::Noon,
                                                TimeSlot::Evening, TimeSlot::Night,
                                                TimeSlot::Midnight};

namespace detail {
template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::string_view, N>& names,
             std::string_view what) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<E>(i);
  throw DataError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}
}  // namespace detail

inline constexpr std::array<std::string_view, 2> kPlatformNames{"Zomato", "Swiggy"};
inline constexpr std::array<std::string_view, 5> kSlotNames{"Morning", "Noon", "Evening",
                                                            "Night", "Midnight"};
inline constexpr std::array<std::string_view, 3> kWeatherNames{"Clear", "Mild", "Extreme"};
inline constexpr std::array<std::string_view, 4> kEventNames{"None", "Low", "Medium", "High"};
inline constexpr std::array<std::string_view, 3> kSegmentNames{"Mismatched", "General",
                                                               "Loyal"};
inline constexpr std::array<std::string_view, 3> kPeriodNames{"peak", "standard",
                                                              "late_night"};

inline std::string to_string(Platform v) { return std::string(kPlatformNames[int(v)]); }
inline std::string to_string(TimeSlot v) { return std::string(kSlotNames[int(v)]); }
inline std::string to_string(Weather v) { return std::string(kWeatherNames[int(v)]); }
inline std::string to_string(EventImportance v) { return std::string(kEventNames[int(v)]); }
inline std::string to_string(CustomerSegment v) { return std::string(kSegmentNames[int(v)]); }
inline std::string to_string(DemandPeriod v) { return std::string(kPeriodNames[int(v)]); }

inline Platform parse_platform(std::string_view s) {
  // Accept lower case too, since the CLI takes platform names as flags.
  if (s == "zomato") return Platform::Zomato;
  if (s == "swiggy") return Platform::Swiggy;
  return detail::parse_enum<Platform>(s, kPlatformNames, "platform");
}
inline TimeSlot parse_slot(std::string_view s) {
  return detail::parse_enum<TimeSlot>(s, kSlotNames, "time slot");
}
inline Weather parse_weather(std::string_view s) {
  return detail::parse_enum<Weather>(s, kWeatherNames, "weather");
}
inline EventImportance parse_event(std::string_view s) {
  return detail::parse_enum<EventImportance>(s, kEventNames, "event importance");
}
inline CustomerSegment parse_segment(std::string_view s) {
  return detail::parse_enum<CustomerSegment>(s, kSegmentNames, "customer segment");
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// Breakfast and late-evening slots are standard periods, lunch and dinner are
// peaks, and the post-midnight slot is the late-night period.
inline DemandPeriod default_period(TimeSlot s) {
  switch (s) {
    case TimeSlot::Noon:
    case TimeSlot::Evening:
      return DemandPeriod::Peak;
    case TimeSlot::Midnight:
      return DemandPeriod::LateNight;
    default:
      return DemandPeriod::Standard;
  }
}

}  // namespace ofd
