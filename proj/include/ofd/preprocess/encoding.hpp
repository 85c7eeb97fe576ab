#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ofd/core/error.hpp"
#include "ofd/sim/types.hpp"

namespace ofd {

inline std::vector<double> one_hot_encode(const std::string& value,
                                          const std::vector<std::string>& categories) {
  const auto it = std::find(categories.begin(), categories.end(), value);
  if (it == categories.end()) throw DataError("one_hot_encode: unknown category '" + value + "'");
  std::vector<double> out(categories.size(), 0.0);
  out[static_cast<std::size_t>(it - categories.begin())] = 1.0;
  return out;
}

// Index of the largest component; inverse of one_hot_encode.
inline std::size_t one_hot_decode(const std::vector<double>& v) {
  if (v.empty()) throw DataError("one_hot_decode: empty vector");
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

inline int ordinal_encode_event(EventImportance e) {
  switch (e) {
    case EventImportance::High: return 2;
    case EventImportance::Medium: return 1;
    default: return 0;
  }
}

inline std::vector<std::string> weather_categories() {
  return {kWeatherNames.begin(), kWeatherNames.end()};
}

}  // namespace ofd
