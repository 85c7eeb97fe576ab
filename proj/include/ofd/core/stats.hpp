#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ofd/core/error.hpp"

namespace ofd::stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw DataError("mean of empty series");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Population (divide-by-N) variance.
inline double variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

inline double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

// Population covariance.
inline double covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("covariance: length mismatch");
  const double ma = mean(a), mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size());
}

inline std::vector<double> add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("add: length mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace ofd::stats
