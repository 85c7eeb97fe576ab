#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ofd/core/date.hpp"
#include "ofd/core/error.hpp"
#include "ofd/core/text.hpp"
#include "ofd/preprocess/scaler.hpp"
#include "ofd/sim/dataset.hpp"

namespace ofd {

// Dense [samples x timesteps x features] tensor, row-major.
struct Tensor3 {
  std::size_t samples = 0;
  std::size_t timesteps = 0;
  std::size_t features = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(std::size_t n, std::size_t t, std::size_t f)
      : samples(n), timesteps(t), features(f), data(n * t * f, 0.0) {}

  double& operator()(std::size_t i, std::size_t t, std::size_t f) {
    return data[(i * timesteps + t) * features + f];
  }
  double operator()(std::size_t i, std::size_t t, std::size_t f) const {
    return data[(i * timesteps + t) * features + f];
  }
};

struct WindowedDataset {
  int phase = 1;
  Tensor3 X;
  RowMatrix Y;                      // samples x outputs
  std::vector<Date> timestamps;     // target day of each sample
  std::vector<std::string> feature_names;

  std::size_t samples() const { return X.samples; }
  std::size_t outputs() const { return static_cast<std::size_t>(Y.cols()); }
};

inline double daily_average(std::span<const double> day_slots) {
  if (day_slots.size() != kSlotsPerDay)
    throw DataError("daily_average: expected 5 slot values, got " +
                    std::to_string(day_slots.size()));
  double s = 0.0;
  for (double v : day_slots) s += v;
  return s / kSlotsPerDay;
}

// Phase 1: each sample's input is the 5n slot vectors of the n days before the
// target day; its output is the target day's five slot demands. When
// `day_covariates` is non-empty, the target day's row is appended to every
// timestep of that sample.
//   slot_features: (days*5) x F, slot_targets: days*5, day_covariates: days x C.
inline WindowedDataset window_phase1(const RowMatrix& slot_features,
                                     std::span<const double> slot_targets, int n,
                                     std::span<const Date> dates,
                                     const RowMatrix& day_covariates = RowMatrix(),
                                     std::vector<std::string> feature_names = {}) {
  if (n < 1) throw DataError("window_phase1: n must be >= 1");
  const std::size_t rows = static_cast<std::size_t>(slot_features.rows());
  if (rows % kSlotsPerDay != 0 || slot_targets.size() != rows)
    throw DataError("window_phase1: features and targets must cover whole days");
  const std::size_t days = rows / kSlotsPerDay;
  if (dates.size() != days) throw DataError("window_phase1: one date per day required");
  const bool cov = day_covariates.size() > 0;
  if (cov && static_cast<std::size_t>(day_covariates.rows()) != days)
    throw DataError("window_phase1: one covariate row per day required");
  const std::size_t F = static_cast<std::size_t>(slot_features.cols());
  const std::size_t C = cov ? static_cast<std::size_t>(day_covariates.cols()) : 0;
  const std::size_t samples = days > static_cast<std::size_t>(n) ? days - n : 0;
  const std::size_t T = static_cast<std::size_t>(n) * kSlotsPerDay;

  WindowedDataset w;
  w.phase = 1;
  w.X = Tensor3(samples, T, F + C);
  w.Y = RowMatrix::Zero(static_cast<Eigen::Index>(samples), kSlotsPerDay);
  w.feature_names = std::move(feature_names);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t target = i + n;
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t row = i * kSlotsPerDay + t;
      for (std::size_t f = 0; f < F; ++f) w.X(i, t, f) = slot_features(row, f);
      for (std::size_t c = 0; c < C; ++c) w.X(i, t, F + c) = day_covariates(target, c);
    }
    for (int k = 0; k < kSlotsPerDay; ++k)
      w.Y(i, k) = slot_targets[target * kSlotsPerDay + k];
    w.timestamps.push_back(dates[target]);
  }
  return w;
}

// Phase 2: six consecutive daily rows in, the following day's value out.
inline constexpr int kPhase2Window = 6;

inline WindowedDataset window_phase2(const RowMatrix& daily_features,
                                     std::span<const double> daily_targets,
                                     std::span<const Date> dates,
                                     const RowMatrix& day_covariates = RowMatrix(),
                                     std::vector<std::string> feature_names = {}) {
  const std::size_t days = static_cast<std::size_t>(daily_features.rows());
  if (daily_targets.size() != days || dates.size() != days)
    throw DataError("window_phase2: features, targets and dates must have equal length");
  const bool cov = day_covariates.size() > 0;
  if (cov && static_cast<std::size_t>(day_covariates.rows()) != days)
    throw DataError("window_phase2: one covariate row per day required");
  const std::size_t F = static_cast<std::size_t>(daily_features.cols());
  const std::size_t C = cov ? static_cast<std::size_t>(day_covariates.cols()) : 0;
  if (days <= kPhase2Window)
    throw DataError("window_phase2: need at least 7 days, got " + std::to_string(days));
  const std::size_t samples = days - kPhase2Window;

  WindowedDataset w;
  w.phase = 2;
  w.X = Tensor3(samples, kPhase2Window, F + C);
  w.Y = RowMatrix::Zero(static_cast<Eigen::Index>(samples), 1);
  w.feature_names = std::move(feature_names);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t target = i + kPhase2Window;
    for (std::size_t t = 0; t < kPhase2Window; ++t) {
      for (std::size_t f = 0; f < F; ++f) w.X(i, t, f) = daily_features(i + t, f);
      for (std::size_t c = 0; c < C; ++c) w.X(i, t, F + c) = day_covariates(target, c);
    }
    w.Y(i, 0) = daily_targets[target];
    w.timestamps.push_back(dates[target]);
  }
  return w;
}

struct SplitSpec {
  double train_fraction = 0.70;
  double validation_fraction = 0.15;
  double test_fraction = 0.15;
};

struct DayRange {
  std::size_t first = 0;
  std::size_t count = 0;
  std::size_t end() const { return first + count; }
};

struct SplitBounds {
  DayRange train, validation, test;
  Date train_start, validation_start, test_start, test_end;
};

inline void validate(const SplitSpec& s) {
  for (double f : {s.train_fraction, s.validation_fraction, s.test_fraction})
    if (!(f > 0.0 && f < 1.0)) throw ConfigError("split: fractions must lie in (0, 1)");
  if (std::abs(s.train_fraction + s.validation_fraction + s.test_fraction - 1.0) > 1e-9)
    throw ConfigError("split: fractions must sum to 1");
}

// Day-count partition floor(train*D) / floor(validation*D) / remainder.
// `min_days` is the smallest segment that still yields one window.
inline SplitBounds chronological_split(const Dataset& ds, const SplitSpec& spec,
                                       std::size_t min_days = 1) {
  validate(spec);
  const std::size_t D = ds.num_days();
  const auto ntr = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(D) + 1e-9));
  const auto nva = static_cast<std::size_t>(std::floor(spec.validation_fraction * static_cast<double>(D) + 1e-9));
  if (ntr + nva > D) throw DataError("split: fractions exceed the dataset");
  SplitBounds b;
  b.train = {0, ntr};
  b.validation = {ntr, nva};
  b.test = {ntr + nva, D - ntr - nva};
  for (const auto* seg : {&b.train, &b.validation, &b.test})
    if (seg->count < min_days)
      throw DataError("split: a segment has " + std::to_string(seg->count) +
                      " days, fewer than the " + std::to_string(min_days) +
                      " needed for one window");
  b.train_start = ds.date(0);
  b.validation_start = ds.date(b.validation.first);
  b.test_start = ds.date(b.test.first);
  b.test_end = ds.date(D - 1);
  return b;
}

// ---- serialization ------------------------------------------------------

namespace detail {
template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw DataError("windowed tensor file is truncated");
  return v;
}
inline constexpr char kTensorMagic[4] = {'O', 'F', 'D', 'W'};
inline constexpr std::uint32_t kTensorVersion = 1;
}  // namespace detail

// Binary container: magic, version, phase, shapes, feature names, timestamps,
// then X and Y as row-major little-endian float64.
inline void write_windowed(const WindowedDataset& w, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(detail::kTensorMagic, 4);
  detail::put<std::uint32_t>(out, detail::kTensorVersion);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(w.phase));
  detail::put<std::uint64_t>(out, w.X.samples);
  detail::put<std::uint64_t>(out, w.X.timesteps);
  detail::put<std::uint64_t>(out, w.X.features);
  detail::put<std::uint64_t>(out, static_cast<std::uint64_t>(w.Y.cols()));
  detail::put<std::uint64_t>(out, w.feature_names.size());
  for (const auto& n : w.feature_names) {
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(n.size()));
    out.write(n.data(), static_cast<std::streamsize>(n.size()));
  }
  for (const auto& d : w.timestamps) {
    const auto s = d.iso();
    out.write(s.data(), 10);
  }
  out.write(reinterpret_cast<const char*>(w.X.data.data()),
            static_cast<std::streamsize>(w.X.data.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(w.Y.data()),
            static_cast<std::streamsize>(w.Y.size() * sizeof(double)));
  if (!out) throw DataError("write failed for " + path.string());
}

inline WindowedDataset read_windowed(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, detail::kTensorMagic, 4) != 0)
    throw DataError(path.string() + ": not a windowed tensor file");
  if (detail::get<std::uint32_t>(in) != detail::kTensorVersion)
    throw DataError(path.string() + ": unsupported tensor file version");
  WindowedDataset w;
  w.phase = static_cast<int>(detail::get<std::uint32_t>(in));
  const auto n = detail::get<std::uint64_t>(in);
  const auto t = detail::get<std::uint64_t>(in);
  const auto f = detail::get<std::uint64_t>(in);
  const auto o = detail::get<std::uint64_t>(in);
  const auto names = detail::get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < names; ++i) {
    const auto len = detail::get<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    w.feature_names.push_back(std::move(s));
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    char buf[10];
    in.read(buf, 10);
    if (!in) throw DataError(path.string() + ": truncated timestamps");
    w.timestamps.push_back(Date::parse(std::string_view(buf, 10)));
  }
  w.X = Tensor3(n, t, f);
  in.read(reinterpret_cast<char*>(w.X.data.data()),
          static_cast<std::streamsize>(w.X.data.size() * sizeof(double)));
  w.Y = RowMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(o));
  in.read(reinterpret_cast<char*>(w.Y.data()),
          static_cast<std::streamsize>(w.Y.size() * sizeof(double)));
  if (!in) throw DataError(path.string() + ": truncated tensor data");
  return w;
}

// One CSV row per (sample, timestep); targets repeated on each row.
inline std::string windowed_to_csv(const WindowedDataset& w) {
  std::ostringstream out;
  out << "sample,target_date,timestep";
  for (std::size_t f = 0; f < w.X.features; ++f)
    out << ',' << (f < w.feature_names.size() ? w.feature_names[f] : "f" + std::to_string(f));
  for (Eigen::Index o = 0; o < w.Y.cols(); ++o) out << ",y" << o;
  out << '\n';
  for (std::size_t i = 0; i < w.X.samples; ++i)
    for (std::size_t t = 0; t < w.X.timesteps; ++t) {
      out << i << ',' << w.timestamps[i].iso() << ',' << t;
      for (std::size_t f = 0; f < w.X.features; ++f) out << ',' << format_exact(w.X(i, t, f));
      for (Eigen::Index o = 0; o < w.Y.cols(); ++o)
        out << ',' << format_exact(w.Y(static_cast<Eigen::Index>(i), o));
      out << '\n';
    }
  return out.str();
}

}  // namespace ofd
