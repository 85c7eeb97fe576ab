#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "ofd/core/error.hpp"

namespace ofd {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Stable seed for a named sub-stream of a master seed. Adding a new name
// never changes the seeds of existing names.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  return splitmix64(master ^ splitmix64(fnv1a64(name)));
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}
  RandomStream(std::uint64_t master, std::string_view name)
      : engine_(derive_seed(master, name)) {}

  std::mt19937_64& engine() { return engine_; }

  // Uniform on [a, b]; returns a exactly when a == b.
  double uniform(double a, double b) {
    if (a == b) return a;
    return a + (b - a) * unit();
  }

  // Uniform on [0, 1).
  double unit() { return std::generate_canonical<double, 53>(engine_); }

  double normal(double mean, double sd) {
    if (sd == 0.0) return mean;
    return std::normal_distribution<double>(mean, sd)(engine_);
  }

  double lognormal(double log_mu, double log_sigma) {
    return std::exp(normal(log_mu, log_sigma));
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw ConfigError("exponential rate must be positive");
    return std::exponential_distribution<double>(rate)(engine_);
  }

  bool bernoulli(double p) { return unit() < p; }

  // Index drawn from a categorical distribution given by (unnormalized) weights.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = unit() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    for (std::size_t i = weights.size(); i-- > 0;)
      if (weights[i] > 0.0) return i;
    return 0;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ofd
