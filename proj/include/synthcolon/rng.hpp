#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace synthcolon {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Random stream keyed by (global seed, sample index, purpose label, attempt).
///
/// Each key component is folded through splitmix64 so that neighbouring
/// indices or labels do not produce correlated mt19937_64 seeds. Two streams
/// with the same key replay the same draws; any differing component yields an
/// independent stream.
class SeededRng {
 public:
  SeededRng(std::uint64_t global_seed, std::uint64_t sample_index, std::string_view label,
            std::uint64_t attempt = 0)
      : engine_(derive_seed(global_seed, sample_index, label, attempt)) {}

  static constexpr std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t sample_index,
                                             std::string_view label, std::uint64_t attempt) {
    std::uint64_t h = splitmix64(global_seed);
    h = splitmix64(h ^ sample_index);
    h = splitmix64(h ^ fnv1a64(label));
    h = splitmix64(h ^ attempt);
    return h;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  double normal(double mean, double sigma) {
    if (sigma == 0.0) {
      return mean;
    }
    return std::normal_distribution<double>(mean, sigma)(engine_);
  }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace synthcolon
