#pragma once

#include <algorithm>
#include <cstdint>
#include <random>

namespace dca {

/// The single source of randomness for a run. Everything stochastic takes a
/// reference to one of these; identical seeds and inputs give identical runs.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform real in [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Uniform real in [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  bool bernoulli(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform() < p;
  }

  double normal(double mean, double stddev) {
    if (stddev <= 0.0) return mean;
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
  }

  /// Fresh 64-bit seed for a derived generator.
  std::uint64_t next_seed() { return engine_(); }

  template <typename Range>
  void shuffle(Range& r) {
    std::shuffle(std::begin(r), std::end(r), engine_);
  }

 private:
  Engine engine_;
};

}  // namespace dca
