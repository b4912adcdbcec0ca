#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace mlnetreg::rng {

/// SplitMix64 finalizer: bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t z);

/**
 * Derives an independent stream seed from a master seed and a path of ids
 * (e.g. {n_nodes, rep_index, role}). Each id is folded through mix64, so
 * distinct paths give unrelated streams and the mapping is platform-stable.
 */
std::uint64_t derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/**
 * Counter-based SplitMix64 generator with explicit sampling routines.
 *
 * All distributions are implemented on top of the raw 64-bit output
 * (Box-Muller for normals), so sequences are bit-reproducible for a given
 * seed independent of the standard library.
 */
class Engine {
 public:
  explicit Engine(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard exponential via inversion; uniform01() < 1 keeps the log finite.
  double exponential() { return -std::log(1.0 - uniform01()); }

  /// Normal(mean, sd) via Box-Muller; generates pairs, caches the spare.
  double normal(double mean = 0.0, double sd = 1.0);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mlnetreg::rng
