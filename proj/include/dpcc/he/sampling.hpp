// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace dpcc::he {

/// Seeded randomness for key material and encryption. Only raw 64-bit outputs of
/// mt19937_64 are consumed, so streams are identical on every standard library.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound) by rejection on the enclosing power of two.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const int shift = __builtin_clzll(bound - 1);
    const std::uint64_t mask = ~std::uint64_t{0} >> shift;
    for (;;) {
      const std::uint64_t x = next() & mask;
      if (x < bound) return x;
    }
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::int64_t ternary() { return static_cast<std::int64_t>(uniform(3)) - 1; }

  /// Centered discrete Gaussian on [-tail, tail], tail = ceil(6*stddev), by rejection against
  /// a table of unnormalised probabilities.
  std::int64_t gaussian(double stddev) {
    if (stddev != table_stddev_) build_table(stddev);
    const std::uint64_t width = 2 * static_cast<std::uint64_t>(tail_) + 1;
    for (;;) {
      const std::int64_t x = static_cast<std::int64_t>(uniform(width)) - tail_;
      if (unit() < table_[static_cast<std::size_t>(x < 0 ? -x : x)]) return x;
    }
  }

  static std::int64_t gaussian_tail(double stddev) {
    return static_cast<std::int64_t>(std::ceil(6.0 * stddev));
  }

 private:
  void build_table(double stddev) {
    table_stddev_ = stddev;
    tail_ = gaussian_tail(stddev);
    table_.assign(static_cast<std::size_t>(tail_) + 1, 0.0);
    for (std::int64_t i = 0; i <= tail_; ++i) {
      table_[static_cast<std::size_t>(i)] =
          std::exp(-static_cast<double>(i * i) / (2.0 * stddev * stddev));
    }
  }

  std::mt19937_64 engine_;
  double table_stddev_ = -1.0;
  std::int64_t tail_ = 0;
  std::vector<double> table_;
};

}  // namespace dpcc::he
