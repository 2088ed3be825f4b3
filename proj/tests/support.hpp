// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the unit tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dpcc/he/ckks.hpp"
#include "dpcc/he/context.hpp"
#include "dpcc/he/params.hpp"

namespace dpcc::testing {

/// Small ring, three data primes (depth 2) and a special prime.
inline he::HeParams toy_params(std::size_t ring_dim = 16, int scale_bits = 25) {
  return he::HeParams::from_bit_sizes(ring_dim, {40, scale_bits, scale_bits}, 44, scale_bits);
}

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                          double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

/// Centered coefficients of a data polynomial in either representation.
inline std::vector<he::i128> centered(const he::HeContext& ctx, he::RingPoly p) {
  if (p.with_special) p = ctx.restrict_to(p, p.level);
  if (p.ntt_form) ctx.from_ntt(p);
  return ctx.centered_coefficients(p);
}

inline double abs128(he::i128 x) { return static_cast<double>(x < 0 ? -x : x); }

}  // namespace dpcc::testing
