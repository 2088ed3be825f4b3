// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace dpcc::he {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// A word-sized prime modulus (< 2^62) with precomputed Barrett constants.
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(u64 value);

  u64 value() const noexcept { return value_; }
  int bits() const noexcept { return bits_; }

  /// x mod q for any 128-bit x < q^2 * 4.
  u64 reduce(u128 x) const noexcept {
    // Barrett: qhat = ((x >> (b-1)) * mu) >> (b+1), r = x - qhat*q < 3q.
    const u128 t = (x >> (bits_ - 1)) * static_cast<u128>(mu_);
    const u64 qhat = static_cast<u64>(t >> (bits_ + 1));
    u64 r = static_cast<u64>(x - static_cast<u128>(qhat) * value_);
    while (r >= value_) r -= value_;
    return r;
  }

  /// x mod q for any 64-bit x (single-word Barrett, one correction).
  u64 reduce_u64(u64 x) const noexcept {
    const u64 qhat = static_cast<u64>((static_cast<u128>(x) * mu64_) >> 64);
    const u64 r = x - qhat * value_;
    return r >= value_ ? r - value_ : r;
  }

  u64 mul(u64 a, u64 b) const noexcept { return reduce(static_cast<u128>(a) * b); }

  u64 add(u64 a, u64 b) const noexcept {
    const u64 s = a + b;
    return s >= value_ ? s - value_ : s;
  }

  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + value_ - b; }

  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : value_ - a; }

  /// Signed integer lifted into [0, q).
  u64 from_signed(std::int64_t x) const noexcept {
    return x >= 0 ? reduce_u64(static_cast<u64>(x))
                  : neg(reduce_u64(u64{0} - static_cast<u64>(x)));
  }

  u64 pow(u64 base, u64 exp) const noexcept;
  u64 inv(u64 a) const;

 private:
  u64 value_ = 0;
  u64 mu_ = 0;
  u64 mu64_ = 0;  // floor(2^64 / q)
  int bits_ = 0;
};

/// Shoup precomputation for multiplying many values by a fixed w.
inline u64 shoup_precompute(u64 w, u64 q) noexcept {
  return static_cast<u64>((static_cast<u128>(w) << 64) / q);
}

/// a * w mod q, result in [0, q). Requires q < 2^63 and a < 2^64.
inline u64 mul_shoup(u64 a, u64 w, u64 w_shoup, u64 q) noexcept {
  const u64 qhat = static_cast<u64>((static_cast<u128>(a) * w_shoup) >> 64);
  u64 r = a * w - qhat * q;
  return r >= q ? r - q : r;
}

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(u64 n) noexcept;

/// Largest primes p < 2^bits with p = 1 (mod 2*ring_dim), skipping any in `exclude`.
/// When `nearest` is set the search walks outward from 2^bits and picks the prime with the
/// smallest |p - 2^bits| instead (used for rescale primes so that scale stays close to 2^bits).
u64 find_ntt_prime(int bits, std::size_t ring_dim, const std::vector<u64>& exclude, bool nearest);

}  // namespace dpcc::he
