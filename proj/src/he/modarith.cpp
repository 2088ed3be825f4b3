// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/he/modarith.hpp"

#include <algorithm>
#include <bit>

#include "dpcc/error.hpp"

namespace dpcc::he {

Modulus::Modulus(u64 value) : value_(value) {
  if (value < 2 || value >= (u64{1} << 62)) {
    throw ParameterError("modulus must lie in [2, 2^62)");
  }
  bits_ = std::bit_width(value);
  mu_ = static_cast<u64>((u128{1} << (2 * bits_)) / value);
  mu64_ = static_cast<u64>((u128{1} << 64) / value);
}

u64 Modulus::pow(u64 base, u64 exp) const noexcept {
  u64 result = 1 % value_;
  base %= value_;
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

u64 Modulus::inv(u64 a) const {
  // Extended Euclid on signed 128-bit to avoid overflow.
  i128 t = 0, new_t = 1;
  i128 r = value_, new_r = a % value_;
  while (new_r != 0) {
    const i128 quotient = r / new_r;
    const i128 tmp_t = t - quotient * new_t;
    t = new_t;
    new_t = tmp_t;
    const i128 tmp_r = r - quotient * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (r != 1) throw ParameterError("value has no inverse modulo q");
  if (t < 0) t += value_;
  return static_cast<u64>(t);
}

namespace {

u64 mulmod_plain(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

u64 powmod_plain(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_plain(r, b, m);
    b = mulmod_plain(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is exact for all n < 2^64.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod_plain(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_plain(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 find_ntt_prime(int bits, std::size_t ring_dim, const std::vector<u64>& exclude, bool nearest) {
  if (bits < 4 || bits > 61) throw ParameterError("prime bit size must lie in [4, 61]");
  const u64 step = 2 * static_cast<u64>(ring_dim);
  const u64 target = u64{1} << bits;
  auto usable = [&](u64 c) {
    return is_prime(c) && std::find(exclude.begin(), exclude.end(), c) == exclude.end();
  };
  if (!nearest) {
    for (u64 c = target + 1 - step; c > step; c -= step) {
      if (usable(c)) return c;
    }
  } else {
    // Walk both directions from 2^bits; candidates are 2^bits +/- k*step + 1.
    if (usable(target + 1)) return target + 1;
    for (u64 k = 1; k * step < target / 2; ++k) {
      if (usable(target - k * step + 1)) return target - k * step + 1;
      if (usable(target + k * step + 1)) return target + k * step + 1;
    }
  }
  throw ParameterError("no NTT-friendly prime of " + std::to_string(bits) + " bits");
}

}  // namespace dpcc::he
