// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/he/ntt.hpp"

#include <bit>

#include "dpcc/error.hpp"

namespace dpcc::he {

namespace {

std::size_t bit_reverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

u64 find_psi(std::size_t n, const Modulus& q) {
  const u64 two_n = 2 * static_cast<u64>(n);
  if ((q.value() - 1) % two_n != 0) throw ParameterError("prime is not 1 mod 2n");
  const u64 exponent = (q.value() - 1) / two_n;
  for (u64 x = 2; x < q.value(); ++x) {
    const u64 g = q.pow(x, exponent);
    // g has order dividing 2n; it is primitive iff g^n = -1.
    if (q.pow(g, n) == q.value() - 1) return g;
  }
  throw ParameterError("no primitive 2n-th root of unity");
}

}  // namespace

NttTables::NttTables(std::size_t n, const Modulus& q) : n_(n), q_(q) {
  if (n < 2 || !std::has_single_bit(n)) throw ParameterError("NTT size must be a power of two");
  const int log_n = std::countr_zero(n);
  psi_ = find_psi(n, q);
  const u64 psi_inv = q.inv(psi_);
  psi_rev_.resize(n);
  psi_inv_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  psi_inv_rev_shoup_.resize(n);
  u64 pw = 1, pw_inv = 1;
  std::vector<u64> powers(n), inv_powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    powers[i] = pw;
    inv_powers[i] = pw_inv;
    pw = q.mul(pw, psi_);
    pw_inv = q.mul(pw_inv, psi_inv);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = bit_reverse(i, log_n);
    psi_rev_[i] = powers[r];
    psi_inv_rev_[i] = inv_powers[r];
    psi_rev_shoup_[i] = shoup_precompute(psi_rev_[i], q.value());
    psi_inv_rev_shoup_[i] = shoup_precompute(psi_inv_rev_[i], q.value());
  }
  n_inv_ = q.inv(n % q.value());
  n_inv_shoup_ = shoup_precompute(n_inv_, q.value());
}

void NttTables::forward(std::span<u64> a) const noexcept {
  const u64 q = q_.value();
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const u64 w = psi_rev_[m + i];
      const u64 ws = psi_rev_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u64 u = a[j];
        const u64 v = mul_shoup(a[j + t], w, ws, q);
        const u64 s = u + v;
        a[j] = s >= q ? s - q : s;
        a[j + t] = u >= v ? u - v : u + q - v;
      }
    }
  }
}

void NttTables::inverse(std::span<u64> a) const noexcept {
  const u64 q = q_.value();
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const u64 w = psi_inv_rev_[h + i];
      const u64 ws = psi_inv_rev_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u64 u = a[j];
        const u64 v = a[j + t];
        const u64 s = u + v;
        a[j] = s >= q ? s - q : s;
        a[j + t] = mul_shoup(u >= v ? u - v : u + q - v, w, ws, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (std::size_t j = 0; j < n_; ++j) a[j] = mul_shoup(a[j], n_inv_, n_inv_shoup_, q);
}

std::vector<u64> negacyclic_multiply_reference(std::span<const u64> a, std::span<const u64> b,
                                               const Modulus& q) {
  const std::size_t n = a.size();
  if (b.size() != n) throw ShapeError("operand lengths differ");
  std::vector<u64> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const u64 p = q.mul(a[i], b[j]);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = q.add(out[k], p);
      } else {
        out[k - n] = q.sub(out[k - n], p);
      }
    }
  }
  return out;
}

}  // namespace dpcc::he
