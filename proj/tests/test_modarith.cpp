// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "dpcc/error.hpp"
#include "dpcc/he/modarith.hpp"

using namespace dpcc::he;

TEST_CASE("is_prime agrees with trial division on small integers") {
  auto slow = [](u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  };
  for (u64 n = 0; n < 5000; ++n) CHECK(is_prime(n) == slow(n));
}

TEST_CASE("is_prime on large known values") {
  CHECK(is_prime(1099511480321ULL));
  CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
  CHECK_FALSE(is_prime(2305843009213693953ULL));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST_CASE("find_ntt_prime returns NTT-friendly primes of the requested size") {
  for (std::size_t n : {8u, 1024u, 4096u}) {
    for (int bits : {20, 25, 40, 44}) {
      const u64 q = find_ntt_prime(bits, n, {}, false);
      CHECK(is_prime(q));
      CHECK(q % (2 * n) == 1);
      CHECK(q < (u64{1} << bits));
      CHECK(q > (u64{1} << (bits - 1)));
      const u64 near = find_ntt_prime(bits, n, {}, true);
      CHECK(is_prime(near));
      CHECK(near % (2 * n) == 1);
    }
  }
  const u64 a = find_ntt_prime(30, 16, {}, false);
  const u64 b = find_ntt_prime(30, 16, {a}, false);
  CHECK(a != b);
  CHECK_THROWS_AS(find_ntt_prime(2, 16, {}, false), dpcc::ParameterError);
}

TEST_CASE("Barrett reductions match the 128-bit remainder") {
  std::mt19937_64 rng(7);
  for (u64 qv : {u64{17}, u64{33538049}, u64{1099511480321ULL}, u64{17592186028033ULL},
                 u64{2305843009213693951ULL}}) {
    const Modulus q(qv);
    for (int i = 0; i < 20000; ++i) {
      const u64 a = rng() % qv;
      const u64 b = rng() % qv;
      CHECK_EQ(q.mul(a, b), static_cast<u64>((static_cast<u128>(a) * b) % qv));
      const u64 x = rng();
      CHECK_EQ(q.reduce_u64(x), x % qv);
    }
    CHECK_EQ(q.reduce_u64(~u64{0}), ~u64{0} % qv);
    CHECK_EQ(q.mul(qv - 1, qv - 1), 1u);
  }
}

TEST_CASE("from_signed lifts negatives into [0, q)") {
  const Modulus q(97);
  CHECK_EQ(q.from_signed(-1), 96u);
  CHECK_EQ(q.from_signed(-97), 0u);
  CHECK_EQ(q.from_signed(-98), 96u);
  CHECK_EQ(q.from_signed(195), 1u);
  CHECK_EQ(q.from_signed(INT64_MIN), static_cast<u64>(((INT64_MIN % 97) + 97) % 97));
}

TEST_CASE("add sub neg pow inv") {
  const Modulus q(1099511480321ULL);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const u64 a = rng() % q.value();
    const u64 b = rng() % q.value();
    CHECK_EQ(q.sub(q.add(a, b), b), a);
    CHECK_EQ(q.add(a, q.neg(a)), 0u);
    if (a != 0) CHECK_EQ(q.mul(a, q.inv(a)), 1u);
  }
  CHECK_EQ(q.pow(3, q.value() - 1), 1u);  // Fermat
  CHECK_THROWS_AS(q.inv(0), dpcc::ParameterError);
  CHECK_THROWS_AS(Modulus(1), dpcc::ParameterError);
}

TEST_CASE("Shoup multiplication") {
  std::mt19937_64 rng(11);
  const u64 qv = 17592186028033ULL;
  for (int i = 0; i < 10000; ++i) {
    const u64 w = rng() % qv;
    const u64 a = rng() % qv;
    CHECK_EQ(mul_shoup(a, w, shoup_precompute(w, qv), qv),
             static_cast<u64>((static_cast<u128>(a) * w) % qv));
  }
}
