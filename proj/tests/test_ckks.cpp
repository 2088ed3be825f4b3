// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dpcc/error.hpp"
#include "dpcc/he/ckks.hpp"
#include "dpcc/he/encryptor.hpp"
#include "support.hpp"

using namespace dpcc::he;
using dpcc::testing::centered;
using dpcc::testing::max_abs_diff;
using dpcc::testing::toy_params;
using dpcc::testing::uniform_vector;

namespace {

// Roundtrip tolerance at ring_dim 4096, scale 2^25.
constexpr double kFreshTol = 1e-4;
// After one key switch (rotation): fresh error plus rounding from the special-prime division.
constexpr double kSwitchTol = 4e-4;

struct Fixture {
  HeContext ctx;
  KeySet keys;
  Fixture(HeParams p, std::set<int> steps, std::uint64_t seed = 42)
      : ctx(std::move(p)), keys(keygen(ctx, steps, seed)) {}

  Ciphertext enc(const std::vector<double>& v, std::uint64_t seed, int level = -1) {
    const int l = level < 0 ? ctx.max_level() : level;
    return encrypt_symmetric(ctx, encode(ctx, v, l), keys.secret_key, seed);
  }
  std::vector<double> dec(const Ciphertext& ct, std::size_t count) {
    return decode(ctx, decrypt(ctx, ct, keys.secret_key), count);
  }
};

Fixture& control_fixture() {
  static Fixture f(HeParams::control_default(25), {1, 2, 3, 5});
  return f;
}

std::vector<double> rotated(const std::vector<double>& v, int steps) {
  std::vector<double> out(v.size());
  const auto n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(((i + steps) % n + n) % n)];
  return out;
}

bool same_poly(const RingPoly& a, const RingPoly& b) { return a == b; }

bool same_keys(const KSwitchKey& a, const KSwitchKey& b) {
  return a.a == b.a && a.b == b.b;
}

}  // namespace

TEST_CASE("parameter validation names the violated invariant") {
  HeParams p = toy_params(16);
  SUBCASE("ring_dim") {
    p.ring_dim = 12;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("power of two"), dpcc::ParameterError);
  }
  SUBCASE("prime congruence") {
    p.modulus_chain[1] = 101;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("1 mod 2*ring_dim"), dpcc::ParameterError);
  }
  SUBCASE("distinct primes") {
    p.modulus_chain[1] = p.modulus_chain[0];
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("distinct"), dpcc::ParameterError);
  }
  SUBCASE("context construction validates") {
    p.modulus_chain.resize(1);
    CHECK_THROWS_AS(HeContext{p}, dpcc::ParameterError);
  }
}

TEST_CASE("security bound is a warning, not an error") {
  const HeParams ok = HeParams::control_default(25);
  CHECK(ok.total_modulus_bits() <= 109);
  CHECK(ok.warnings().empty());
  CHECK(ok.max_level() == 1);
  const HeParams big = HeParams::from_bit_sizes(4096, {50, 40}, 50, 40);
  CHECK_NOTHROW(big.validate());
  CHECK_FALSE(big.warnings().empty());
}

TEST_CASE("keygen examples") {
  SUBCASE("public key relation at ring_dim 8") {
    const HeContext ctx(toy_params(8));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const KeySet k = keygen(ctx, {}, seed);
      RingPoly rel = ctx.multiply(k.public_key.p1, k.secret_key.s);
      ctx.add_inplace(rel, k.public_key.p0);
      for (auto c : centered(ctx, rel)) {
        CHECK(dpcc::testing::abs128(c) <= 6.0 * ctx.params().error_stddev);
      }
    }
  }
  SUBCASE("same seed gives bit-identical keys") {
    const HeContext ctx(toy_params(16));
    const KeySet a = keygen(ctx, {1, 3}, 9);
    const KeySet b = keygen(ctx, {1, 3}, 9);
    const KeySet c = keygen(ctx, {1, 3}, 10);
    CHECK(same_poly(a.secret_key.s, b.secret_key.s));
    CHECK(same_poly(a.public_key.p0, b.public_key.p0));
    CHECK(same_keys(a.evaluation.relin_key, b.evaluation.relin_key));
    CHECK(same_keys(a.evaluation.rotation_keys.at(3), b.evaluation.rotation_keys.at(3)));
    CHECK_FALSE(same_poly(a.secret_key.s, c.secret_key.s));
  }
  SUBCASE("rotation keys do not depend on the other requested steps") {
    const HeContext ctx(toy_params(16));
    const KeySet a = keygen(ctx, {1, 3}, 9);
    const KeySet b = keygen(ctx, {1, 2, 3}, 9);
    CHECK(same_poly(a.secret_key.s, b.secret_key.s));
  }
  SUBCASE("control parameters with steps 1..39") {
    const HeContext ctx(HeParams::control_default(25));
    std::set<int> steps;
    for (int i = 1; i <= 39; ++i) steps.insert(i);
    const KeySet k = keygen(ctx, steps, 5);
    CHECK(k.evaluation.rotation_keys.size() == 39);
    for (int i = 1; i <= 39; ++i) CHECK(k.evaluation.has_rotation(i));
  }
  SUBCASE("out-of-range steps") {
    const HeContext ctx(toy_params(16));
    CHECK_THROWS_AS(keygen(ctx, {0}, 1), dpcc::ParameterError);
    CHECK_THROWS_AS(keygen(ctx, {8}, 1), dpcc::ParameterError);
  }
}

TEST_CASE("secret key is ternary") {
  const HeContext ctx(toy_params(64));
  const KeySet k = keygen(ctx, {}, 3);
  RingPoly s = ctx.restrict_to(k.secret_key.s, ctx.max_level());
  int counts[3] = {0, 0, 0};
  for (auto c : centered(ctx, s)) {
    REQUIRE((c >= -1 && c <= 1));
    ++counts[static_cast<int>(c) + 1];
  }
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
}

TEST_CASE("encrypt and decrypt at ring_dim 4096, scale 2^25") {
  Fixture& f = control_fixture();
  std::mt19937_64 rng(1);
  const std::size_t slots = f.ctx.slot_count();
  const auto v = uniform_vector(rng, slots);

  SUBCASE("symmetric roundtrip") { CHECK(max_abs_diff(f.dec(f.enc(v, 1), slots), v) < kFreshTol); }
  SUBCASE("zero plaintext") {
    const auto out = f.dec(f.enc(std::vector<double>(slots, 0.0), 2), slots);
    for (double x : out) CHECK(std::abs(x) < kFreshTol);
  }
  SUBCASE("public-key and secret-key encryptions agree") {
    const Plaintext pt = encode(f.ctx, v, f.ctx.max_level());
    const auto a = f.dec(encrypt(f.ctx, pt, f.keys.public_key, 3), slots);
    const auto b = f.dec(encrypt_symmetric(f.ctx, pt, f.keys.secret_key, 4), slots);
    CHECK(max_abs_diff(a, v) < 2 * kFreshTol);
    CHECK(max_abs_diff(a, b) < 2 * kFreshTol);
  }
  SUBCASE("encryption is deterministic in its seed") {
    const Ciphertext a = f.enc(v, 7);
    const Ciphertext b = f.enc(v, 7);
    const Ciphertext c = f.enc(v, 8);
    CHECK(a.c0 == b.c0);
    CHECK(a.c1 == b.c1);
    CHECK_FALSE(a.c1 == c.c1);
  }
  SUBCASE("Encryptor draws a fresh seed per call") {
    Encryptor e1(f.ctx, f.keys.secret_key, 11);
    Encryptor e2(f.ctx, f.keys.secret_key, 11);
    const Plaintext pt = encode(f.ctx, v, 1);
    const Ciphertext a = e1.encrypt(pt);
    const Ciphertext b = e1.encrypt(pt);
    CHECK_FALSE(a.c1 == b.c1);
    CHECK(e2.encrypt(pt).c1 == a.c1);
  }
}

TEST_CASE("addition and subtraction") {
  Fixture& f = control_fixture();
  std::mt19937_64 rng(2);
  const std::size_t slots = f.ctx.slot_count();
  const auto u = uniform_vector(rng, slots);
  const auto v = uniform_vector(rng, slots);

  CHECK(max_abs_diff(f.dec(add(f.ctx, f.enc(v, 1), f.enc(std::vector<double>(slots, 0.0), 2)), slots),
                     v) < 2 * kFreshTol);
  const auto diff = f.dec(sub(f.ctx, f.enc(v, 3), f.enc(v, 4)), slots);
  for (double x : diff) CHECK(std::abs(x) < 2 * kFreshTol);
  const auto sum = f.dec(add(f.ctx, f.enc({1, 2}, 5), f.enc({3, 4}, 6)), 2);
  CHECK(max_abs_diff(sum, std::vector<double>{4, 6}) < 2 * kFreshTol);

  std::vector<double> expect(slots);
  for (std::size_t i = 0; i < slots; ++i) expect[i] = u[i] + v[i];
  CHECK(max_abs_diff(f.dec(add(f.ctx, f.enc(u, 7), f.enc(v, 8)), slots), expect) < 2 * kFreshTol);

  SUBCASE("misaligned operands") {
    const Ciphertext top = f.enc(v, 9);
    const Ciphertext low = f.enc(v, 10, 0);
    CHECK_THROWS_AS(add(f.ctx, top, low), dpcc::AlignmentError);
    const Ciphertext other_scale = encrypt_symmetric(
        f.ctx, encode(f.ctx, v, f.ctx.max_level(), 1024.0), f.keys.secret_key, 11);
    CHECK_THROWS_AS(sub(f.ctx, top, other_scale), dpcc::AlignmentError);
  }
}

TEST_CASE("multiplication with relinearisation") {
  Fixture& f = control_fixture();
  std::mt19937_64 rng(3);
  const std::size_t slots = f.ctx.slot_count();
  const auto v = uniform_vector(rng, slots);
  const double q1 = static_cast<double>(f.ctx.modulus(1).value());

  const Ciphertext prod =
      multiply_relin(f.ctx, f.enc(v, 1), f.enc(std::vector<double>(slots, 1.0), 2), f.keys.evaluation.relin_key);
  CHECK(prod.level == 1);
  CHECK(prod.scale == f.ctx.params().default_scale() * f.ctx.params().default_scale());
  const Ciphertext r = rescale(f.ctx, prod);
  CHECK(r.level == 0);
  CHECK(r.scale == prod.scale / q1);
  CHECK(max_abs_diff(f.dec(r, slots), v) < 1e-3);

  const auto out = f.dec(rescale(f.ctx, multiply_relin(f.ctx, f.enc({2, 3}, 3), f.enc({5, 7}, 4),
                                                       f.keys.evaluation.relin_key)),
                         2);
  CHECK(max_abs_diff(out, std::vector<double>{10, 21}) < 1e-3);

  std::vector<double> w = uniform_vector(rng, slots);
  std::vector<double> uw(slots);
  for (std::size_t i = 0; i < slots; ++i) uw[i] = v[i] * w[i];
  const Ciphertext vw = rescale(
      f.ctx, multiply_relin(f.ctx, f.enc(v, 5), f.enc(w, 6), f.keys.evaluation.relin_key));
  CHECK(max_abs_diff(f.dec(vw, slots), uw) < 1e-3);

  CHECK_THROWS_AS(multiply_relin(f.ctx, vw, vw, f.keys.evaluation.relin_key), dpcc::DepthExhaustedError);
  CHECK_THROWS_AS(rescale(f.ctx, vw), dpcc::DepthExhaustedError);
  CHECK_THROWS_AS(multiply_relin(f.ctx, f.enc(v, 7), vw, f.keys.evaluation.relin_key),
                  dpcc::AlignmentError);
}

TEST_CASE("depth budget 2: two successive multiplications succeed, a third fails") {
  Fixture f(toy_params(1024), {});
  std::mt19937_64 rng(4);
  const std::size_t slots = f.ctx.slot_count();
  REQUIRE(f.ctx.max_level() == 2);
  const auto a = uniform_vector(rng, slots);
  const auto b = uniform_vector(rng, slots);
  const auto c = uniform_vector(rng, slots);
  const auto& rk = f.keys.evaluation.relin_key;

  const Ciphertext ab = rescale(f.ctx, multiply_relin(f.ctx, f.enc(a, 1), f.enc(b, 2), rk));
  REQUIRE(ab.level == 1);
  const Ciphertext c1 = encrypt_symmetric(f.ctx, encode(f.ctx, c, 1, ab.scale), f.keys.secret_key, 3);
  const Ciphertext abc = rescale(f.ctx, multiply_relin(f.ctx, ab, c1, rk));
  REQUIRE(abc.level == 0);
  std::vector<double> expect(slots);
  for (std::size_t i = 0; i < slots; ++i) expect[i] = a[i] * b[i] * c[i];
  CHECK(max_abs_diff(f.dec(abc, slots), expect) < 1e-3);
  CHECK_THROWS_AS(multiply_relin(f.ctx, abc, abc, rk), dpcc::DepthExhaustedError);
}

TEST_CASE("rescale adds only rounding-sized error at toy parameters") {
  Fixture f(toy_params(64), {});
  std::mt19937_64 rng(5);
  const std::size_t slots = f.ctx.slot_count();
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = uniform_vector(rng, slots);
    const std::vector<double> ones(slots, 1.0);
    const Ciphertext prod = multiply_relin(f.ctx, f.enc(v, 2 * trial), f.enc(ones, 2 * trial + 1),
                                           f.keys.evaluation.relin_key);
    const Ciphertext r = rescale(f.ctx, prod);
    CHECK(r.scale == prod.scale / static_cast<double>(f.ctx.modulus(2).value()));
    const double before = max_abs_diff(f.dec(prod, slots), v);
    const double after = max_abs_diff(f.dec(r, slots), v);
    CHECK(after < 1e-3);
    CHECK(after - before < 1e-3);
  }
}

TEST_CASE("rotation") {
  Fixture& f = control_fixture();
  std::mt19937_64 rng(6);
  const std::size_t slots = f.ctx.slot_count();
  std::vector<double> ramp(slots);
  for (std::size_t i = 0; i < slots; ++i) ramp[i] = static_cast<double>(i % 64) / 64.0;
  const Ciphertext ct = f.enc(ramp, 1);
  const auto& keys = f.keys.evaluation;

  const Ciphertext same = rotate(f.ctx, ct, 0, keys);
  CHECK(same.c0 == ct.c0);
  CHECK(same.c1 == ct.c1);

  const Ciphertext r1 = rotate(f.ctx, ct, 1, keys);
  CHECK(r1.level == ct.level);
  CHECK(r1.scale == ct.scale);
  CHECK(max_abs_diff(f.dec(r1, slots), rotated(ramp, 1)) < kSwitchTol);

  const Ciphertext r12 = rotate(f.ctx, rotate(f.ctx, ct, 1, keys), 2, keys);
  const Ciphertext r3 = rotate(f.ctx, ct, 3, keys);
  CHECK(max_abs_diff(f.dec(r12, slots), f.dec(r3, slots)) < 2 * kSwitchTol);
  CHECK(max_abs_diff(f.dec(r12, slots), rotated(ramp, 3)) < 2 * kSwitchTol);

  // Steps are taken modulo the slot count.
  const Ciphertext wrap = rotate(f.ctx, ct, static_cast<int>(slots) + 1, keys);
  CHECK(wrap.c0 == r1.c0);

  const auto v = uniform_vector(rng, slots);
  const Ciphertext cv = f.enc(v, 2);
  CHECK(max_abs_diff(f.dec(rotate(f.ctx, cv, 5, keys), slots), rotated(f.dec(cv, slots), 5)) <
        kSwitchTol);

  try {
    (void)rotate(f.ctx, ct, 4, keys);
    FAIL("expected a missing-key error");
  } catch (const dpcc::MissingRotationKeyError& e) {
    CHECK(e.step() == 4);
    CHECK(std::string(e.what()).find('4') != std::string::npos);
  }
  CHECK_THROWS_AS(rotate(f.ctx, ct, -1, keys), dpcc::MissingRotationKeyError);
}

TEST_CASE("rotation by a negative step uses the key for slots - step") {
  Fixture f(toy_params(16), {7});
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
  const auto out = f.dec(rotate(f.ctx, f.enc(v, 1), -1, f.keys.evaluation), 8);
  CHECK(max_abs_diff(out, rotated(v, -1)) < 1e-3);
}

namespace {

// Exact plaintext polynomial tracked alongside a ciphertext.
using Coeffs = std::vector<long double>;

Coeffs negacyclic(const Coeffs& a, const Coeffs& b) {
  const std::size_t n = a.size();
  Coeffs out(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const long double t = a[i] * b[j];
      if (i + j < n) out[i + j] += t;
      else out[i + j - n] -= t;
    }
  }
  return out;
}

Coeffs apply_galois(const Coeffs& a, std::uint64_t g) {
  const std::size_t n = a.size();
  Coeffs out(n, 0.0L);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t e = static_cast<std::size_t>((k * g) % (2 * n));
    if (e < n) out[e] += a[k];
    else out[e - n] -= a[k];
  }
  return out;
}

struct Tracked {
  Ciphertext ct;
  Coeffs m;
};

double measured_noise(const HeContext& ctx, const Tracked& t, const SecretKey& sk) {
  const auto c = centered(ctx, decrypt(ctx, t.ct, sk).poly);
  double worst = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    worst = std::max(worst, static_cast<double>(std::abs(static_cast<long double>(c[k]) - t.m[k])));
  }
  return worst;
}

}  // namespace

TEST_CASE("noise tracker never underestimates measured noise (10,000 trials)") {
  const HeContext ctx(toy_params(16));
  const KeySet keys = keygen(ctx, {1, 2, 3, 4, 5, 6, 7}, 77);
  std::mt19937_64 rng(2024);
  const std::size_t slots = ctx.slot_count();
  int checks = 0;
  int violations = 0;
  double worst_ratio = 0.0;

  auto fresh = [&](int level, double scale) {
    const Plaintext pt = encode(ctx, uniform_vector(rng, slots), level, scale);
    Tracked t;
    t.m.resize(ctx.ring_dim());
    const auto c = centered(ctx, pt.poly);
    for (std::size_t k = 0; k < c.size(); ++k) t.m[k] = static_cast<long double>(c[k]);
    t.ct = (rng() & 1) ? encrypt(ctx, pt, keys.public_key, rng())
                       : encrypt_symmetric(ctx, pt, keys.secret_key, rng());
    return t;
  };
  auto check = [&](const Tracked& t) {
    const double noise = measured_noise(ctx, t, keys.secret_key);
    ++checks;
    if (noise > t.ct.noise_bound) ++violations;
    worst_ratio = std::max(worst_ratio, noise / t.ct.noise_bound);
  };

  for (int trial = 0; trial < 10000; ++trial) {
    Tracked cur = fresh(ctx.max_level(), ctx.params().default_scale());
    check(cur);
    const int ops = 1 + static_cast<int>(rng() % 4);
    for (int op = 0; op < ops; ++op) {
      const int kind = static_cast<int>(rng() % 4);
      if (kind == 0 || kind == 1) {
        Tracked other = fresh(cur.ct.level, cur.ct.scale);
        if (kind == 0) {
          cur.ct = add(ctx, cur.ct, other.ct);
          for (std::size_t k = 0; k < cur.m.size(); ++k) cur.m[k] += other.m[k];
        } else {
          cur.ct = sub(ctx, cur.ct, other.ct);
          for (std::size_t k = 0; k < cur.m.size(); ++k) cur.m[k] -= other.m[k];
        }
      } else if (kind == 2) {
        const int step = 1 + static_cast<int>(rng() % 7);
        cur.ct = rotate(ctx, cur.ct, step, keys.evaluation);
        cur.m = apply_galois(cur.m, ctx.galois_element(step));
      } else {
        if (cur.ct.level < 1) continue;
        Tracked other = fresh(cur.ct.level, ctx.params().default_scale());
        cur.ct = multiply_relin(ctx, cur.ct, other.ct, keys.evaluation.relin_key);
        cur.m = negacyclic(cur.m, other.m);
        check(cur);
        const long double q = static_cast<long double>(ctx.modulus(static_cast<std::size_t>(cur.ct.level)).value());
        cur.ct = rescale(ctx, cur.ct);
        for (auto& x : cur.m) x /= q;
      }
      check(cur);
    }
  }
  INFO("worst measured/bound ratio " << worst_ratio);
  CHECK(checks > 20000);
  CHECK(violations == 0);
}
