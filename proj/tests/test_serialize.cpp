// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "dpcc/error.hpp"
#include "dpcc/he/ckks.hpp"
#include "dpcc/he/serialize.hpp"
#include "support.hpp"

using namespace dpcc::he;
using dpcc::testing::max_abs_diff;
using dpcc::testing::toy_params;

namespace {

std::uint64_t fnv1a(const Bytes& b) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto c : b) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint32_t le32(const Bytes& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

struct Toy {
  HeContext ctx{toy_params(16)};
  KeySet keys = keygen(ctx, {1, 3}, 21);
  Ciphertext ct(const std::vector<double>& v, std::uint64_t seed, int level) const {
    return encrypt_symmetric(ctx, encode(ctx, v, level), keys.secret_key, seed);
  }
};

}  // namespace

TEST_CASE("ciphertext header bytes") {
  Toy t;
  const Bytes b = serialize(t.ctx, t.ct({0.5, -0.25}, 1, 1));
  // magic "DCCT", version 1, level 1, ring_dim 16, scale_bits 25
  const Bytes expected{'D', 'C', 'C', 'T', 1, 0, 1, 0, 16, 0, 0, 0, 25, 0, 0, 0};
  REQUIRE(b.size() > expected.size());
  CHECK(Bytes(b.begin(), b.begin() + 16) == expected);
  // scale, noise bound, message bound, component count, then two polys of two limbs each.
  CHECK(b.size() == 16 + 24 + 4 + 2 * (4 + 2 * (8 + 8 * 16)));
  CHECK(le32(b, 40) == 2);
  CHECK(le32(b, 44) == 2);
}

// Frozen digest of one seeded ciphertext. A change here means the wire format, the sampler
// or the encoder changed; bump kWireVersion if the format itself moved.
TEST_CASE("golden ciphertext encoding is stable") {
  Toy t;
  const Bytes b = serialize(t.ctx, t.ct({0.5, -0.25, 1.0}, 77, 2));
  CHECK(b.size() == 16 + 24 + 4 + 2 * (4 + 3 * (8 + 8 * 16)));
  CHECK(fnv1a(b) == 0xb895d0ae72cdf09fULL);
}

TEST_CASE("roundtrips") {
  Toy t;
  std::mt19937_64 rng(3);
  const auto v = dpcc::testing::uniform_vector(rng, 8);

  SUBCASE("ciphertext at every level") {
    for (int level = 0; level <= t.ctx.max_level(); ++level) {
      const Ciphertext ct = t.ct(v, 5, level);
      const Ciphertext back = deserialize_ciphertext(t.ctx, serialize(t.ctx, ct));
      CHECK(back.level == ct.level);
      CHECK(back.scale == ct.scale);
      CHECK(back.noise_bound == ct.noise_bound);
      CHECK(back.message_bound == ct.message_bound);
      CHECK(back.c0 == ct.c0);
      CHECK(back.c1 == ct.c1);
      CHECK(serialize(t.ctx, back) == serialize(t.ctx, ct));
    }
  }
  SUBCASE("public key encrypts the same after a roundtrip") {
    const PublicKey pk = deserialize_public_key(t.ctx, serialize(t.ctx, t.keys.public_key));
    CHECK(pk.p0 == t.keys.public_key.p0);
    CHECK(pk.p1 == t.keys.public_key.p1);
  }
  SUBCASE("secret key") {
    const SecretKey sk = deserialize_secret_key(t.ctx, serialize(t.ctx, t.keys.secret_key));
    CHECK(sk.s == t.keys.secret_key.s);
  }
  SUBCASE("evaluation keys still rotate") {
    const EvaluationKeys ek = deserialize_evaluation_keys(t.ctx, serialize(t.ctx, t.keys.evaluation));
    CHECK(ek.rotation_keys.size() == 2);
    const Ciphertext ct = t.ct(v, 6, t.ctx.max_level());
    const Ciphertext a = rotate(t.ctx, ct, 3, t.keys.evaluation);
    const Ciphertext b = rotate(t.ctx, ct, 3, ek);
    CHECK(a.c0 == b.c0);
    CHECK(a.c1 == b.c1);
    const Ciphertext m1 = multiply_relin(t.ctx, ct, ct, t.keys.evaluation.relin_key);
    const Ciphertext m2 = multiply_relin(t.ctx, ct, ct, ek.relin_key);
    CHECK(m1.c0 == m2.c0);
  }
  SUBCASE("decrypted values survive") {
    const Ciphertext ct = deserialize_ciphertext(t.ctx, serialize(t.ctx, t.ct(v, 7, 1)));
    CHECK(max_abs_diff(decode(t.ctx, decrypt(t.ctx, ct, t.keys.secret_key), 8), v) < 1e-3);
  }
}

TEST_CASE("malformed input is rejected") {
  Toy t;
  const Bytes good = serialize(t.ctx, t.ct({1.0}, 9, 1));

  SUBCASE("truncated") {
    for (std::size_t n : {std::size_t{0}, std::size_t{3}, std::size_t{16}, good.size() - 1}) {
      const Bytes b(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(n));
      CHECK_THROWS_AS(deserialize_ciphertext(t.ctx, b), dpcc::SerializationError);
    }
  }
  SUBCASE("trailing bytes") {
    Bytes b = good;
    b.push_back(0);
    CHECK_THROWS_WITH_AS(deserialize_ciphertext(t.ctx, b), "trailing bytes", dpcc::SerializationError);
  }
  SUBCASE("wrong magic") {
    CHECK_THROWS_WITH_AS(deserialize_public_key(t.ctx, good), "bad magic", dpcc::SerializationError);
  }
  SUBCASE("wrong version") {
    Bytes b = good;
    b[4] = 2;
    CHECK_THROWS_AS(deserialize_ciphertext(t.ctx, b), dpcc::SerializationError);
  }
  SUBCASE("level beyond the chain") {
    Bytes b = good;
    b[6] = 9;
    CHECK_THROWS_AS(deserialize_ciphertext(t.ctx, b), dpcc::SerializationError);
  }
  SUBCASE("other ring dimension") {
    const HeContext other(toy_params(32));
    CHECK_THROWS_WITH_AS(deserialize_ciphertext(other, good), "ring dimension mismatch",
                         dpcc::SerializationError);
  }
  SUBCASE("other scale bits") {
    const HeContext other(toy_params(16, 30));
    CHECK_THROWS_AS(deserialize_ciphertext(other, good), dpcc::SerializationError);
  }
  SUBCASE("unreduced coefficient") {
    Bytes b = good;
    // First coefficient word of c0: header, three f64, component count, limb count, limb length.
    const std::size_t at = 16 + 24 + 4 + 4 + 8;
    for (std::size_t i = 0; i < 8; ++i) b[at + i] = 0xff;
    CHECK_THROWS_WITH_AS(deserialize_ciphertext(t.ctx, b), "coefficient not reduced",
                         dpcc::SerializationError);
  }
  SUBCASE("non-positive scale") {
    Bytes b = good;
    for (std::size_t i = 0; i < 8; ++i) b[16 + i] = 0;
    CHECK_THROWS_AS(deserialize_ciphertext(t.ctx, b), dpcc::SerializationError);
  }
}
