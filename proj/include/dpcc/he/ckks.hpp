// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "dpcc/he/context.hpp"
#include "dpcc/he/encoder.hpp"

namespace dpcc::he {

/// Scaled, rounded encoding of a real vector at a given level (NTT form).
struct Plaintext {
  RingPoly poly;
  double scale = 1.0;
  int level = 0;
  /// Infinity norm of the integer coefficients.
  double message_bound = 0.0;
};

/// (c0, c1) with c0 + c1*s = p + e (mod Q_level). Both components are kept in NTT form.
///
/// `noise_bound` is a worst-case bound on the infinity norm of the coefficients of e, and
/// `message_bound` one on the coefficients of p; both are propagated by every operation.
struct Ciphertext {
  RingPoly c0;
  RingPoly c1;
  int level = 0;
  double scale = 1.0;
  double noise_bound = 0.0;
  double message_bound = 0.0;
};

struct SecretKey {
  RingPoly s;  // ternary, full basis including the special prime, NTT form
};

struct PublicKey {
  RingPoly p0;  // -a*s + e
  RingPoly p1;  // a
};

/// Key-switching material: one (b_i, a_i) pair per data prime q_i, over the full basis, with
/// b_i = -a_i*s + e_i + P*[i == j]*s' on limb j.
struct KSwitchKey {
  std::vector<RingPoly> b;
  std::vector<RingPoly> a;
};

/// Everything the evaluator needs; contains no secret material.
struct EvaluationKeys {
  KSwitchKey relin_key;
  std::map<int, KSwitchKey> rotation_keys;

  bool has_rotation(int steps) const { return rotation_keys.count(steps) != 0; }
};

struct KeySet {
  SecretKey secret_key;
  PublicKey public_key;
  EvaluationKeys evaluation;
};

/// Generates all keys. Rotation keys are produced for exactly the requested steps, each of
/// which must lie in [1, ring_dim/2). Deterministic in `seed`.
KeySet keygen(const HeContext& ctx, const std::set<int>& rotation_steps, std::uint64_t seed);

/// Encodes up to ring_dim/2 reals (zero padded) at `level` with scale 2^scale_bits.
Plaintext encode(const HeContext& ctx, std::span<const double> values, int level);
Plaintext encode(const HeContext& ctx, std::span<const double> values, int level, double scale);

/// First `count` slots of the plaintext, divided by its scale.
std::vector<double> decode(const HeContext& ctx, const Plaintext& pt, std::size_t count);

Ciphertext encrypt_symmetric(const HeContext& ctx, const Plaintext& pt, const SecretKey& sk,
                             std::uint64_t seed);
Ciphertext encrypt(const HeContext& ctx, const Plaintext& pt, const PublicKey& pk,
                   std::uint64_t seed);
Plaintext decrypt(const HeContext& ctx, const Ciphertext& ct, const SecretKey& sk);

Ciphertext add(const HeContext& ctx, const Ciphertext& a, const Ciphertext& b);
Ciphertext sub(const HeContext& ctx, const Ciphertext& a, const Ciphertext& b);
/// Tensor product followed by relinearisation. Result scale is a.scale * b.scale.
Ciphertext multiply_relin(const HeContext& ctx, const Ciphertext& a, const Ciphertext& b,
                          const KSwitchKey& relin_key);
/// Divides by q_level with rounding; level drops by one and scale by q_level.
Ciphertext rescale(const HeContext& ctx, const Ciphertext& ct);
/// Cyclic left rotation of the slot vector. `steps` = 0 returns the input unchanged.
Ciphertext rotate(const HeContext& ctx, const Ciphertext& ct, int steps,
                  const EvaluationKeys& keys);

/// Noise added by one key switch at `level`, as tracked in Ciphertext::noise_bound.
double key_switch_noise_bound(const HeContext& ctx, int level);
/// Noise added by rounding during a division by a prime (rescale or special-prime drop).
double rounding_noise_bound(const HeContext& ctx);

}  // namespace dpcc::he
