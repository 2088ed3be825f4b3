// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/he/ckks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "dpcc/error.hpp"
#include "dpcc/he/sampling.hpp"

namespace dpcc::he {

namespace {

RingPoly sample_uniform(const HeContext& ctx, int level, bool with_special, Sampler& rng) {
  RingPoly p(ctx.ring_dim(), level, with_special, true);
  for (std::size_t i = 0; i < p.limb_count(); ++i) {
    const u64 q = ctx.modulus(ctx.chain_index(p, i)).value();
    for (auto& v : p.limb(i)) v = rng.uniform(q);
  }
  return p;
}

std::vector<std::int64_t> sample_gaussian(std::size_t n, double stddev, Sampler& rng) {
  std::vector<std::int64_t> e(n);
  for (auto& v : e) v = rng.gaussian(stddev);
  return e;
}

std::vector<std::int64_t> sample_ternary(std::size_t n, Sampler& rng) {
  std::vector<std::int64_t> s(n);
  for (auto& v : s) v = rng.ternary();
  return s;
}

/// Limbs 0..level of `p` plus its special limb (p must carry the full basis).
RingPoly select_with_special(const RingPoly& p, int level) {
  RingPoly out(p.ring_dim, level, true, p.ntt_form);
  const std::size_t n = p.ring_dim;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(level); ++i) {
    std::copy(p.limb(i).begin(), p.limb(i).end(), out.limb(i).begin());
  }
  const auto special = p.limb(p.limb_count() - 1);
  std::copy(special.begin(), special.end(), out.limb(out.limb_count() - 1).begin());
  (void)n;
  return out;
}

KSwitchKey make_switch_key(const HeContext& ctx, const RingPoly& s, const RingPoly& s_prime,
                           Sampler& rng) {
  const int top = ctx.max_level();
  KSwitchKey key;
  for (int i = 0; i <= top; ++i) {
    RingPoly a = sample_uniform(ctx, top, true, rng);
    const auto e_coeffs = sample_gaussian(ctx.ring_dim(), ctx.params().error_stddev, rng);
    RingPoly b = ctx.from_signed(e_coeffs, top, true, true);
    ctx.sub_inplace(b, ctx.multiply(a, s));
    // Gadget term P * s' only on limb i (P * g_i = P * delta_ij mod q_j).
    const Modulus& qi = ctx.modulus(static_cast<std::size_t>(i));
    const u64 p_mod = ctx.special_mod(static_cast<std::size_t>(i));
    auto bi = b.limb(static_cast<std::size_t>(i));
    auto si = s_prime.limb(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < ctx.ring_dim(); ++k) bi[k] = qi.add(bi[k], qi.mul(p_mod, si[k]));
    key.b.push_back(std::move(b));
    key.a.push_back(std::move(a));
  }
  return key;
}

/// Switches `d` (NTT form, data basis at some level) from the key s' of `key` to s.
std::pair<RingPoly, RingPoly> key_switch(const HeContext& ctx, const RingPoly& d,
                                         const KSwitchKey& key) {
  const int level = d.level;
  const std::size_t n = ctx.ring_dim();
  RingPoly d_coeff = d;
  ctx.from_ntt(d_coeff);

  RingPoly acc0(n, level, true, true);
  RingPoly acc1(n, level, true, true);
  const std::size_t key_special_limb = key.b.front().limb_count() - 1;
  std::vector<u64> lifted(n);
  for (int i = 0; i <= level; ++i) {
    const auto digit = d_coeff.limb(static_cast<std::size_t>(i));
    const RingPoly& bi = key.b[static_cast<std::size_t>(i)];
    const RingPoly& ai = key.a[static_cast<std::size_t>(i)];
    for (std::size_t t = 0; t < acc0.limb_count(); ++t) {
      const std::size_t chain = ctx.chain_index(acc0, t);
      const Modulus& q = ctx.modulus(chain);
      if (chain == static_cast<std::size_t>(i)) {
        // The digit's own limb is already available in NTT form.
        const auto own = d.limb(t);
        std::copy(own.begin(), own.end(), lifted.begin());
      } else {
        // Centered digits: an offset of q_i/2 would add a coherent term to the noise.
        const u64 qi = ctx.modulus(static_cast<std::size_t>(i)).value();
        const u64 half = qi >> 1;
        const u64 qi_mod = q.reduce_u64(qi);
        for (std::size_t k = 0; k < n; ++k) {
          const u64 v = digit[k];
          lifted[k] = v > half ? q.sub(q.reduce_u64(v), qi_mod) : q.reduce_u64(v);
        }
        ctx.ntt(chain).forward(lifted);
      }
      const std::size_t key_limb = (chain == ctx.special_index()) ? key_special_limb : t;
      auto kb = bi.limb(key_limb);
      auto ka = ai.limb(key_limb);
      auto z0 = acc0.limb(t);
      auto z1 = acc1.limb(t);
      for (std::size_t k = 0; k < n; ++k) {
        z0[k] = q.add(z0[k], q.mul(lifted[k], kb[k]));
        z1[k] = q.add(z1[k], q.mul(lifted[k], ka[k]));
      }
    }
  }
  return {ctx.divide_round_special(acc0), ctx.divide_round_special(acc1)};
}

bool same_scale(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

void require_aligned(const Ciphertext& a, const Ciphertext& b) {
  if (a.level != b.level) {
    throw AlignmentError("ciphertext levels differ (" + std::to_string(a.level) + " vs " +
                         std::to_string(b.level) + ")");
  }
  if (!same_scale(a.scale, b.scale)) throw AlignmentError("ciphertext scales differ");
}

double tail_bound(const HeContext& ctx) {
  return static_cast<double>(Sampler::gaussian_tail(ctx.params().error_stddev));
}

}  // namespace

double rounding_noise_bound(const HeContext& ctx) {
  return 0.5 * (1.0 + static_cast<double>(ctx.ring_dim()));
}

double key_switch_noise_bound(const HeContext& ctx, int level) {
  double sum_q = 0.0;
  // Digits are centered, so |d_i| <= q_i / 2.
  for (int i = 0; i <= level; ++i) sum_q += 0.5 * static_cast<double>(ctx.modulus(i).value());
  const double special = static_cast<double>(ctx.modulus(ctx.special_index()).value());
  return static_cast<double>(ctx.ring_dim()) * tail_bound(ctx) * sum_q / special +
         rounding_noise_bound(ctx);
}

KeySet keygen(const HeContext& ctx, const std::set<int>& rotation_steps, std::uint64_t seed) {
  const std::size_t n = ctx.ring_dim();
  const int top = ctx.max_level();
  for (int step : rotation_steps) {
    if (step < 1 || static_cast<std::size_t>(step) >= ctx.slot_count()) {
      throw ParameterError("rotation step " + std::to_string(step) +
                           " outside [1, ring_dim/2)");
    }
  }
  Sampler rng(seed);
  KeySet keys;
  const auto s_coeffs = sample_ternary(n, rng);
  keys.secret_key.s = ctx.from_signed(s_coeffs, top, true, true);
  const RingPoly& s = keys.secret_key.s;

  RingPoly a = sample_uniform(ctx, top, true, rng);
  const auto e = sample_gaussian(n, ctx.params().error_stddev, rng);
  RingPoly p0 = ctx.from_signed(e, top, true, true);
  ctx.sub_inplace(p0, ctx.multiply(a, s));
  keys.public_key = PublicKey{std::move(p0), std::move(a)};

  keys.evaluation.relin_key = make_switch_key(ctx, s, ctx.multiply(s, s), rng);

  // One child seed per step so the keys do not depend on generation order.
  const std::vector<int> steps(rotation_steps.begin(), rotation_steps.end());
  std::vector<std::uint64_t> seeds(steps.size());
  for (auto& sd : seeds) sd = rng.next();
  std::vector<KSwitchKey> rot(steps.size());
  RingPoly s_coeff = ctx.from_signed(s_coeffs, top, true, false);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(steps.size()); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    Sampler child(seeds[idx]);
    RingPoly s_rot = ctx.automorphism(s_coeff, ctx.galois_element(steps[idx]));
    ctx.to_ntt(s_rot);
    rot[idx] = make_switch_key(ctx, s, s_rot, child);
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    keys.evaluation.rotation_keys.emplace(steps[i], std::move(rot[i]));
  }
  return keys;
}

Plaintext encode(const HeContext& ctx, std::span<const double> values, int level) {
  return encode(ctx, values, level, ctx.params().default_scale());
}

Plaintext encode(const HeContext& ctx, std::span<const double> values, int level, double scale) {
  if (values.size() > ctx.slot_count()) {
    throw CapacityError("cannot encode " + std::to_string(values.size()) + " values into " +
                        std::to_string(ctx.slot_count()) + " slots");
  }
  if (level < 0 || level > ctx.max_level()) throw ParameterError("level out of range");
  if (!(scale > 0.0)) throw ParameterError("scale must be positive");
  std::vector<std::complex<double>> slots(ctx.slot_count());
  for (std::size_t i = 0; i < values.size(); ++i) slots[i] = values[i];
  const auto real_coeffs = ctx.slot_transform().slots_to_coeffs(slots);

  std::vector<std::int64_t> coeffs(ctx.ring_dim());
  double max_abs = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    // nearbyint in the default rounding mode rounds half to even.
    const double v = std::nearbyint(real_coeffs[i] * scale);
    if (!(std::abs(v) < 0x1.0p62)) throw CapacityError("scaled coefficient exceeds 2^62");
    coeffs[i] = static_cast<std::int64_t>(v);
    max_abs = std::max(max_abs, std::abs(v));
  }
  Plaintext pt;
  pt.poly = ctx.from_signed(coeffs, level, false, true);
  pt.scale = scale;
  pt.level = level;
  pt.message_bound = max_abs;
  return pt;
}

std::vector<double> decode(const HeContext& ctx, const Plaintext& pt, std::size_t count) {
  if (count > ctx.slot_count()) throw CapacityError("decode count exceeds slot count");
  RingPoly poly = pt.poly;
  ctx.from_ntt(poly);
  const auto centered = ctx.centered_coefficients(poly);
  std::vector<double> coeffs(centered.size());
  const long double inv_scale = 1.0L / static_cast<long double>(pt.scale);
  for (std::size_t i = 0; i < centered.size(); ++i) {
    coeffs[i] = static_cast<double>(static_cast<long double>(centered[i]) * inv_scale);
  }
  const auto slots = ctx.slot_transform().coeffs_to_slots(coeffs);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = slots[i].real();
  return out;
}

Ciphertext encrypt_symmetric(const HeContext& ctx, const Plaintext& pt, const SecretKey& sk,
                             std::uint64_t seed) {
  Sampler rng(seed);
  const int level = pt.level;
  RingPoly a = sample_uniform(ctx, level, false, rng);
  const auto e = sample_gaussian(ctx.ring_dim(), ctx.params().error_stddev, rng);
  Ciphertext ct;
  ct.c0 = ctx.from_signed(e, level, false, true);
  ctx.sub_inplace(ct.c0, ctx.multiply(a, ctx.restrict_to(sk.s, level)));
  ctx.add_inplace(ct.c0, pt.poly);
  ct.c1 = std::move(a);
  ct.level = level;
  ct.scale = pt.scale;
  ct.noise_bound = tail_bound(ctx);
  ct.message_bound = pt.message_bound;
  return ct;
}

Ciphertext encrypt(const HeContext& ctx, const Plaintext& pt, const PublicKey& pk,
                   std::uint64_t seed) {
  Sampler rng(seed);
  const int level = pt.level;
  const std::size_t n = ctx.ring_dim();
  const RingPoly v = ctx.from_signed(sample_ternary(n, rng), level, true, true);
  RingPoly u0 = ctx.from_signed(sample_gaussian(n, ctx.params().error_stddev, rng), level, true, true);
  RingPoly u1 = ctx.from_signed(sample_gaussian(n, ctx.params().error_stddev, rng), level, true, true);
  ctx.multiply_accumulate(u0, v, select_with_special(pk.p0, level));
  ctx.multiply_accumulate(u1, v, select_with_special(pk.p1, level));
  // Encrypting over Q*P and dividing by P shrinks v*e + e0 + e1*s to rounding size.
  Ciphertext ct;
  ct.c0 = ctx.divide_round_special(u0);
  ctx.add_inplace(ct.c0, pt.poly);
  ct.c1 = ctx.divide_round_special(u1);
  ct.level = level;
  ct.scale = pt.scale;
  const double nd = static_cast<double>(n);
  const double special = static_cast<double>(ctx.modulus(ctx.special_index()).value());
  ct.noise_bound = (2.0 * nd + 1.0) * tail_bound(ctx) / special + rounding_noise_bound(ctx);
  ct.message_bound = pt.message_bound;
  return ct;
}

Plaintext decrypt(const HeContext& ctx, const Ciphertext& ct, const SecretKey& sk) {
  Plaintext pt;
  pt.poly = ctx.multiply(ct.c1, ctx.restrict_to(sk.s, ct.level));
  ctx.add_inplace(pt.poly, ct.c0);
  pt.scale = ct.scale;
  pt.level = ct.level;
  pt.message_bound = ct.message_bound + ct.noise_bound;
  return pt;
}

Ciphertext add(const HeContext& ctx, const Ciphertext& a, const Ciphertext& b) {
  require_aligned(a, b);
  Ciphertext out = a;
  ctx.add_inplace(out.c0, b.c0);
  ctx.add_inplace(out.c1, b.c1);
  out.noise_bound = a.noise_bound + b.noise_bound;
  out.message_bound = a.message_bound + b.message_bound;
  return out;
}

Ciphertext sub(const HeContext& ctx, const Ciphertext& a, const Ciphertext& b) {
  require_aligned(a, b);
  Ciphertext out = a;
  ctx.sub_inplace(out.c0, b.c0);
  ctx.sub_inplace(out.c1, b.c1);
  out.noise_bound = a.noise_bound + b.noise_bound;
  out.message_bound = a.message_bound + b.message_bound;
  return out;
}

Ciphertext multiply_relin(const HeContext& ctx, const Ciphertext& a, const Ciphertext& b,
                          const KSwitchKey& relin_key) {
  if (a.level != b.level) throw AlignmentError("multiplication operands differ in level");
  if (a.level < 1) throw DepthExhaustedError("multiplicative depth exhausted at level 0");
  RingPoly d0 = ctx.multiply(a.c0, b.c0);
  RingPoly d1 = ctx.multiply(a.c0, b.c1);
  ctx.multiply_accumulate(d1, a.c1, b.c0);
  const RingPoly d2 = ctx.multiply(a.c1, b.c1);
  auto [k0, k1] = key_switch(ctx, d2, relin_key);
  ctx.add_inplace(d0, k0);
  ctx.add_inplace(d1, k1);

  Ciphertext out;
  out.c0 = std::move(d0);
  out.c1 = std::move(d1);
  out.level = a.level;
  out.scale = a.scale * b.scale;
  const double nd = static_cast<double>(ctx.ring_dim());
  out.noise_bound = nd * (a.message_bound * b.noise_bound + b.message_bound * a.noise_bound +
                          a.noise_bound * b.noise_bound) +
                    key_switch_noise_bound(ctx, a.level);
  out.message_bound = nd * a.message_bound * b.message_bound;
  return out;
}

Ciphertext rescale(const HeContext& ctx, const Ciphertext& ct) {
  if (ct.level < 1) throw DepthExhaustedError("cannot rescale at level 0");
  const double q = static_cast<double>(ctx.modulus(static_cast<std::size_t>(ct.level)).value());
  Ciphertext out;
  out.c0 = ctx.divide_round_last(ct.c0);
  out.c1 = ctx.divide_round_last(ct.c1);
  out.level = ct.level - 1;
  out.scale = ct.scale / q;
  out.noise_bound = ct.noise_bound / q + rounding_noise_bound(ctx);
  out.message_bound = ct.message_bound / q;
  return out;
}

Ciphertext rotate(const HeContext& ctx, const Ciphertext& ct, int steps,
                  const EvaluationKeys& keys) {
  const int slots = static_cast<int>(ctx.slot_count());
  int s = steps % slots;
  if (s < 0) s += slots;
  if (s == 0) return ct;
  const auto it = keys.rotation_keys.find(s);
  if (it == keys.rotation_keys.end()) throw MissingRotationKeyError(s);
  const u64 galois = ctx.galois_element(s);
  RingPoly r0 = ctx.automorphism_ntt(ct.c0, galois);
  const RingPoly r1 = ctx.automorphism_ntt(ct.c1, galois);
  auto [k0, k1] = key_switch(ctx, r1, it->second);
  ctx.add_inplace(r0, k0);

  Ciphertext out;
  out.c0 = std::move(r0);
  out.c1 = std::move(k1);
  out.level = ct.level;
  out.scale = ct.scale;
  out.noise_bound = ct.noise_bound + key_switch_noise_bound(ctx, ct.level);
  out.message_bound = ct.message_bound;
  return out;
}

}  // namespace dpcc::he
