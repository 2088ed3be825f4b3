// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/he/context.hpp"

#include <bit>

#include "dpcc/error.hpp"

namespace dpcc::he {

namespace {

void require_same_shape(const RingPoly& a, const RingPoly& b) {
  if (a.ring_dim != b.ring_dim || a.level != b.level || a.with_special != b.with_special ||
      a.ntt_form != b.ntt_form) {
    throw AlignmentError("ring polynomials differ in level, basis or representation");
  }
}

}  // namespace

HeContext::HeContext(HeParams params)
    : params_((params.validate(), std::move(params))), slot_transform_(params_.ring_dim) {
  const std::size_t n = params_.ring_dim;
  moduli_.reserve(params_.modulus_chain.size());
  ntt_.reserve(params_.modulus_chain.size());
  for (auto q : params_.modulus_chain) {
    moduli_.emplace_back(q);
    ntt_.emplace_back(n, moduli_.back());
  }
  const std::size_t data_primes = moduli_.size() - 1;
  inv_q_.assign(data_primes, {});
  for (std::size_t l = 0; l < data_primes; ++l) {
    for (std::size_t j = 0; j < l; ++j) {
      inv_q_[l].push_back(moduli_[j].inv(moduli_[l].value() % moduli_[j].value()));
    }
  }
  const u64 special = moduli_.back().value();
  for (std::size_t j = 0; j < data_primes; ++j) {
    special_mod_.push_back(special % moduli_[j].value());
    inv_special_.push_back(moduli_[j].inv(special_mod_.back()));
  }
  const int log_n = std::countr_zero(n);
  bit_rev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    for (int b = 0; b < log_n; ++b) r |= static_cast<std::uint32_t>((i >> b) & 1) << (log_n - 1 - b);
    bit_rev_[i] = r;
  }
}

u64 HeContext::galois_element(int steps) const {
  const u64 two_n = 2 * static_cast<u64>(ring_dim());
  const std::int64_t slots = static_cast<std::int64_t>(slot_count());
  std::int64_t s = steps % slots;
  if (s < 0) s += slots;
  u64 g = 1;
  for (std::int64_t i = 0; i < s; ++i) g = (g * 5) % two_n;
  return g;
}

void HeContext::to_ntt(RingPoly& p) const {
  if (p.ntt_form) return;
  for (std::size_t i = 0; i < p.limb_count(); ++i) ntt_[chain_index(p, i)].forward(p.limb(i));
  p.ntt_form = true;
}

void HeContext::from_ntt(RingPoly& p) const {
  if (!p.ntt_form) return;
  for (std::size_t i = 0; i < p.limb_count(); ++i) ntt_[chain_index(p, i)].inverse(p.limb(i));
  p.ntt_form = false;
}

void HeContext::add_inplace(RingPoly& a, const RingPoly& b) const {
  require_same_shape(a, b);
  for (std::size_t i = 0; i < a.limb_count(); ++i) {
    const Modulus& q = moduli_[chain_index(a, i)];
    auto x = a.limb(i);
    auto y = b.limb(i);
    for (std::size_t k = 0; k < a.ring_dim; ++k) x[k] = q.add(x[k], y[k]);
  }
}

void HeContext::sub_inplace(RingPoly& a, const RingPoly& b) const {
  require_same_shape(a, b);
  for (std::size_t i = 0; i < a.limb_count(); ++i) {
    const Modulus& q = moduli_[chain_index(a, i)];
    auto x = a.limb(i);
    auto y = b.limb(i);
    for (std::size_t k = 0; k < a.ring_dim; ++k) x[k] = q.sub(x[k], y[k]);
  }
}

void HeContext::negate_inplace(RingPoly& a) const {
  for (std::size_t i = 0; i < a.limb_count(); ++i) {
    const Modulus& q = moduli_[chain_index(a, i)];
    for (auto& v : a.limb(i)) v = q.neg(v);
  }
}

RingPoly HeContext::multiply(const RingPoly& a, const RingPoly& b) const {
  RingPoly out(a.ring_dim, a.level, a.with_special, true);
  multiply_accumulate(out, a, b);
  return out;
}

void HeContext::multiply_accumulate(RingPoly& acc, const RingPoly& a, const RingPoly& b) const {
  require_same_shape(a, b);
  require_same_shape(acc, a);
  if (!a.ntt_form) throw AlignmentError("pointwise product needs NTT form");
  for (std::size_t i = 0; i < a.limb_count(); ++i) {
    const Modulus& q = moduli_[chain_index(a, i)];
    auto x = a.limb(i);
    auto y = b.limb(i);
    auto z = acc.limb(i);
    for (std::size_t k = 0; k < a.ring_dim; ++k) z[k] = q.add(z[k], q.mul(x[k], y[k]));
  }
}

RingPoly HeContext::automorphism(const RingPoly& p, u64 galois) const {
  if (p.ntt_form) throw AlignmentError("automorphism expects coefficient form");
  const std::size_t n = p.ring_dim;
  const u64 two_n = 2 * static_cast<u64>(n);
  RingPoly out(n, p.level, p.with_special, false);
  for (std::size_t i = 0; i < p.limb_count(); ++i) {
    const Modulus& q = moduli_[chain_index(p, i)];
    auto src = p.limb(i);
    auto dst = out.limb(i);
    for (std::size_t k = 0; k < n; ++k) {
      const u64 j = (static_cast<u64>(k) * galois) % two_n;
      if (j < n) {
        dst[j] = src[k];
      } else {
        dst[j - n] = q.neg(src[k]);
      }
    }
  }
  return out;
}

RingPoly HeContext::automorphism_ntt(const RingPoly& p, u64 galois) const {
  if (!p.ntt_form) throw AlignmentError("automorphism_ntt expects NTT form");
  // Slot k of the transform holds the evaluation at psi^(2*rev(k)+1); the automorphism
  // reads the evaluation at that exponent times g.
  const std::size_t n = p.ring_dim;
  const u64 mask = 2 * static_cast<u64>(n) - 1;
  std::vector<std::uint32_t> index(n);
  for (std::size_t k = 0; k < n; ++k) {
    const u64 e = ((2 * static_cast<u64>(bit_rev_[k]) + 1) * galois) & mask;
    index[k] = bit_rev_[(e - 1) >> 1];
  }
  RingPoly out(n, p.level, p.with_special, true);
  for (std::size_t i = 0; i < p.limb_count(); ++i) {
    auto src = p.limb(i);
    auto dst = out.limb(i);
    for (std::size_t k = 0; k < n; ++k) dst[k] = src[index[k]];
  }
  return out;
}

RingPoly HeContext::from_signed(std::span<const std::int64_t> coeffs, int level, bool with_special,
                                bool ntt) const {
  const std::size_t n = ring_dim();
  if (coeffs.size() != n) throw ShapeError("coefficient vector length != ring_dim");
  RingPoly out(n, level, with_special, false);
  for (std::size_t i = 0; i < out.limb_count(); ++i) {
    const Modulus& q = moduli_[chain_index(out, i)];
    auto dst = out.limb(i);
    for (std::size_t k = 0; k < n; ++k) dst[k] = q.from_signed(coeffs[k]);
  }
  if (ntt) to_ntt(out);
  return out;
}

RingPoly HeContext::restrict_to(const RingPoly& p, int level) const {
  if (level > p.level) throw AlignmentError("cannot raise the level of a polynomial");
  RingPoly out(p.ring_dim, level, false, p.ntt_form);
  const std::size_t words = p.ring_dim * (static_cast<std::size_t>(level) + 1);
  std::copy(p.data.begin(), p.data.begin() + static_cast<std::ptrdiff_t>(words), out.data.begin());
  return out;
}

RingPoly HeContext::divide_round_limb(const RingPoly& p, std::size_t drop_limb,
                                      bool keep_special) const {
  const std::size_t n = p.ring_dim;
  const std::size_t dropped_chain = chain_index(p, drop_limb);
  const Modulus& qd = moduli_[dropped_chain];
  std::vector<u64> last(p.limb(drop_limb).begin(), p.limb(drop_limb).end());
  if (p.ntt_form) ntt_[dropped_chain].inverse(last);
  const u64 half = qd.value() >> 1;

  const int out_level = keep_special ? p.level : p.level - 1;
  RingPoly out(n, out_level, false, p.ntt_form);
  std::vector<u64> lifted(n);
  for (std::size_t i = 0; i < out.limb_count(); ++i) {
    const Modulus& q = moduli_[i];
    // Centered lift of the dropped residue into q_i.
    const u64 qd_mod = qd.value() % q.value();
    for (std::size_t k = 0; k < n; ++k) {
      const u64 v = last[k];
      lifted[k] = v > half ? q.sub(q.reduce_u64(v), qd_mod) : q.reduce_u64(v);
    }
    if (p.ntt_form) ntt_[i].forward(lifted);
    const u64 inv = keep_special ? inv_special_[i] : inv_q_[static_cast<std::size_t>(p.level)][i];
    auto src = p.limb(i);
    auto dst = out.limb(i);
    for (std::size_t k = 0; k < n; ++k) dst[k] = q.mul(q.sub(src[k], lifted[k]), inv);
  }
  return out;
}

RingPoly HeContext::divide_round_last(const RingPoly& p) const {
  if (p.with_special) throw AlignmentError("drop the special limb first");
  if (p.level < 1) throw DepthExhaustedError("no prime left to divide by at level 0");
  return divide_round_limb(p, static_cast<std::size_t>(p.level), false);
}

RingPoly HeContext::divide_round_special(const RingPoly& p) const {
  if (!p.with_special) throw AlignmentError("polynomial carries no special limb");
  return divide_round_limb(p, p.limb_count() - 1, true);
}

std::vector<i128> HeContext::centered_coefficients(const RingPoly& p) const {
  if (p.ntt_form || p.with_special) {
    throw AlignmentError("centered_coefficients expects a coefficient-form data polynomial");
  }
  const std::size_t limbs = p.limb_count();
  u128 big_q = 1;
  for (std::size_t i = 0; i < limbs; ++i) big_q *= moduli_[i].value();
  std::vector<u128> q_hat(limbs);
  std::vector<u64> q_hat_inv(limbs);
  for (std::size_t i = 0; i < limbs; ++i) {
    q_hat[i] = big_q / moduli_[i].value();
    q_hat_inv[i] = moduli_[i].inv(static_cast<u64>(q_hat[i] % moduli_[i].value()));
  }
  const u128 half = big_q >> 1;
  std::vector<i128> out(p.ring_dim);
  for (std::size_t k = 0; k < p.ring_dim; ++k) {
    u128 acc = 0;
    for (std::size_t i = 0; i < limbs; ++i) {
      const u64 t = moduli_[i].mul(p.limb(i)[k], q_hat_inv[i]);
      acc += static_cast<u128>(t) * q_hat[i];
      if (acc >= big_q) acc -= big_q;
    }
    out[k] = acc > half ? -static_cast<i128>(big_q - acc) : static_cast<i128>(acc);
  }
  return out;
}

}  // namespace dpcc::he
