// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpcc/he/encoder.hpp"
#include "dpcc/he/modarith.hpp"
#include "dpcc/he/ntt.hpp"
#include "dpcc/he/params.hpp"

namespace dpcc::he {

/// Element of Z_Q[X]/(X^n + 1) in residue form: one limb of n words per prime.
///
/// Limbs 0..level hold residues modulo q_0..q_level. When `with_special` is set an extra
/// trailing limb holds residues modulo the special prime (key-switching basis only).
struct RingPoly {
  std::size_t ring_dim = 0;
  int level = 0;
  bool with_special = false;
  bool ntt_form = false;
  std::vector<u64> data;

  RingPoly() = default;
  RingPoly(std::size_t n, int lvl, bool special, bool ntt)
      : ring_dim(n), level(lvl), with_special(special), ntt_form(ntt),
        data(n * (static_cast<std::size_t>(lvl) + 1 + (special ? 1 : 0)), 0) {}

  std::size_t limb_count() const noexcept {
    return static_cast<std::size_t>(level) + 1 + (with_special ? 1 : 0);
  }
  std::span<u64> limb(std::size_t i) noexcept { return {data.data() + i * ring_dim, ring_dim}; }
  std::span<const u64> limb(std::size_t i) const noexcept {
    return {data.data() + i * ring_dim, ring_dim};
  }

  friend bool operator==(const RingPoly&, const RingPoly&) = default;
};

/// Precomputed tables for one parameter set. Immutable after construction and safe to share.
class HeContext {
 public:
  explicit HeContext(HeParams params);

  const HeParams& params() const noexcept { return params_; }
  std::size_t ring_dim() const noexcept { return params_.ring_dim; }
  std::size_t slot_count() const noexcept { return params_.ring_dim / 2; }
  int max_level() const noexcept { return params_.max_level(); }
  /// Index of the special prime in the modulus chain.
  std::size_t special_index() const noexcept { return params_.modulus_chain.size() - 1; }

  const Modulus& modulus(std::size_t chain_index) const { return moduli_[chain_index]; }
  const NttTables& ntt(std::size_t chain_index) const { return ntt_[chain_index]; }
  const SlotTransform& slot_transform() const noexcept { return slot_transform_; }

  /// Chain index of limb `i` of `p`.
  std::size_t chain_index(const RingPoly& p, std::size_t i) const noexcept {
    return (p.with_special && i == p.limb_count() - 1) ? special_index() : i;
  }

  /// q_l^{-1} mod q_j for j < l.
  u64 inv_q(int l, std::size_t j) const { return inv_q_[static_cast<std::size_t>(l)][j]; }
  /// P^{-1} mod q_j.
  u64 inv_special(std::size_t j) const { return inv_special_[j]; }
  /// P mod q_j.
  u64 special_mod(std::size_t j) const { return special_mod_[j]; }

  /// Galois element 5^steps mod 2n for a left rotation by `steps` slots (negative allowed).
  u64 galois_element(int steps) const;

  // Polynomial kernels. All operands must share level, basis and representation.
  void to_ntt(RingPoly& p) const;
  void from_ntt(RingPoly& p) const;
  void add_inplace(RingPoly& a, const RingPoly& b) const;
  void sub_inplace(RingPoly& a, const RingPoly& b) const;
  void negate_inplace(RingPoly& a) const;
  /// Pointwise product; both operands in NTT form.
  RingPoly multiply(const RingPoly& a, const RingPoly& b) const;
  void multiply_accumulate(RingPoly& acc, const RingPoly& a, const RingPoly& b) const;
  /// X -> X^g on a coefficient-form polynomial.
  RingPoly automorphism(const RingPoly& p, u64 galois) const;
  /// X -> X^g on an NTT-form polynomial: a permutation of the evaluation points.
  RingPoly automorphism_ntt(const RingPoly& p, u64 galois) const;
  /// Signed integer coefficients embedded into every limb of the given basis.
  RingPoly from_signed(std::span<const std::int64_t> coeffs, int level, bool with_special,
                       bool ntt) const;
  /// Restricts a polynomial to the data primes q_0..level (drops higher limbs and the special
  /// limb). Works in either representation.
  RingPoly restrict_to(const RingPoly& p, int level) const;
  /// Divides by the last data prime with rounding and drops that limb. NTT form in and out.
  RingPoly divide_round_last(const RingPoly& p) const;
  /// Divides by the special prime with rounding and drops the special limb. NTT form in and out.
  RingPoly divide_round_special(const RingPoly& p) const;

  /// Centered integer coefficients of a coefficient-form poly over q_0..q_level.
  std::vector<i128> centered_coefficients(const RingPoly& p) const;

 private:
  RingPoly divide_round_limb(const RingPoly& p, std::size_t drop_limb, bool keep_special) const;

  HeParams params_;
  SlotTransform slot_transform_;
  std::vector<Modulus> moduli_;
  std::vector<NttTables> ntt_;
  std::vector<std::vector<u64>> inv_q_;
  std::vector<u64> inv_special_;
  std::vector<u64> special_mod_;
  std::vector<std::uint32_t> bit_rev_;
};

}  // namespace dpcc::he
