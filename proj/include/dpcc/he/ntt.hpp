// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "dpcc/he/modarith.hpp"

namespace dpcc::he {

/// Negacyclic NTT over Z_q[X]/(X^n + 1) for one prime q = 1 (mod 2n).
///
/// Forward output is in bit-reversed evaluation order; pointwise products of two forward
/// transforms followed by `inverse` give the negacyclic convolution.
class NttTables {
 public:
  NttTables(std::size_t n, const Modulus& q);

  std::size_t size() const noexcept { return n_; }
  const Modulus& modulus() const noexcept { return q_; }
  /// Primitive 2n-th root of unity used for the twist.
  u64 psi() const noexcept { return psi_; }

  void forward(std::span<u64> a) const noexcept;
  void inverse(std::span<u64> a) const noexcept;

 private:
  std::size_t n_;
  Modulus q_;
  u64 psi_ = 0;
  std::vector<u64> psi_rev_, psi_rev_shoup_;
  std::vector<u64> psi_inv_rev_, psi_inv_rev_shoup_;
  u64 n_inv_ = 0, n_inv_shoup_ = 0;
};

/// Schoolbook negacyclic product, O(n^2). Serial reference for the NTT path.
std::vector<u64> negacyclic_multiply_reference(std::span<const u64> a, std::span<const u64> b,
                                               const Modulus& q);

}  // namespace dpcc::he
