// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dpcc::he {

/// Encryption parameters for the leveled CKKS-style scheme.
///
/// `modulus_chain` lists q_0, ..., q_L followed by one special prime used only for key
/// switching. Ciphertexts live at levels 0..L; level l uses q_0..q_l.
struct HeParams {
  std::size_t ring_dim = 4096;
  std::vector<std::uint64_t> modulus_chain;
  int scale_bits = 25;
  double error_stddev = 3.2;
  int security_bits = 128;

  std::size_t slot_count() const noexcept { return ring_dim / 2; }
  /// Highest ciphertext level (number of rescales available).
  int max_level() const noexcept { return static_cast<int>(modulus_chain.size()) - 2; }
  std::uint64_t special_prime() const { return modulus_chain.back(); }
  double default_scale() const noexcept;
  int total_modulus_bits() const noexcept;

  /// Throws ParameterError naming the first violated invariant.
  void validate() const;
  /// Non-fatal findings, e.g. a modulus chain above the 128-bit security bound.
  std::vector<std::string> warnings() const;

  /// Generates a chain from prime bit sizes: `data_bits` for q_0..q_L then `special_bits`.
  /// Primes after q_0 are picked as close to 2^bits as possible.
  static HeParams from_bit_sizes(std::size_t ring_dim, const std::vector<int>& data_bits,
                                 int special_bits, int scale_bits, double error_stddev = 3.2);

  /// Three-prime chain used for the control experiments: a 40-bit base prime, one rescale
  /// prime of `scale_bits` bits and a special prime, at ring dimension 4096.
  static HeParams control_default(int scale_bits);
};

/// Largest total modulus bit count for 128-bit security at a given ring dimension,
/// ternary secret, from the homomorphic encryption standard tables. 0 if not tabulated.
int max_modulus_bits_128(std::size_t ring_dim) noexcept;

}  // namespace dpcc::he
