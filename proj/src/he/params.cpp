// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/he/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "dpcc/error.hpp"
#include "dpcc/he/modarith.hpp"

namespace dpcc::he {

int max_modulus_bits_128(std::size_t ring_dim) noexcept {
  switch (ring_dim) {
    case 1024: return 27;
    case 2048: return 54;
    case 4096: return 109;
    case 8192: return 218;
    case 16384: return 438;
    case 32768: return 881;
    default: return 0;
  }
}

double HeParams::default_scale() const noexcept { return std::ldexp(1.0, scale_bits); }

int HeParams::total_modulus_bits() const noexcept {
  int total = 0;
  for (auto q : modulus_chain) total += std::bit_width(q);
  return total;
}

void HeParams::validate() const {
  if (ring_dim < 8 || !std::has_single_bit(ring_dim)) {
    throw ParameterError("ring_dim must be a power of two >= 8");
  }
  if (modulus_chain.size() < 2) {
    throw ParameterError("modulus_chain needs at least one data prime and one special prime");
  }
  const u64 two_n = 2 * static_cast<u64>(ring_dim);
  for (std::size_t i = 0; i < modulus_chain.size(); ++i) {
    const u64 q = modulus_chain[i];
    if (q >= (u64{1} << 62) || !is_prime(q)) {
      throw ParameterError("modulus_chain[" + std::to_string(i) + "] is not a prime below 2^62");
    }
    if (q % two_n != 1) {
      throw ParameterError("modulus_chain[" + std::to_string(i) + "] is not 1 mod 2*ring_dim");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (modulus_chain[j] == q) throw ParameterError("modulus_chain primes must be distinct");
    }
  }
  // Decoding reconstructs coefficients in 128-bit integers.
  int data_bits = 0;
  for (std::size_t i = 0; i + 1 < modulus_chain.size(); ++i) {
    data_bits += std::bit_width(modulus_chain[i]);
  }
  if (data_bits > 125) throw ParameterError("data primes exceed 125 bits in total");
  if (scale_bits < 1 || scale_bits > 60) throw ParameterError("scale_bits must lie in [1, 60]");
  if (!(error_stddev > 0.0)) throw ParameterError("error_stddev must be positive");
}

std::vector<std::string> HeParams::warnings() const {
  std::vector<std::string> out;
  const int bound = max_modulus_bits_128(ring_dim);
  if (bound == 0) {
    out.push_back("ring_dim " + std::to_string(ring_dim) + " is below the tabulated security range");
  } else if (total_modulus_bits() > bound) {
    out.push_back("modulus chain has " + std::to_string(total_modulus_bits()) +
                  " bits; 128-bit security allows " + std::to_string(bound));
  }
  return out;
}

HeParams HeParams::from_bit_sizes(std::size_t ring_dim, const std::vector<int>& data_bits,
                                  int special_bits, int scale_bits, double error_stddev) {
  HeParams p;
  p.ring_dim = ring_dim;
  p.scale_bits = scale_bits;
  p.error_stddev = error_stddev;
  for (std::size_t i = 0; i < data_bits.size(); ++i) {
    p.modulus_chain.push_back(find_ntt_prime(data_bits[i], ring_dim, p.modulus_chain, i > 0));
  }
  p.modulus_chain.push_back(find_ntt_prime(special_bits, ring_dim, p.modulus_chain, false));
  return p;
}

HeParams HeParams::control_default(int scale_bits) {
  // q_0 + q_1 + special <= 109 bits; the special prime stays larger than q_0.
  HeParams p;
  p.ring_dim = 4096;
  p.scale_bits = scale_bits;
  p.modulus_chain.push_back(find_ntt_prime(40, p.ring_dim, {}, false));
  p.modulus_chain.push_back(find_ntt_prime(scale_bits, p.ring_dim, p.modulus_chain, true));
  const int used = std::bit_width(p.modulus_chain[0]) + std::bit_width(p.modulus_chain[1]);
  const int special = std::min(61, max_modulus_bits_128(p.ring_dim) - used);
  p.modulus_chain.push_back(find_ntt_prime(special, p.ring_dim, p.modulus_chain, false));
  return p;
}

}  // namespace dpcc::he
