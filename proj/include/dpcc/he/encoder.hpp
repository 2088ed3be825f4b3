// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dpcc::he {

/// Canonical-embedding transform between n/2 complex slots and a real polynomial of degree < n.
///
/// Slot j is the evaluation at zeta^(5^j) with zeta = exp(i*pi/n), so X -> X^(5^r) rotates the
/// slot vector left by r.
class SlotTransform {
 public:
  explicit SlotTransform(std::size_t ring_dim);

  std::size_t ring_dim() const noexcept { return n_; }
  std::size_t slots() const noexcept { return n_ / 2; }

  /// Slots -> real coefficients (length n). Input length must equal slots().
  std::vector<double> slots_to_coeffs(std::span<const std::complex<double>> slots) const;
  /// Real coefficients (length n) -> slots.
  std::vector<std::complex<double>> coeffs_to_slots(std::span<const double> coeffs) const;

 private:
  void special_fft(std::vector<std::complex<double>>& v) const;
  void special_ifft(std::vector<std::complex<double>>& v) const;

  std::size_t n_;
  std::size_t m_;  // 2n
  std::vector<std::complex<double>> ksi_;
  std::vector<std::size_t> rot_group_;
};

}  // namespace dpcc::he
