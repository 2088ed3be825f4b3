// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/he/encoder.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "dpcc/error.hpp"

namespace dpcc::he {

namespace {

void bit_reverse_permute(std::vector<std::complex<double>>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
}

}  // namespace

SlotTransform::SlotTransform(std::size_t ring_dim) : n_(ring_dim), m_(2 * ring_dim) {
  if (ring_dim < 4 || !std::has_single_bit(ring_dim)) {
    throw ParameterError("ring_dim must be a power of two");
  }
  ksi_.resize(m_ + 1);
  for (std::size_t j = 0; j <= m_; ++j) {
    const long double angle = 2.0L * std::numbers::pi_v<long double> * j / m_;
    ksi_[j] = {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }
  rot_group_.resize(n_ / 2);
  std::size_t five_pow = 1;
  for (auto& r : rot_group_) {
    r = five_pow;
    five_pow = (five_pow * 5) % m_;
  }
}

void SlotTransform::special_fft(std::vector<std::complex<double>>& v) const {
  const std::size_t size = v.size();
  bit_reverse_permute(v);
  for (std::size_t len = 2; len <= size; len <<= 1) {
    const std::size_t lenh = len >> 1;
    const std::size_t lenq = len << 2;
    const std::size_t gap = m_ / lenq;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (rot_group_[j] % lenq) * gap;
        const auto u = v[i + j];
        const auto w = v[i + j + lenh] * ksi_[idx];
        v[i + j] = u + w;
        v[i + j + lenh] = u - w;
      }
    }
  }
}

void SlotTransform::special_ifft(std::vector<std::complex<double>>& v) const {
  const std::size_t size = v.size();
  for (std::size_t len = size; len >= 2; len >>= 1) {
    const std::size_t lenh = len >> 1;
    const std::size_t lenq = len << 2;
    const std::size_t gap = m_ / lenq;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (lenq - (rot_group_[j] % lenq)) * gap;
        const auto u = v[i + j] + v[i + j + lenh];
        const auto w = (v[i + j] - v[i + j + lenh]) * ksi_[idx];
        v[i + j] = u;
        v[i + j + lenh] = w;
      }
    }
  }
  bit_reverse_permute(v);
  const double inv = 1.0 / static_cast<double>(size);
  for (auto& x : v) x *= inv;
}

std::vector<double> SlotTransform::slots_to_coeffs(
    std::span<const std::complex<double>> slots) const {
  if (slots.size() != n_ / 2) throw CapacityError("slot vector must have ring_dim/2 entries");
  std::vector<std::complex<double>> v(slots.begin(), slots.end());
  special_ifft(v);
  std::vector<double> coeffs(n_);
  const std::size_t half = n_ / 2;
  for (std::size_t i = 0; i < half; ++i) {
    coeffs[i] = v[i].real();
    coeffs[i + half] = v[i].imag();
  }
  return coeffs;
}

std::vector<std::complex<double>> SlotTransform::coeffs_to_slots(
    std::span<const double> coeffs) const {
  if (coeffs.size() != n_) throw ShapeError("coefficient vector must have ring_dim entries");
  const std::size_t half = n_ / 2;
  std::vector<std::complex<double>> v(half);
  for (std::size_t i = 0; i < half; ++i) v[i] = {coeffs[i], coeffs[i + half]};
  special_fft(v);
  return v;
}

}  // namespace dpcc::he
