// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpcc/he/ckks.hpp"

namespace dpcc::he {

using Bytes = std::vector<std::uint8_t>;

// Wire format, all integers little-endian:
//   header (16 bytes): magic u32 | version u16 | level u16 | ring_dim u32 | scale_bits u32
//   body: object specific; every polynomial is written in coefficient form as
//         u32 limb count, then per limb a u64 length followed by that many u64 words.

inline constexpr std::uint16_t kWireVersion = 1;
inline constexpr std::uint32_t kCiphertextMagic = 0x54434344;  // "DCCT"
inline constexpr std::uint32_t kPublicKeyMagic = 0x4b504344;   // "DCPK"
inline constexpr std::uint32_t kEvalKeysMagic = 0x4b454344;    // "DCEK"
inline constexpr std::uint32_t kSecretKeyMagic = 0x4b534344;   // "DCSK"

Bytes serialize(const HeContext& ctx, const Ciphertext& ct);
Bytes serialize(const HeContext& ctx, const PublicKey& pk);
Bytes serialize(const HeContext& ctx, const EvaluationKeys& keys);
Bytes serialize(const HeContext& ctx, const SecretKey& sk);

Ciphertext deserialize_ciphertext(const HeContext& ctx, std::span<const std::uint8_t> bytes);
PublicKey deserialize_public_key(const HeContext& ctx, std::span<const std::uint8_t> bytes);
EvaluationKeys deserialize_evaluation_keys(const HeContext& ctx,
                                           std::span<const std::uint8_t> bytes);
SecretKey deserialize_secret_key(const HeContext& ctx, std::span<const std::uint8_t> bytes);

namespace wire {

/// Append-only little-endian encoder shared by the higher-level formats.
class Writer {
 public:
  void write_u16(std::uint16_t v) { put(v, 2); }
  void write_u32(std::uint32_t v) { put(v, 4); }
  void write_u64(std::uint64_t v) { put(v, 8); }
  void write_f64(double v);
  void header(std::uint32_t magic, int level, const HeContext& ctx);
  void poly(const HeContext& ctx, const RingPoly& p);
  void ciphertext_body(const HeContext& ctx, const Ciphertext& ct);
  void append(std::span<const std::uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
  Bytes take() { return std::move(buf_); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint16_t read_u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t read_u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t read_u64() { return get(8); }
  double read_f64();
  /// Checks magic, version and ring dimension; returns the level field.
  int header(std::uint32_t magic, const HeContext& ctx);
  RingPoly poly(const HeContext& ctx, int level, bool with_special);
  Ciphertext ciphertext_body(const HeContext& ctx, int level);
  std::span<const std::uint8_t> take(std::size_t n);
  bool done() const noexcept { return pos_ == bytes_.size(); }
  void expect_done() const;

 private:
  std::uint64_t get(int n);
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace wire

}  // namespace dpcc::he
