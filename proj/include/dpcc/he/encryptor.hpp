// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <variant>

#include "dpcc/he/ckks.hpp"
#include "dpcc/he/sampling.hpp"

namespace dpcc::he {

/// Encrypts a stream of plaintexts under one key. Each call draws a fresh per-ciphertext seed
/// from a master stream, so a sequence of encryptions is reproducible from one seed.
class Encryptor {
 public:
  Encryptor(const HeContext& ctx, const SecretKey& sk, std::uint64_t seed)
      : ctx_(&ctx), key_(&sk), seeds_(seed) {}
  Encryptor(const HeContext& ctx, const PublicKey& pk, std::uint64_t seed)
      : ctx_(&ctx), key_(&pk), seeds_(seed) {}

  Ciphertext encrypt(const Plaintext& pt) {
    const std::uint64_t seed = seeds_.next();
    if (const auto* sk = std::get_if<const SecretKey*>(&key_)) {
      return encrypt_symmetric(*ctx_, pt, **sk, seed);
    }
    return he::encrypt(*ctx_, pt, *std::get<const PublicKey*>(key_), seed);
  }

  const HeContext& context() const noexcept { return *ctx_; }

 private:
  const HeContext* ctx_;
  std::variant<const SecretKey*, const PublicKey*> key_;
  Sampler seeds_;
};

}  // namespace dpcc::he
