// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "dpcc/control/dpc.hpp"
#include "dpcc/he/ckks.hpp"
#include "dpcc/he/encryptor.hpp"
#include "dpcc/he/serialize.hpp"
#include "dpcc/linalg/enc_linalg.hpp"

namespace dpcc::app {

using ByteView = std::span<const std::uint8_t>;

/// Untrusted evaluator. Everything it receives crosses the wire format: public parameters,
/// serialized evaluation keys, serialized encrypted matrices and vectors. Nothing in this
/// interface can carry a secret key or plaintext plant data.
class CloudRole {
 public:
  CloudRole(const he::HeParams& params, ByteView evaluation_keys);

  /// Installs new encrypted gains (reformed M_r and M_v) and advances the epoch.
  void load_gains(ByteView enc_mr, ByteView enc_mv);

  /// Serialized Enc(M_r r_f - M_v v_p).
  he::Bytes round(ByteView enc_rf, ByteView enc_vp) const;

  int epoch() const noexcept { return epoch_; }

 private:
  he::HeContext ctx_;
  he::EvaluationKeys keys_;
  std::optional<linalg::EncryptedMatrix> mr_;
  std::optional<linalg::EncryptedMatrix> mv_;
  int epoch_ = 0;
};

/// Trusted side: owns the key set, encrypts gains and per-step vectors, decrypts replies.
class EdgeRole {
 public:
  EdgeRole(const he::HeParams& params, std::size_t N, bool public_key_uploads,
           std::uint64_t seed);
  // The encryptor points into this object.
  EdgeRole(const EdgeRole&) = delete;
  EdgeRole& operator=(const EdgeRole&) = delete;

  const he::HeContext& context() const noexcept { return ctx_; }
  he::Bytes evaluation_keys() const;

  /// Serialized (Enc(reform(M_r)), Enc(reform(M_v))).
  std::pair<he::Bytes, he::Bytes> encrypt_gains(const control::ControllerGains& gains);
  /// Serialized (Enc(r_f dup), Enc(v_p dup)).
  std::pair<he::Bytes, he::Bytes> encrypt_round(const Eigen::VectorXd& r_f,
                                                const Eigen::VectorXd& v_p);
  /// First `count` entries of the decrypted reply.
  std::vector<double> decrypt_reply(ByteView reply, std::size_t count) const;

  const he::KeySet& keys() const noexcept { return keys_; }

 private:
  he::HeContext ctx_;
  std::size_t N_;
  he::KeySet keys_;
  he::Encryptor enc_;
};

}  // namespace dpcc::app
