// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/app/roles.hpp"

#include "dpcc/error.hpp"

namespace dpcc::app {

CloudRole::CloudRole(const he::HeParams& params, ByteView evaluation_keys)
    : ctx_(params), keys_(he::deserialize_evaluation_keys(ctx_, evaluation_keys)) {}

void CloudRole::load_gains(ByteView enc_mr, ByteView enc_mv) {
  auto mr = linalg::deserialize_matrix(ctx_, enc_mr);
  auto mv = linalg::deserialize_matrix(ctx_, enc_mv);
  if (mr.rows != mv.rows) throw ShapeError("M_r and M_v differ in row count");
  mr_ = std::move(mr);
  mv_ = std::move(mv);
  ++epoch_;
}

he::Bytes CloudRole::round(ByteView enc_rf, ByteView enc_vp) const {
  if (!mr_ || !mv_) throw ShapeError("cloud has no gains loaded");
  const auto rf = linalg::deserialize_vector(ctx_, enc_rf);
  const auto vp = linalg::deserialize_vector(ctx_, enc_vp);
  const he::Ciphertext a = linalg::enc_matvec(ctx_, *mr_, rf, keys_);
  const he::Ciphertext b = linalg::enc_matvec(ctx_, *mv_, vp, keys_);
  return he::serialize(ctx_, he::sub(ctx_, a, b));
}

namespace {

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t tag) {
  he::Sampler s(seed ^ (tag * 0x9e3779b97f4a7c15ULL));
  return s.next();
}

}  // namespace

EdgeRole::EdgeRole(const he::HeParams& params, std::size_t N, bool public_key_uploads,
                   std::uint64_t seed)
    : ctx_(params),
      N_(N),
      keys_(he::keygen(ctx_, linalg::rotation_steps_for(2 * N), child_seed(seed, 1))),
      enc_(public_key_uploads ? he::Encryptor(ctx_, keys_.public_key, child_seed(seed, 2))
                              : he::Encryptor(ctx_, keys_.secret_key, child_seed(seed, 2))) {}

he::Bytes EdgeRole::evaluation_keys() const { return he::serialize(ctx_, keys_.evaluation); }

std::pair<he::Bytes, he::Bytes> EdgeRole::encrypt_gains(const control::ControllerGains& gains) {
  const int top = ctx_.max_level();
  const auto rows = static_cast<std::size_t>(gains.M_r.rows());
  const auto mr = linalg::encrypt_matrix(
      enc_, gains.M_r, linalg::min_dup_len(rows, static_cast<std::size_t>(gains.M_r.cols())), top);
  const auto mv = linalg::encrypt_matrix(
      enc_, gains.M_v, linalg::min_dup_len(rows, static_cast<std::size_t>(gains.M_v.cols())), top);
  return {linalg::serialize(ctx_, mr), linalg::serialize(ctx_, mv)};
}

std::pair<he::Bytes, he::Bytes> EdgeRole::encrypt_round(const Eigen::VectorXd& r_f,
                                                        const Eigen::VectorXd& v_p) {
  const int top = ctx_.max_level();
  const std::size_t rows = N_;
  const auto rf = linalg::encrypt_vector(
      enc_, std::span(r_f.data(), static_cast<std::size_t>(r_f.size())),
      linalg::min_dup_len(rows, static_cast<std::size_t>(r_f.size())), top);
  const auto vp = linalg::encrypt_vector(
      enc_, std::span(v_p.data(), static_cast<std::size_t>(v_p.size())),
      linalg::min_dup_len(rows, static_cast<std::size_t>(v_p.size())), top);
  return {linalg::serialize(ctx_, rf), linalg::serialize(ctx_, vp)};
}

std::vector<double> EdgeRole::decrypt_reply(ByteView reply, std::size_t count) const {
  const he::Ciphertext ct = he::deserialize_ciphertext(ctx_, reply);
  return he::decode(ctx_, he::decrypt(ctx_, ct, keys_.secret_key), count);
}

}  // namespace dpcc::app
