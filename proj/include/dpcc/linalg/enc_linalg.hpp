// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpcc/he/ckks.hpp"
#include "dpcc/he/encryptor.hpp"
#include "dpcc/he/serialize.hpp"

namespace dpcc::linalg {

/// Diagonal-reformed K x L matrix: columns[i][j] = M(j, (i + j) mod L), each of length K.
struct ReformedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> columns;
};

/// One ciphertext per reformed column. Column i holds its K values in slots 0..K-1 and
/// zeros elsewhere.
struct EncryptedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t dup_len = 0;
  std::vector<he::Ciphertext> columns;
};

/// x repeated dup_len / L times in slots 0..dup_len-1.
struct EncryptedVector {
  he::Ciphertext ct;
  std::size_t logical_len = 0;
  std::size_t dup_len = 0;
};

ReformedMatrix reform_matrix(const Eigen::MatrixXd& m);
/// Inverse index map of reform_matrix.
Eigen::MatrixXd unreform_matrix(const ReformedMatrix& r);

/// out[j] = x[j mod L] for j < dup_len. Throws ShapeError unless L divides dup_len.
std::vector<double> duplicate_vector(std::span<const double> x, std::size_t dup_len);

/// Smallest duplication length that keeps every rotated read inside the repeated region:
/// the least multiple of `cols` that is >= rows + cols - 1.
std::size_t min_dup_len(std::size_t rows, std::size_t cols);

/// Rotation steps enc_matvec needs for an L-column matrix: 1..L-1.
std::set<int> rotation_steps_for(std::size_t cols);

EncryptedMatrix encrypt_matrix(he::Encryptor& enc, const Eigen::MatrixXd& m, std::size_t dup_len,
                               int level);
EncryptedVector encrypt_vector(he::Encryptor& enc, std::span<const double> x, std::size_t dup_len,
                               int level);

/// y = sum_i column_i * rot(x_dup, i), rescaled once. Terms are evaluated in parallel and
/// summed in index order, so the result is bit-identical to enc_matvec_serial.
he::Ciphertext enc_matvec(const he::HeContext& ctx, const EncryptedMatrix& m,
                          const EncryptedVector& x, const he::EvaluationKeys& keys);
/// Single-threaded reference evaluation.
he::Ciphertext enc_matvec_serial(const he::HeContext& ctx, const EncryptedMatrix& m,
                                 const EncryptedVector& x, const he::EvaluationKeys& keys);

inline constexpr std::uint32_t kEncMatrixMagic = 0x4d454344;  // "DCEM"
inline constexpr std::uint32_t kEncVectorMagic = 0x56454344;  // "DCEV"

he::Bytes serialize(const he::HeContext& ctx, const EncryptedMatrix& m);
he::Bytes serialize(const he::HeContext& ctx, const EncryptedVector& v);
EncryptedMatrix deserialize_matrix(const he::HeContext& ctx, std::span<const std::uint8_t> bytes);
EncryptedVector deserialize_vector(const he::HeContext& ctx, std::span<const std::uint8_t> bytes);

}  // namespace dpcc::linalg
