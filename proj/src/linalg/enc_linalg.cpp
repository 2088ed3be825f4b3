// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/linalg/enc_linalg.hpp"

#include <numeric>
#include <string>

#include "dpcc/error.hpp"

namespace dpcc::linalg {

ReformedMatrix reform_matrix(const Eigen::MatrixXd& m) {
  const auto k = static_cast<std::size_t>(m.rows());
  const auto l = static_cast<std::size_t>(m.cols());
  if (k == 0 || l == 0) throw ShapeError("reform_matrix: empty matrix");
  ReformedMatrix r{k, l, std::vector<std::vector<double>>(l, std::vector<double>(k))};
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      r.columns[i][j] = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>((i + j) % l));
    }
  }
  return r;
}

Eigen::MatrixXd unreform_matrix(const ReformedMatrix& r) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r.rows), static_cast<Eigen::Index>(r.cols));
  for (std::size_t i = 0; i < r.cols; ++i) {
    for (std::size_t j = 0; j < r.rows; ++j) {
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>((i + j) % r.cols)) =
          r.columns[i][j];
    }
  }
  return m;
}

std::vector<double> duplicate_vector(std::span<const double> x, std::size_t dup_len) {
  if (x.empty() || dup_len % x.size() != 0) {
    throw ShapeError("duplication length " + std::to_string(dup_len) +
                     " is not a multiple of the vector length " + std::to_string(x.size()));
  }
  std::vector<double> out(dup_len);
  for (std::size_t j = 0; j < dup_len; ++j) out[j] = x[j % x.size()];
  return out;
}

std::size_t min_dup_len(std::size_t rows, std::size_t cols) {
  const std::size_t need = rows + cols - 1;
  return (need + cols - 1) / cols * cols;
}

std::set<int> rotation_steps_for(std::size_t cols) {
  std::set<int> steps;
  for (std::size_t i = 1; i < cols; ++i) steps.insert(static_cast<int>(i));
  return steps;
}

namespace {

void check_dup_len(const he::HeContext& ctx, std::size_t rows, std::size_t cols,
                   std::size_t dup_len) {
  if (dup_len % cols != 0) throw ShapeError("dup_len must be a multiple of the column count");
  if (dup_len < rows + cols - 1) {
    throw ShapeError("dup_len " + std::to_string(dup_len) + " < rows + cols - 1 = " +
                     std::to_string(rows + cols - 1));
  }
  if (dup_len > ctx.slot_count()) throw CapacityError("dup_len exceeds slot count");
}

he::Ciphertext term(const he::HeContext& ctx, const EncryptedMatrix& m, const EncryptedVector& x,
                    const he::EvaluationKeys& keys, std::size_t i) {
  const he::Ciphertext rotated = he::rotate(ctx, x.ct, static_cast<int>(i), keys);
  return he::multiply_relin(ctx, m.columns[i], rotated, keys.relin_key);
}

void check_operands(const EncryptedMatrix& m, const EncryptedVector& x) {
  if (m.cols != x.logical_len) {
    throw ShapeError("matrix has " + std::to_string(m.cols) + " columns, vector length " +
                     std::to_string(x.logical_len));
  }
  if (m.dup_len != x.dup_len) throw ShapeError("duplication lengths differ");
  if (m.columns.size() != m.cols) throw ShapeError("column ciphertext count != cols");
}

}  // namespace

EncryptedMatrix encrypt_matrix(he::Encryptor& enc, const Eigen::MatrixXd& m, std::size_t dup_len,
                               int level) {
  const he::HeContext& ctx = enc.context();
  const ReformedMatrix r = reform_matrix(m);
  check_dup_len(ctx, r.rows, r.cols, dup_len);
  EncryptedMatrix out{r.rows, r.cols, dup_len, {}};
  out.columns.reserve(r.cols);
  for (const auto& column : r.columns) {
    out.columns.push_back(enc.encrypt(he::encode(ctx, column, level)));
  }
  return out;
}

EncryptedVector encrypt_vector(he::Encryptor& enc, std::span<const double> x, std::size_t dup_len,
                               int level) {
  const auto dup = duplicate_vector(x, dup_len);
  if (dup_len > enc.context().slot_count()) throw CapacityError("dup_len exceeds slot count");
  return {enc.encrypt(he::encode(enc.context(), dup, level)), x.size(), dup_len};
}

he::Ciphertext enc_matvec(const he::HeContext& ctx, const EncryptedMatrix& m,
                          const EncryptedVector& x, const he::EvaluationKeys& keys) {
  check_operands(m, x);
  std::vector<he::Ciphertext> terms(m.cols);
  // Exceptions must not escape the parallel region; keep the first one and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m.cols); ++i) {
    try {
      terms[static_cast<std::size_t>(i)] = term(ctx, m, x, keys, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(dpcc_matvec_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  he::Ciphertext acc = std::move(terms[0]);
  for (std::size_t i = 1; i < terms.size(); ++i) acc = he::add(ctx, acc, terms[i]);
  return he::rescale(ctx, acc);
}

he::Ciphertext enc_matvec_serial(const he::HeContext& ctx, const EncryptedMatrix& m,
                                 const EncryptedVector& x, const he::EvaluationKeys& keys) {
  check_operands(m, x);
  he::Ciphertext acc = term(ctx, m, x, keys, 0);
  for (std::size_t i = 1; i < m.cols; ++i) acc = he::add(ctx, acc, term(ctx, m, x, keys, i));
  return he::rescale(ctx, acc);
}

namespace {

void write_blob(he::wire::Writer& w, const he::Bytes& blob) {
  w.write_u64(blob.size());
  w.append(blob);
}

std::span<const std::uint8_t> read_blob(he::wire::Reader& r) {
  return r.take(static_cast<std::size_t>(r.read_u64()));
}

}  // namespace

he::Bytes serialize(const he::HeContext& ctx, const EncryptedMatrix& m) {
  he::wire::Writer w;
  w.header(kEncMatrixMagic, m.columns.empty() ? 0 : m.columns.front().level, ctx);
  w.write_u32(static_cast<std::uint32_t>(m.rows));
  w.write_u32(static_cast<std::uint32_t>(m.cols));
  w.write_u32(static_cast<std::uint32_t>(m.dup_len));
  w.write_u32(static_cast<std::uint32_t>(m.columns.size()));
  for (const auto& c : m.columns) write_blob(w, he::serialize(ctx, c));
  return w.take();
}

EncryptedMatrix deserialize_matrix(const he::HeContext& ctx, std::span<const std::uint8_t> bytes) {
  he::wire::Reader r(bytes);
  r.header(kEncMatrixMagic, ctx);
  EncryptedMatrix m;
  m.rows = r.read_u32();
  m.cols = r.read_u32();
  m.dup_len = r.read_u32();
  const std::uint32_t count = r.read_u32();
  if (count != m.cols) throw SerializationError("column count does not match cols");
  for (std::uint32_t i = 0; i < count; ++i) {
    m.columns.push_back(he::deserialize_ciphertext(ctx, read_blob(r)));
  }
  r.expect_done();
  return m;
}

he::Bytes serialize(const he::HeContext& ctx, const EncryptedVector& v) {
  he::wire::Writer w;
  w.header(kEncVectorMagic, v.ct.level, ctx);
  w.write_u32(static_cast<std::uint32_t>(v.logical_len));
  w.write_u32(static_cast<std::uint32_t>(v.dup_len));
  write_blob(w, he::serialize(ctx, v.ct));
  return w.take();
}

EncryptedVector deserialize_vector(const he::HeContext& ctx, std::span<const std::uint8_t> bytes) {
  he::wire::Reader r(bytes);
  r.header(kEncVectorMagic, ctx);
  EncryptedVector v;
  v.logical_len = r.read_u32();
  v.dup_len = r.read_u32();
  v.ct = he::deserialize_ciphertext(ctx, read_blob(r));
  r.expect_done();
  return v;
}

}  // namespace dpcc::linalg
