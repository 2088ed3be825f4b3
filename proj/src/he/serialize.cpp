// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/he/serialize.hpp"

#include <bit>
#include <cstring>

#include "dpcc/error.hpp"

namespace dpcc::he {
namespace wire {

void Writer::write_f64(double v) { write_u64(std::bit_cast<std::uint64_t>(v)); }

void Writer::header(std::uint32_t magic, int level, const HeContext& ctx) {
  write_u32(magic);
  write_u16(kWireVersion);
  write_u16(static_cast<std::uint16_t>(level));
  write_u32(static_cast<std::uint32_t>(ctx.ring_dim()));
  write_u32(static_cast<std::uint32_t>(ctx.params().scale_bits));
}

void Writer::poly(const HeContext& ctx, const RingPoly& p) {
  RingPoly coeff = p;
  ctx.from_ntt(coeff);
  write_u32(static_cast<std::uint32_t>(coeff.limb_count()));
  for (std::size_t i = 0; i < coeff.limb_count(); ++i) {
    write_u64(coeff.ring_dim);
    for (u64 w : coeff.limb(i)) write_u64(w);
  }
}

void Writer::ciphertext_body(const HeContext& ctx, const Ciphertext& ct) {
  write_f64(ct.scale);
  write_f64(ct.noise_bound);
  write_f64(ct.message_bound);
  write_u32(2);
  poly(ctx, ct.c0);
  poly(ctx, ct.c1);
}

std::uint64_t Reader::get(int n) {
  if (bytes_.size() - pos_ < static_cast<std::size_t>(n)) {
    throw SerializationError("truncated input at byte " + std::to_string(pos_));
  }
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += static_cast<std::size_t>(n);
  return v;
}

double Reader::read_f64() { return std::bit_cast<double>(read_u64()); }

std::span<const std::uint8_t> Reader::take(std::size_t n) {
  if (bytes_.size() - pos_ < n) throw SerializationError("truncated input");
  auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

int Reader::header(std::uint32_t magic, const HeContext& ctx) {
  if (read_u32() != magic) throw SerializationError("bad magic");
  if (const auto v = read_u16(); v != kWireVersion) {
    throw SerializationError("unsupported version " + std::to_string(v));
  }
  const int level = read_u16();
  if (level > ctx.max_level()) throw SerializationError("level exceeds modulus chain");
  if (read_u32() != ctx.ring_dim()) throw SerializationError("ring dimension mismatch");
  if (read_u32() != static_cast<std::uint32_t>(ctx.params().scale_bits)) {
    throw SerializationError("scale_bits mismatch");
  }
  return level;
}

RingPoly Reader::poly(const HeContext& ctx, int level, bool with_special) {
  RingPoly p(ctx.ring_dim(), level, with_special, false);
  if (read_u32() != p.limb_count()) throw SerializationError("limb count mismatch");
  for (std::size_t i = 0; i < p.limb_count(); ++i) {
    if (read_u64() != p.ring_dim) throw SerializationError("limb length mismatch");
    const u64 q = ctx.modulus(ctx.chain_index(p, i)).value();
    for (auto& w : p.limb(i)) {
      w = read_u64();
      if (w >= q) throw SerializationError("coefficient not reduced");
    }
  }
  ctx.to_ntt(p);
  return p;
}

Ciphertext Reader::ciphertext_body(const HeContext& ctx, int level) {
  Ciphertext ct;
  ct.level = level;
  ct.scale = read_f64();
  ct.noise_bound = read_f64();
  ct.message_bound = read_f64();
  if (!(ct.scale > 0.0)) throw SerializationError("non-positive scale");
  if (read_u32() != 2) throw SerializationError("expected two ciphertext components");
  ct.c0 = poly(ctx, level, false);
  ct.c1 = poly(ctx, level, false);
  return ct;
}

void Reader::expect_done() const {
  if (!done()) throw SerializationError("trailing bytes");
}

}  // namespace wire

namespace {

void write_switch_key(wire::Writer& w, const HeContext& ctx, const KSwitchKey& k) {
  w.write_u32(static_cast<std::uint32_t>(k.b.size()));
  for (std::size_t i = 0; i < k.b.size(); ++i) {
    w.poly(ctx, k.b[i]);
    w.poly(ctx, k.a[i]);
  }
}

KSwitchKey read_switch_key(wire::Reader& r, const HeContext& ctx) {
  const int top = ctx.max_level();
  if (r.read_u32() != static_cast<std::uint32_t>(top + 1)) {
    throw SerializationError("switch key digit count mismatch");
  }
  KSwitchKey k;
  for (int i = 0; i <= top; ++i) {
    k.b.push_back(r.poly(ctx, top, true));
    k.a.push_back(r.poly(ctx, top, true));
  }
  return k;
}

}  // namespace

Bytes serialize(const HeContext& ctx, const Ciphertext& ct) {
  wire::Writer w;
  w.header(kCiphertextMagic, ct.level, ctx);
  w.ciphertext_body(ctx, ct);
  return w.take();
}

Ciphertext deserialize_ciphertext(const HeContext& ctx, std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes);
  const int level = r.header(kCiphertextMagic, ctx);
  Ciphertext ct = r.ciphertext_body(ctx, level);
  r.expect_done();
  return ct;
}

Bytes serialize(const HeContext& ctx, const PublicKey& pk) {
  wire::Writer w;
  w.header(kPublicKeyMagic, ctx.max_level(), ctx);
  w.poly(ctx, pk.p0);
  w.poly(ctx, pk.p1);
  return w.take();
}

PublicKey deserialize_public_key(const HeContext& ctx, std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes);
  const int level = r.header(kPublicKeyMagic, ctx);
  if (level != ctx.max_level()) throw SerializationError("public key must be at top level");
  PublicKey pk;
  pk.p0 = r.poly(ctx, level, true);
  pk.p1 = r.poly(ctx, level, true);
  r.expect_done();
  return pk;
}

Bytes serialize(const HeContext& ctx, const EvaluationKeys& keys) {
  wire::Writer w;
  w.header(kEvalKeysMagic, ctx.max_level(), ctx);
  write_switch_key(w, ctx, keys.relin_key);
  w.write_u32(static_cast<std::uint32_t>(keys.rotation_keys.size()));
  for (const auto& [step, key] : keys.rotation_keys) {
    w.write_u32(static_cast<std::uint32_t>(step));
    write_switch_key(w, ctx, key);
  }
  return w.take();
}

EvaluationKeys deserialize_evaluation_keys(const HeContext& ctx,
                                           std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes);
  r.header(kEvalKeysMagic, ctx);
  EvaluationKeys keys;
  keys.relin_key = read_switch_key(r, ctx);
  const std::uint32_t count = r.read_u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto step = static_cast<int>(r.read_u32());
    if (step < 1 || static_cast<std::size_t>(step) >= ctx.slot_count()) {
      throw SerializationError("rotation step out of range");
    }
    keys.rotation_keys.emplace(step, read_switch_key(r, ctx));
  }
  r.expect_done();
  return keys;
}

Bytes serialize(const HeContext& ctx, const SecretKey& sk) {
  wire::Writer w;
  w.header(kSecretKeyMagic, ctx.max_level(), ctx);
  w.poly(ctx, sk.s);
  return w.take();
}

SecretKey deserialize_secret_key(const HeContext& ctx, std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes);
  const int level = r.header(kSecretKeyMagic, ctx);
  SecretKey sk{r.poly(ctx, level, true)};
  r.expect_done();
  return sk;
}

}  // namespace dpcc::he
