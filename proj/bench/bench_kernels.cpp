// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

// Timing of the parallel kernels against their serial references.
//
//   dpcc_bench [--reps R]
//
// Reports the median of R repetitions for: encrypted 20x40 and 20x20 matvec (OpenMP vs
// serial), and a negacyclic product at n = 4096 (NTT vs schoolbook, one repetition).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <vector>

#ifdef DPCC_HAVE_OPENMP
#include <omp.h>
#endif

#include "dpcc/he/ckks.hpp"
#include "dpcc/he/encryptor.hpp"
#include "dpcc/he/ntt.hpp"
#include "dpcc/linalg/enc_linalg.hpp"

namespace he = dpcc::he;
namespace la = dpcc::linalg;

namespace {

double median_ms(int reps, const std::function<void()>& f) {
  std::vector<double> t;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

void matvec(const he::HeContext& ctx, const he::KeySet& keys, he::Encryptor& enc, int rows, int cols, int reps) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return d(rng); });
  const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(cols, [&] { return d(rng); });
  const std::size_t dup = la::min_dup_len(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  const auto em = la::encrypt_matrix(enc, m, dup, ctx.max_level());
  const auto ev = la::encrypt_vector(enc, std::span(x.data(), static_cast<std::size_t>(cols)), dup, ctx.max_level());
  he::Ciphertext a, b;
  const double par = median_ms(reps, [&] { a = la::enc_matvec(ctx, em, ev, keys.evaluation); });
  const double ser = median_ms(reps, [&] { b = la::enc_matvec_serial(ctx, em, ev, keys.evaluation); });
  const bool same = a.c0 == b.c0 && a.c1 == b.c1;
  std::printf("enc_matvec %dx%d      parallel %9.2f ms  serial %9.2f ms  speedup %.2fx  identical=%s\n", rows, cols,
              par, ser, ser / par, same ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 5;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--reps") == 0) reps = std::max(1, std::atoi(argv[i + 1]));
  }
#ifdef DPCC_HAVE_OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  const he::HeContext ctx(he::HeParams::control_default(25));
  const he::KeySet keys = he::keygen(ctx, la::rotation_steps_for(40), 1);
  he::Encryptor enc(ctx, keys.secret_key, 2);
  matvec(ctx, keys, enc, 20, 40, reps);
  matvec(ctx, keys, enc, 20, 20, reps);

  const std::size_t n = ctx.params().ring_dim;
  const he::Modulus& q = ctx.modulus(0);
  const he::NttTables& tables = ctx.ntt(0);
  std::mt19937_64 rng(3);
  std::vector<he::u64> a(n), b(n);
  for (auto& v : a) v = rng() % q.value();
  for (auto& v : b) v = rng() % q.value();
  std::vector<he::u64> fast;
  const double ntt = median_ms(reps, [&] {
    std::vector<he::u64> x = a, y = b;
    tables.forward(x);
    tables.forward(y);
    for (std::size_t i = 0; i < n; ++i) x[i] = q.mul(x[i], y[i]);
    tables.inverse(x);
    fast = std::move(x);
  });
  std::vector<he::u64> slow;
  const double school = median_ms(1, [&] { slow = he::negacyclic_multiply_reference(a, b, q); });
  std::printf("negacyclic n=%zu     ntt      %9.3f ms  schoolbook %7.1f ms  speedup %.0fx  identical=%s\n", n,
              ntt, school, school / ntt, fast == slow ? "yes" : "no");
  return 0;
}
