// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/control/dob.hpp"

#include "dpcc/error.hpp"

namespace dpcc::control {

std::size_t observer_window(std::size_t N, DobIndexing indexing) {
  return indexing == DobIndexing::kLiteral ? N + 1 : N;
}

ObserverState observer_update(const ObserverState& st, const NominalRow& nominal,
                              std::span<const double> y_past, std::span<const double> u_past,
                              double y_now, double u_c_prev, DobIndexing indexing) {
  const std::size_t n = nominal.g.size();
  if (nominal.h.size() != n) throw ShapeError("nominal row g and h differ in length");
  if (y_past.size() < n) throw DataUnderflowError(n, y_past.size());
  const std::size_t need_u = observer_window(n, indexing);
  if (u_past.size() < need_u) throw DataUnderflowError(need_u, u_past.size());

  double predicted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    predicted += nominal.g[i] * y_past[y_past.size() - n + i];
  }
  const std::size_t u0 = u_past.size() - need_u;
  for (std::size_t i = 0; i < n; ++i) predicted += nominal.h[i] * u_past[u0 + i];
  predicted += nominal.b * u_c_prev;

  ObserverState out = st;
  // P first, then d_hat = P + K y, so the observer identity holds bit for bit.
  out.P = -st.K_gain * predicted;
  out.d_hat = out.P + st.K_gain * y_now;
  return out;
}

double compensate(const ObserverState& st, std::int64_t k) {
  return k > st.warmup_until ? -st.d_hat : 0.0;
}

}  // namespace dpcc::control
