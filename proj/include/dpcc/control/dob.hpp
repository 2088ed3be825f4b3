// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "dpcc/control/dpc.hpp"

namespace dpcc::control {

/// Which past inputs the observer subtracts through the h coefficients.
enum class DobIndexing {
  /// u(k-N) .. u(k-1): the same alignment the Hankel regression used to fit h.
  kAligned,
  /// u(k-N-1) .. u(k-2): the literal one-step-older window.
  kLiteral,
};

/// Scalar disturbance observer, d_hat = P + K y.
struct ObserverState {
  double K_gain = 62.0;
  double P = 0.0;
  double d_hat = 0.0;
  /// Compensation stays off while the DPC step index is <= warmup_until.
  std::int64_t warmup_until = 0;

  void reset() {
    P = 0.0;
    d_hat = 0.0;
  }
};

/// Number of past samples observer_update reads for a horizon N.
std::size_t observer_window(std::size_t N, DobIndexing indexing);

/// Recomputes the estimate at sample k from its closed form
///
///   d_hat(k) = K (y(k) - sum_i g_i y(k-N+i-1) - sum_i h_i u(...) - b u_c(k-1))
///
/// as P = -K * (prediction), d_hat = P + K y(k). `y_past` ends with y(k-1) and `u_past` with
/// u(k-1), oldest first. kAligned reads the last N inputs, kLiteral the N before u(k-1).
ObserverState observer_update(const ObserverState& st, const NominalRow& nominal,
                              std::span<const double> y_past, std::span<const double> u_past,
                              double y_now, double u_c_prev,
                              DobIndexing indexing = DobIndexing::kAligned);

/// u_e = -d_hat once the DPC step index k exceeds the warm-up horizon, 0 before.
double compensate(const ObserverState& st, std::int64_t k);

}  // namespace dpcc::control
