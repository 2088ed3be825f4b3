// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dpcc::control {

/// Time-ordered input/output samples; u(t) and y(t) share the index t.
class IoHistory {
 public:
  IoHistory(std::size_t m = 1, std::size_t p = 1) : m_(m), p_(p) {}

  void push(std::span<const double> u, std::span<const double> y);
  void push(double u, double y) { push(std::span(&u, 1), std::span(&y, 1)); }

  std::size_t size() const noexcept { return u_.size() / m_; }
  std::size_t inputs() const noexcept { return m_; }
  std::size_t outputs() const noexcept { return p_; }
  double u(std::size_t t, std::size_t i = 0) const { return u_[t * m_ + i]; }
  double y(std::size_t t, std::size_t i = 0) const { return y_[t * p_ + i]; }

 private:
  std::size_t m_;
  std::size_t p_;
  std::vector<double> u_;
  std::vector<double> y_;
};

/// Block-Hankel data matrices over the most recent 2N + j - 1 samples of a history.
///
/// With window start w, column c stacks
///   v_p = [y(w+c) .. y(w+c+N-1); u(w+c) .. u(w+c+N-1)]
///   u_f = [u(w+c+N) .. u(w+c+2N-1)],  y_f likewise.
struct HankelSet {
  Eigen::MatrixXd U_f;
  Eigen::MatrixXd Y_f;
  Eigen::MatrixXd V_p;
  std::size_t N = 0;
  std::size_t j = 0;
};

HankelSet build_hankel(const IoHistory& history, std::size_t N, std::size_t j);

struct RegressionResult {
  Eigen::MatrixXd L_v;
  Eigen::MatrixXd L_u;
  /// ||Y_f - L_v V_p - L_u U_f||_F
  double residual_norm = 0.0;
};

/// Ridge least squares for [L_v L_u] via QR on the stacked system [Z^T; sqrt(ridge) I].
/// Throws IllConditionedError when ridge = 0 and Z is rank deficient.
RegressionResult solve_regression(const HankelSet& h, double ridge);

/// ridge_rel * trace(Z Z^T), the scale-aware ridge used by the experiment driver.
double relative_ridge(const HankelSet& h, double ridge_rel);

struct ControllerGains {
  Eigen::MatrixXd M_r;
  Eigen::MatrixXd M_v;
  double q_weight = 1.0;
  double lambda_weight = 0.0;
};

/// M_r = (lambda I + q L_u^T L_u)^{-1} q L_u^T,  M_v = M_r L_v.
ControllerGains compute_gains(const RegressionResult& reg, double q_weight, double lambda_weight);

/// u_f = M_r r_f - M_v v_p.
Eigen::VectorXd plaintext_control(const ControllerGains& gains, const Eigen::VectorXd& r_f,
                                  const Eigen::VectorXd& v_p);

/// First-row coefficients of the identified predictor for a single-input single-output plant:
///   y(t) ~ sum_i g_i y(t-N+i-1) + sum_i h_i u(t-N+i-1) + b u(t).
struct NominalRow {
  std::vector<double> g;
  std::vector<double> h;
  double b = 0.0;
};

NominalRow extract_nominal(const RegressionResult& reg, std::size_t N);

/// v_p for the sample at index t: [y(t-N) .. y(t-1); u(t-N) .. u(t-1)].
Eigen::VectorXd past_vector(const IoHistory& history, std::size_t t, std::size_t N);

}  // namespace dpcc::control
