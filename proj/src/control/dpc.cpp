// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/control/dpc.hpp"

#include <cmath>
#include <string>

#include "dpcc/error.hpp"

namespace dpcc::control {

void IoHistory::push(std::span<const double> u, std::span<const double> y) {
  if (u.size() != m_ || y.size() != p_) throw ShapeError("sample width does not match history");
  u_.insert(u_.end(), u.begin(), u.end());
  y_.insert(y_.end(), y.begin(), y.end());
}

HankelSet build_hankel(const IoHistory& history, std::size_t N, std::size_t j) {
  if (N == 0 || j == 0) throw ShapeError("N and j must be positive");
  const std::size_t need = 2 * N + j - 1;
  if (history.size() < need) throw DataUnderflowError(need, history.size());
  const std::size_t m = history.inputs();
  const std::size_t p = history.outputs();
  const std::size_t w = history.size() - need;

  HankelSet h;
  h.N = N;
  h.j = j;
  const auto rows = [](std::size_t r) { return static_cast<Eigen::Index>(r); };
  h.U_f.resize(rows(N * m), rows(j));
  h.Y_f.resize(rows(N * p), rows(j));
  h.V_p.resize(rows(N * (p + m)), rows(j));
  for (std::size_t c = 0; c < j; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    for (std::size_t s = 0; s < N; ++s) {
      const std::size_t past = w + c + s;
      const std::size_t future = past + N;
      for (std::size_t i = 0; i < p; ++i) {
        h.V_p(rows(s * p + i), col) = history.y(past, i);
        h.Y_f(rows(s * p + i), col) = history.y(future, i);
      }
      for (std::size_t i = 0; i < m; ++i) {
        h.V_p(rows(N * p + s * m + i), col) = history.u(past, i);
        h.U_f(rows(s * m + i), col) = history.u(future, i);
      }
    }
  }
  return h;
}

namespace {

Eigen::MatrixXd stacked_regressors(const HankelSet& h) {
  Eigen::MatrixXd z(h.V_p.rows() + h.U_f.rows(), h.V_p.cols());
  z << h.V_p, h.U_f;
  return z;
}

}  // namespace

double relative_ridge(const HankelSet& h, double ridge_rel) {
  return ridge_rel * stacked_regressors(h).squaredNorm();
}

RegressionResult solve_regression(const HankelSet& h, double ridge) {
  if (!(ridge >= 0.0)) throw ParameterError("ridge must be non-negative");
  const Eigen::MatrixXd z = stacked_regressors(h);
  const Eigen::Index n = z.rows();
  const Eigen::Index cols = z.cols();

  // min ||Y_f - L Z||^2 + ridge ||L||^2  <=>  least squares on [Z^T; sqrt(ridge) I] L^T.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(cols + n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(cols + n, h.Y_f.rows());
  a.topRows(cols) = z.transpose();
  b.topRows(cols) = h.Y_f.transpose();
  if (ridge > 0.0) a.bottomRows(n).diagonal().setConstant(std::sqrt(ridge));

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (ridge == 0.0 && qr.rank() < n) {
    throw IllConditionedError("regression matrix has rank " + std::to_string(qr.rank()) +
                              " < " + std::to_string(n) + "; use a positive ridge");
  }
  const Eigen::MatrixXd l = qr.solve(b).transpose();

  RegressionResult r;
  r.L_v = l.leftCols(h.V_p.rows());
  r.L_u = l.rightCols(h.U_f.rows());
  r.residual_norm = (h.Y_f - l * z).norm();
  return r;
}

ControllerGains compute_gains(const RegressionResult& reg, double q_weight, double lambda_weight) {
  if (!(q_weight > 0.0) || !(lambda_weight > 0.0)) {
    throw ParameterError("controller weights must be positive");
  }
  const Eigen::Index nu = reg.L_u.cols();
  const Eigen::MatrixXd h = lambda_weight * Eigen::MatrixXd::Identity(nu, nu) +
                            q_weight * reg.L_u.transpose() * reg.L_u;
  ControllerGains g;
  g.M_r = h.ldlt().solve(q_weight * reg.L_u.transpose());
  g.M_v = g.M_r * reg.L_v;
  g.q_weight = q_weight;
  g.lambda_weight = lambda_weight;
  return g;
}

Eigen::VectorXd plaintext_control(const ControllerGains& gains, const Eigen::VectorXd& r_f,
                                  const Eigen::VectorXd& v_p) {
  if (r_f.size() != gains.M_r.cols() || v_p.size() != gains.M_v.cols()) {
    throw ShapeError("reference or past vector does not match the gains");
  }
  return gains.M_r * r_f - gains.M_v * v_p;
}

NominalRow extract_nominal(const RegressionResult& reg, std::size_t N) {
  const auto n = static_cast<Eigen::Index>(N);
  if (reg.L_v.cols() != 2 * n || reg.L_u.cols() != n || reg.L_v.rows() != n) {
    throw ShapeError("nominal row extraction supports single-input single-output data only");
  }
  NominalRow row;
  row.g.resize(N);
  row.h.resize(N);
  for (Eigen::Index i = 0; i < n; ++i) {
    row.g[static_cast<std::size_t>(i)] = reg.L_v(0, i);
    row.h[static_cast<std::size_t>(i)] = reg.L_v(0, n + i);
  }
  row.b = reg.L_u(0, 0);
  return row;
}

Eigen::VectorXd past_vector(const IoHistory& history, std::size_t t, std::size_t N) {
  if (t < N || t > history.size()) throw DataUnderflowError(N, t);
  const std::size_t m = history.inputs();
  const std::size_t p = history.outputs();
  Eigen::VectorXd v(static_cast<Eigen::Index>(N * (p + m)));
  for (std::size_t s = 0; s < N; ++s) {
    for (std::size_t i = 0; i < p; ++i) {
      v(static_cast<Eigen::Index>(s * p + i)) = history.y(t - N + s, i);
    }
    for (std::size_t i = 0; i < m; ++i) {
      v(static_cast<Eigen::Index>(N * p + s * m + i)) = history.u(t - N + s, i);
    }
  }
  return v;
}

}  // namespace dpcc::control
