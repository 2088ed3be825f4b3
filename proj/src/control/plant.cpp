// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/control/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dpcc/error.hpp"

namespace dpcc::control {

PlantParams PlantParams::reference() {
  PlantParams p;
  p.A = Eigen::MatrixXd{{2.0, -1.0}, {1.0, 0.0}};
  p.B = Eigen::MatrixXd{{1.0}, {0.0}};
  p.C = Eigen::MatrixXd{{0.00014, 0.00014}};
  return p;
}

void PlantParams::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols()) throw ShapeError("A must be square and non-empty");
  if (B.rows() != A.rows() || B.cols() == 0) throw ShapeError("B rows must match A");
  if (C.cols() != A.rows() || C.rows() == 0) throw ShapeError("C columns must match A");
  if (!(u_min <= u_max)) throw ShapeError("input limits out of order");
  if (!(y_min <= y_max)) throw ShapeError("output limits out of order");
}

double NoiseConfig::process_sigma() const {
  return scale == NoiseScale::kVariance ? std::sqrt(process_var) : process_var;
}

double NoiseConfig::measure_sigma() const {
  return scale == NoiseScale::kVariance ? std::sqrt(measure_var) : measure_var;
}

double gaussian_draw(std::uint64_t seed, std::int64_t step, int index) {
  // One engine per (seed, step, index) keeps each draw replayable in isolation.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 engine(seq);
  const auto unit = [&] { return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53; };
  const double u1 = unit();
  const double u2 = unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Draw indices: measurement noise uses 0..p-1, process noise p..p+n-1.
Eigen::VectorXd measure_impl(const PlantState& s, const PlantParams& params,
                             const NoiseConfig& noise) {
  Eigen::VectorXd y = params.C * s.x;
  const double sigma = noise.measure_sigma();
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (sigma > 0.0) y(i) += sigma * gaussian_draw(noise.seed, s.k, static_cast<int>(i));
    y(i) = std::clamp(y(i), params.y_min, params.y_max);
  }
  return y;
}

}  // namespace

Eigen::VectorXd measure(const PlantState& state, const PlantParams& params,
                        const NoiseConfig& noise) {
  return measure_impl(state, params, noise);
}

StepResult plant_step(const PlantState& state, const PlantParams& params, const NoiseConfig& noise,
                      const Eigen::VectorXd& u_raw) {
  if (u_raw.size() != params.inputs()) throw ShapeError("input vector has wrong length");
  if (!u_raw.allFinite()) throw NumericError("non-finite plant input at step " +
                                             std::to_string(state.k));
  if (!state.x.allFinite()) throw NumericError("non-finite plant state");

  StepResult out;
  out.y = measure_impl(state, params, noise);
  out.u_applied = u_raw.cwiseMax(params.u_min).cwiseMin(params.u_max);
  out.next.x = params.A * state.x + params.B * out.u_applied;
  const double sigma = noise.process_sigma();
  if (sigma > 0.0) {
    const int offset = static_cast<int>(params.outputs());
    for (Eigen::Index i = 0; i < out.next.x.size(); ++i) {
      out.next.x(i) += sigma * gaussian_draw(noise.seed, state.k, offset + static_cast<int>(i));
    }
  }
  out.next.k = state.k + 1;
  return out;
}

double pid_step(PidParams& pid, double r, double y) {
  const double e = r - y;
  const double ts = pid.sample_time;
  const double integral = pid.integral_state + e * ts;
  const double u = pid.kp * e + pid.ki * integral + pid.kd * (e - pid.prev_error) / ts;
  if (!pid.anti_windup || (u >= pid.u_min && u <= pid.u_max)) pid.integral_state = integral;
  pid.prev_error = e;
  return u;
}

}  // namespace dpcc::control
