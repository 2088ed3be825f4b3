// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace dpcc::control {

/// x(k+1) = A x(k) + B u(k) + e_p,  y(k) = clip(C x(k) + e_s).
struct PlantParams {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  double u_min = -0.15;
  double u_max = 0.15;
  double y_min = 0.0;
  double y_max = 0.4;

  /// Double integrator with output gain 0.00014 used in the control experiments.
  static PlantParams reference();
  void validate() const;
  Eigen::Index states() const { return A.rows(); }
  Eigen::Index inputs() const { return B.cols(); }
  Eigen::Index outputs() const { return C.rows(); }
};

struct PlantState {
  Eigen::VectorXd x;
  std::int64_t k = 0;
};

/// How the configured noise level is read: as a variance or as a standard deviation.
enum class NoiseScale { kVariance, kStddev };

struct NoiseConfig {
  double process_var = 0.0;
  double measure_var = 0.0;
  NoiseScale scale = NoiseScale::kVariance;
  std::uint64_t seed = 0;

  double process_sigma() const;
  double measure_sigma() const;
  bool silent() const { return process_var == 0.0 && measure_var == 0.0; }
};

/// Standard normal draws that depend only on (seed, step, index). Box-Muller over raw
/// mt19937_64 words, so draws match across standard libraries.
double gaussian_draw(std::uint64_t seed, std::int64_t step, int index);

struct StepResult {
  PlantState next;
  Eigen::VectorXd y;
  Eigen::VectorXd u_applied;
};

/// Measures y from the current state, then advances the state with the clipped input.
StepResult plant_step(const PlantState& state, const PlantParams& params, const NoiseConfig& noise,
                      const Eigen::VectorXd& u_raw);

/// Measurement only, no state change (same draw plant_step uses at this step).
Eigen::VectorXd measure(const PlantState& state, const PlantParams& params,
                        const NoiseConfig& noise);

/// Discrete PID, positional form, derivative on error.
///
///   e = r - y,  I += e*Ts,  u = kp*e + ki*I + kd*(e - e_prev)/Ts
///
/// With `anti_windup` the integral update is kept only when the output lies inside
/// [u_min, u_max] (conditional integration).
struct PidParams {
  double kp = 9.0;
  double ki = 3.0;
  double kd = 9.0;
  double sample_time = 0.05;
  bool anti_windup = true;
  double u_min = -0.15;
  double u_max = 0.15;
  double integral_state = 0.0;
  double prev_error = 0.0;
};

double pid_step(PidParams& pid, double r, double y);

}  // namespace dpcc::control
