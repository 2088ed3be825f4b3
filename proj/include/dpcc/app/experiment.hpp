// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include "dpcc/app/config.hpp"
#include "dpcc/app/roles.hpp"
#include "dpcc/control/dob.hpp"
#include "dpcc/control/dpc.hpp"
#include "dpcc/control/plant.hpp"

namespace dpcc::app {

enum class Stage { kPrecollect, kDpc };

struct StepRecord {
  std::int64_t k = 0;
  Stage stage = Stage::kPrecollect;
  double r = 0.0;
  double y = 0.0;
  double u_c = 0.0;
  double u_e = 0.0;
  double u_applied = 0.0;
  double d_hat = 0.0;
  double wall_time_ms = 0.0;
  /// Noise-free C x(k); not part of the CSV trace.
  double y_true = 0.0;
};

struct Metrics {
  /// RMSE of the measured y against the DPC reference over the final half of the DPC stage.
  double rmse = 0.0;
  /// Same window, noise-free output.
  double rmse_true = 0.0;
  /// max |y - r| over the final min(200, steps) DPC steps.
  double tail_max_error = 0.0;
  /// Controller round time (encrypt, evaluate, decrypt in encrypted modes).
  double mean_round_ms = 0.0;
  double max_round_ms = 0.0;
  int refreshes = 0;
};

struct ExperimentResult {
  std::vector<StepRecord> trace;
  Metrics metrics;
};

/// The two-stage protocol, step by step. Encrypted modes run the controller through a
/// CloudRole that sees only serialized ciphertexts.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg,
                      control::PlantParams plant = control::PlantParams::reference());
  ~Experiment();
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  /// PID stage: exactly 2N + j samples tracking precollect_ref.
  void run_precollection();
  /// Identify from the latest data, recompute gains and nominal row, ship encrypted gains.
  void refresh_gains();
  /// One DPC step; refreshes first when the DPC step index is a multiple of refresh_period.
  const StepRecord& step();
  /// Precollection (if not yet done) followed by all remaining DPC steps.
  ExperimentResult run();

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const control::IoHistory& history() const noexcept { return history_; }
  const std::vector<StepRecord>& trace() const noexcept { return trace_; }
  const control::ControllerGains& gains() const noexcept { return gains_; }
  const control::RegressionResult& regression() const noexcept { return regression_; }
  const control::NominalRow& nominal() const noexcept { return nominal_; }
  const control::ObserverState& observer() const noexcept { return observer_; }
  const control::PlantState& plant_state() const noexcept { return state_; }
  std::size_t dpc_steps_done() const noexcept { return dpc_steps_; }
  /// Null in plaintext modes.
  const EdgeRole* edge() const noexcept { return edge_.get(); }
  const CloudRole* cloud() const noexcept { return cloud_.get(); }

  /// Constant input disturbance added to the plant input during the DPC stage.
  void set_input_disturbance(double d) noexcept { disturbance_ = d; }

 private:
  double cloud_control(const Eigen::VectorXd& r_f, const Eigen::VectorXd& v_p, double& ms);

  ExperimentConfig cfg_;
  control::PlantParams plant_;
  control::PlantState state_;
  control::IoHistory history_;
  std::vector<StepRecord> trace_;
  std::vector<double> round_ms_;
  control::ControllerGains gains_;
  control::RegressionResult regression_;
  control::NominalRow nominal_;
  control::ObserverState observer_;
  std::unique_ptr<EdgeRole> edge_;
  std::unique_ptr<CloudRole> cloud_;
  std::size_t dpc_steps_ = 0;
  double last_u_c_ = 0.0;
  double disturbance_ = 0.0;
  bool precollected_ = false;
  int refreshes_ = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

Metrics compute_metrics(const std::vector<StepRecord>& trace, double reference);

/// Header `k,stage,r,y,u_c,u_e,u_applied,d_hat,wall_time_ms`, floats with 9 significant digits.
void write_csv(std::ostream& out, const std::vector<StepRecord>& trace);

}  // namespace dpcc::app
