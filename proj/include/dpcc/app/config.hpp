// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "dpcc/control/dob.hpp"
#include "dpcc/control/plant.hpp"
#include "dpcc/he/params.hpp"

namespace dpcc::app {

enum class Mode { kPlaintext, kEncrypted, kEncryptedDob, kPlaintextDob };

Mode parse_mode(std::string_view s);
std::string_view to_string(Mode m);
bool is_encrypted(Mode m);
bool uses_dob(Mode m);

enum class UploadEncryption { kSymmetric, kPublicKey };

struct ExperimentConfig {
  Mode mode = Mode::kEncryptedDob;
  std::size_t N = 20;
  std::size_t j = 1000;
  double lambda_weight = 0.009;
  double q_weight = 1.0;
  double dob_gain = 62.0;
  control::DobIndexing dob_indexing = control::DobIndexing::kAligned;
  std::size_t refresh_period = 50;
  double precollect_ref = 0.2;
  double dpc_ref = 0.1;
  std::size_t total_dpc_steps = 800;
  /// Ridge as a fraction of trace(Z Z^T).
  double ridge = 1e-10;

  double pid_kp = 9.0;
  double pid_ki = 3.0;
  double pid_kd = 9.0;
  double pid_sample_time = 0.05;
  bool pid_anti_windup = true;

  double process_var = 0.0027;
  double measure_var = 0.0027;
  control::NoiseScale noise_scale = control::NoiseScale::kVariance;
  bool noise_precollect = true;
  bool noise_dpc = true;

  int scale_bits = 25;
  double error_stddev = 3.2;
  UploadEncryption encryption = UploadEncryption::kSymmetric;

  /// Write measured cloud round time into the trace. Off by default so traces are
  /// byte-identical across runs.
  bool record_timing = false;

  std::uint64_t seed = 1;

  void validate() const;
  he::HeParams he_params() const;
  control::NoiseConfig noise(bool dpc_stage) const;
  control::PidParams pid() const;
};

/// Parses flat `key = value` text. `#` starts a comment. Unknown keys, malformed values and
/// duplicates raise ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& cfg);

}  // namespace dpcc::app
