// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/app/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dpcc/error.hpp"

namespace dpcc::app {

Mode parse_mode(std::string_view s) {
  if (s == "plaintext") return Mode::kPlaintext;
  if (s == "encrypted") return Mode::kEncrypted;
  if (s == "encrypted_dob") return Mode::kEncryptedDob;
  if (s == "plaintext_dob") return Mode::kPlaintextDob;
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kPlaintext: return "plaintext";
    case Mode::kEncrypted: return "encrypted";
    case Mode::kEncryptedDob: return "encrypted_dob";
    case Mode::kPlaintextDob: return "plaintext_dob";
  }
  return "?";
}

bool is_encrypted(Mode m) { return m == Mode::kEncrypted || m == Mode::kEncryptedDob; }
bool uses_dob(Mode m) { return m == Mode::kEncryptedDob || m == Mode::kPlaintextDob; }

void ExperimentConfig::validate() const {
  if (N == 0 || j == 0) throw ConfigError("N and j must be positive");
  if (refresh_period < 1) throw ConfigError("refresh_period must be >= 1");
  if (total_dpc_steps < 1) throw ConfigError("total_dpc_steps must be >= 1");
  if (!(lambda_weight > 0.0) || !(q_weight > 0.0)) throw ConfigError("weights must be positive");
  if (!(ridge >= 0.0)) throw ConfigError("ridge must be non-negative");
  if (!(process_var >= 0.0) || !(measure_var >= 0.0)) {
    throw ConfigError("noise levels must be non-negative");
  }
  if (!(pid_sample_time > 0.0)) throw ConfigError("pid_sample_time must be positive");
  if (scale_bits < 1 || scale_bits > 60) throw ConfigError("scale_bits out of range");
  if (is_encrypted(mode) && 4 * N > 4096) throw ConfigError("N too large for the slot count");
}

he::HeParams ExperimentConfig::he_params() const {
  he::HeParams p = he::HeParams::control_default(scale_bits);
  p.error_stddev = error_stddev;
  return p;
}

control::NoiseConfig ExperimentConfig::noise(bool dpc_stage) const {
  control::NoiseConfig n;
  const bool on = dpc_stage ? noise_dpc : noise_precollect;
  n.process_var = on ? process_var : 0.0;
  n.measure_var = on ? measure_var : 0.0;
  n.scale = noise_scale;
  n.seed = seed;
  return n;
}

control::PidParams ExperimentConfig::pid() const {
  control::PidParams p;
  p.kp = pid_kp;
  p.ki = pid_ki;
  p.kd = pid_kd;
  p.sample_time = pid_sample_time;
  p.anti_windup = pid_anti_windup;
  return p;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

template <typename T>
T to_integer(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a non-negative integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"mode", [](auto& c, auto&, auto& v) { c.mode = parse_mode(v); }},
      {"N", [](auto& c, auto& k, auto& v) { c.N = to_integer<std::size_t>(k, v); }},
      {"j", [](auto& c, auto& k, auto& v) { c.j = to_integer<std::size_t>(k, v); }},
      {"lambda_weight", [](auto& c, auto& k, auto& v) { c.lambda_weight = to_double(k, v); }},
      {"q_weight", [](auto& c, auto& k, auto& v) { c.q_weight = to_double(k, v); }},
      {"dob_gain", [](auto& c, auto& k, auto& v) { c.dob_gain = to_double(k, v); }},
      {"dob_indexing",
       [](auto& c, auto& k, auto& v) {
         if (v == "aligned") {
           c.dob_indexing = control::DobIndexing::kAligned;
         } else if (v == "literal") {
           c.dob_indexing = control::DobIndexing::kLiteral;
         } else {
           throw ConfigError("key '" + k + "': expected aligned or literal");
         }
       }},
      {"refresh_period",
       [](auto& c, auto& k, auto& v) { c.refresh_period = to_integer<std::size_t>(k, v); }},
      {"precollect_ref", [](auto& c, auto& k, auto& v) { c.precollect_ref = to_double(k, v); }},
      {"dpc_ref", [](auto& c, auto& k, auto& v) { c.dpc_ref = to_double(k, v); }},
      {"total_dpc_steps",
       [](auto& c, auto& k, auto& v) { c.total_dpc_steps = to_integer<std::size_t>(k, v); }},
      {"ridge", [](auto& c, auto& k, auto& v) { c.ridge = to_double(k, v); }},
      {"pid_kp", [](auto& c, auto& k, auto& v) { c.pid_kp = to_double(k, v); }},
      {"pid_ki", [](auto& c, auto& k, auto& v) { c.pid_ki = to_double(k, v); }},
      {"pid_kd", [](auto& c, auto& k, auto& v) { c.pid_kd = to_double(k, v); }},
      {"pid_sample_time", [](auto& c, auto& k, auto& v) { c.pid_sample_time = to_double(k, v); }},
      {"pid_anti_windup", [](auto& c, auto& k, auto& v) { c.pid_anti_windup = to_bool(k, v); }},
      {"process_var", [](auto& c, auto& k, auto& v) { c.process_var = to_double(k, v); }},
      {"measure_var", [](auto& c, auto& k, auto& v) { c.measure_var = to_double(k, v); }},
      {"noise_scale",
       [](auto& c, auto& k, auto& v) {
         if (v == "variance") {
           c.noise_scale = control::NoiseScale::kVariance;
         } else if (v == "stddev") {
           c.noise_scale = control::NoiseScale::kStddev;
         } else {
           throw ConfigError("key '" + k + "': expected variance or stddev");
         }
       }},
      {"noise_precollect", [](auto& c, auto& k, auto& v) { c.noise_precollect = to_bool(k, v); }},
      {"noise_dpc", [](auto& c, auto& k, auto& v) { c.noise_dpc = to_bool(k, v); }},
      {"scale_bits", [](auto& c, auto& k, auto& v) { c.scale_bits = to_integer<int>(k, v); }},
      {"error_stddev", [](auto& c, auto& k, auto& v) { c.error_stddev = to_double(k, v); }},
      {"encryption",
       [](auto& c, auto& k, auto& v) {
         if (v == "symmetric") {
           c.encryption = UploadEncryption::kSymmetric;
         } else if (v == "public") {
           c.encryption = UploadEncryption::kPublicKey;
         } else {
           throw ConfigError("key '" + k + "': expected symmetric or public");
         }
       }},
      {"record_timing", [](auto& c, auto& k, auto& v) { c.record_timing = to_bool(k, v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = to_integer<std::uint64_t>(k, v); }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o.precision(17);
  const auto b = [](bool v) { return v ? "true" : "false"; };
  o << "mode = " << to_string(c.mode) << "\n"
    << "N = " << c.N << "\n"
    << "j = " << c.j << "\n"
    << "lambda_weight = " << c.lambda_weight << "\n"
    << "q_weight = " << c.q_weight << "\n"
    << "dob_gain = " << c.dob_gain << "\n"
    << "dob_indexing = "
    << (c.dob_indexing == control::DobIndexing::kAligned ? "aligned" : "literal") << "\n"
    << "refresh_period = " << c.refresh_period << "\n"
    << "precollect_ref = " << c.precollect_ref << "\n"
    << "dpc_ref = " << c.dpc_ref << "\n"
    << "total_dpc_steps = " << c.total_dpc_steps << "\n"
    << "ridge = " << c.ridge << "\n"
    << "pid_kp = " << c.pid_kp << "\n"
    << "pid_ki = " << c.pid_ki << "\n"
    << "pid_kd = " << c.pid_kd << "\n"
    << "pid_sample_time = " << c.pid_sample_time << "\n"
    << "pid_anti_windup = " << b(c.pid_anti_windup) << "\n"
    << "process_var = " << c.process_var << "\n"
    << "measure_var = " << c.measure_var << "\n"
    << "noise_scale = "
    << (c.noise_scale == control::NoiseScale::kVariance ? "variance" : "stddev") << "\n"
    << "noise_precollect = " << b(c.noise_precollect) << "\n"
    << "noise_dpc = " << b(c.noise_dpc) << "\n"
    << "scale_bits = " << c.scale_bits << "\n"
    << "error_stddev = " << c.error_stddev << "\n"
    << "encryption = " << (c.encryption == UploadEncryption::kSymmetric ? "symmetric" : "public")
    << "\n"
    << "record_timing = " << b(c.record_timing) << "\n"
    << "seed = " << c.seed << "\n";
  return o.str();
}

}  // namespace dpcc::app
