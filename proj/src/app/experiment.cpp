// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dpcc/app/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "dpcc/error.hpp"

namespace dpcc::app {

namespace {

double clip(double u, const control::PlantParams& p) { return std::clamp(u, p.u_min, p.u_max); }

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Experiment::Experiment(ExperimentConfig cfg, control::PlantParams plant)
    : cfg_(std::move(cfg)), plant_(std::move(plant)) {
  cfg_.validate();
  plant_.validate();
  if (plant_.inputs() != 1 || plant_.outputs() != 1) {
    throw ShapeError("the experiment driver supports single-input single-output plants");
  }
  state_.x = Eigen::VectorXd::Zero(plant_.states());
  observer_.K_gain = cfg_.dob_gain;
  observer_.warmup_until = static_cast<std::int64_t>(cfg_.N);
  if (is_encrypted(cfg_.mode)) {
    edge_ = std::make_unique<EdgeRole>(cfg_.he_params(), cfg_.N,
                                       cfg_.encryption == UploadEncryption::kPublicKey, cfg_.seed);
    cloud_ = std::make_unique<CloudRole>(cfg_.he_params(), edge_->evaluation_keys());
  }
}

Experiment::~Experiment() = default;

void Experiment::run_precollection() {
  if (precollected_) return;
  control::PidParams pid = cfg_.pid();
  pid.u_min = plant_.u_min;
  pid.u_max = plant_.u_max;
  const control::NoiseConfig noise = cfg_.noise(false);
  const std::size_t steps = 2 * cfg_.N + cfg_.j;
  for (std::size_t i = 0; i < steps; ++i) {
    const double y = control::measure(state_, plant_, noise)(0);
    const double u = control::pid_step(pid, cfg_.precollect_ref, y);
    StepRecord rec;
    rec.k = state_.k;
    rec.stage = Stage::kPrecollect;
    rec.r = cfg_.precollect_ref;
    rec.y_true = (plant_.C * state_.x)(0);
    const auto res = control::plant_step(state_, plant_, noise, Eigen::VectorXd::Constant(1, u));
    rec.y = res.y(0);
    rec.u_c = u;
    rec.u_applied = res.u_applied(0);
    state_ = res.next;
    history_.push(rec.u_applied, rec.y);
    trace_.push_back(rec);
  }
  precollected_ = true;
}

void Experiment::refresh_gains() {
  const control::HankelSet h = control::build_hankel(history_, cfg_.N, cfg_.j);
  regression_ = control::solve_regression(h, control::relative_ridge(h, cfg_.ridge));
  gains_ = control::compute_gains(regression_, cfg_.q_weight, cfg_.lambda_weight);
  nominal_ = control::extract_nominal(regression_, cfg_.N);
  if (edge_) {
    const auto [mr, mv] = edge_->encrypt_gains(gains_);
    cloud_->load_gains(mr, mv);
  }
  ++refreshes_;
}

double Experiment::cloud_control(const Eigen::VectorXd& r_f, const Eigen::VectorXd& v_p,
                                 double& ms) {
  const auto t0 = std::chrono::steady_clock::now();
  double u_c = 0.0;
  if (edge_) {
    const auto [rf, vp] = edge_->encrypt_round(r_f, v_p);
    const he::Bytes reply = cloud_->round(rf, vp);
    u_c = edge_->decrypt_reply(reply, 1)[0];
  } else {
    u_c = control::plaintext_control(gains_, r_f, v_p)(0);
  }
  ms = elapsed_ms(t0);
  return u_c;
}

const StepRecord& Experiment::step() {
  if (!precollected_) run_precollection();
  if (dpc_steps_ % cfg_.refresh_period == 0) refresh_gains();
  const std::size_t N = cfg_.N;
  const std::size_t t = history_.size();
  const control::NoiseConfig noise = cfg_.noise(true);
  // DPC steps are numbered from 1 for the warm-up rule.
  const auto k = static_cast<std::int64_t>(dpc_steps_) + 1;

  const double y = control::measure(state_, plant_, noise)(0);
  const Eigen::VectorXd r_f = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(N), cfg_.dpc_ref);
  const Eigen::VectorXd v_p = control::past_vector(history_, t, N);

  StepRecord rec;
  rec.k = state_.k;
  rec.stage = Stage::kDpc;
  rec.r = cfg_.dpc_ref;
  rec.y = y;
  rec.y_true = (plant_.C * state_.x)(0);
  double ms = 0.0;
  rec.u_c = cloud_control(r_f, v_p, ms);
  if (!std::isfinite(rec.u_c)) {
    throw NumericError("non-finite control signal at DPC step " + std::to_string(k));
  }
  round_ms_.push_back(ms);
  if (cfg_.record_timing) rec.wall_time_ms = ms;

  if (uses_dob(cfg_.mode)) {
    const std::size_t window = control::observer_window(N, cfg_.dob_indexing);
    std::vector<double> y_past(N);
    std::vector<double> u_past(window);
    for (std::size_t i = 0; i < N; ++i) y_past[i] = history_.y(t - N + i);
    for (std::size_t i = 0; i < window; ++i) u_past[i] = history_.u(t - window + i);
    observer_ = control::observer_update(observer_, nominal_, y_past, u_past, y, last_u_c_,
                                         cfg_.dob_indexing);
    rec.u_e = control::compensate(observer_, k);
    rec.d_hat = observer_.d_hat;
  }
  rec.u_applied = clip(rec.u_c + rec.u_e, plant_);

  const auto res = control::plant_step(state_, plant_, noise,
                                       Eigen::VectorXd::Constant(1, rec.u_applied + disturbance_));
  state_ = res.next;
  history_.push(rec.u_applied, y);
  last_u_c_ = rec.u_c;
  ++dpc_steps_;
  trace_.push_back(rec);
  return trace_.back();
}

ExperimentResult Experiment::run() {
  run_precollection();
  while (dpc_steps_ < cfg_.total_dpc_steps) step();
  ExperimentResult out;
  out.trace = trace_;
  out.metrics = compute_metrics(trace_, cfg_.dpc_ref);
  out.metrics.refreshes = refreshes_;
  // Timing comes from the measured rounds even when the trace omits it.
  out.metrics.mean_round_ms = 0.0;
  out.metrics.max_round_ms = 0.0;
  for (double ms : round_ms_) {
    out.metrics.mean_round_ms += ms;
    out.metrics.max_round_ms = std::max(out.metrics.max_round_ms, ms);
  }
  if (!round_ms_.empty()) out.metrics.mean_round_ms /= static_cast<double>(round_ms_.size());
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return Experiment(cfg).run(); }

Metrics compute_metrics(const std::vector<StepRecord>& trace, double reference) {
  std::vector<const StepRecord*> dpc;
  for (const auto& r : trace) {
    if (r.stage == Stage::kDpc) dpc.push_back(&r);
  }
  Metrics m;
  if (dpc.empty()) return m;
  const std::size_t from = dpc.size() / 2;
  double se = 0.0;
  double se_true = 0.0;
  for (std::size_t i = from; i < dpc.size(); ++i) {
    se += (dpc[i]->y - reference) * (dpc[i]->y - reference);
    se_true += (dpc[i]->y_true - reference) * (dpc[i]->y_true - reference);
  }
  const auto n = static_cast<double>(dpc.size() - from);
  m.rmse = std::sqrt(se / n);
  m.rmse_true = std::sqrt(se_true / n);
  const std::size_t tail = std::min<std::size_t>(200, dpc.size());
  for (std::size_t i = dpc.size() - tail; i < dpc.size(); ++i) {
    m.tail_max_error = std::max(m.tail_max_error, std::abs(dpc[i]->y - reference));
  }
  return m;
}

void write_csv(std::ostream& out, const std::vector<StepRecord>& trace) {
  out << "k,stage,r,y,u_c,u_e,u_applied,d_hat,wall_time_ms\n";
  char buf[256];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%lld,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  static_cast<long long>(r.k), r.stage == Stage::kDpc ? "dpc" : "precollect", r.r,
                  r.y, r.u_c, r.u_e, r.u_applied, r.d_hat, r.wall_time_ms);
    out << buf;
  }
}

}  // namespace dpcc::app
