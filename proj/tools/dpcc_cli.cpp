// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver.
//
//   dpcc run --config exp.cfg --mode encrypted_dob --scale-bits 22 --seed 3 --output trace.csv
//   dpcc keygen --config exp.cfg --out keys/

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dpcc/app/config.hpp"
#include "dpcc/app/experiment.hpp"
#include "dpcc/app/roles.hpp"
#include "dpcc/error.hpp"
#include "dpcc/he/serialize.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void write_file(const std::filesystem::path& path, const dpcc::he::Bytes& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dpcc::Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

dpcc::app::ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? dpcc::app::ExperimentConfig{} : dpcc::app::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encrypted data-driven predictive control simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode;
  std::optional<int> scale_bits;
  std::optional<std::uint64_t> seed;
  std::string output;
  auto* run = app.add_subcommand("run", "Run the two-stage experiment and write a CSV trace");
  run->add_option("--config", config_path, "Flat key = value config file");
  run->add_option("--mode", mode, "plaintext | encrypted | encrypted_dob | plaintext_dob");
  run->add_option("--scale-bits", scale_bits, "Encoding scale exponent (22 or 25)");
  run->add_option("--seed", seed, "Experiment seed");
  run->add_option("--output", output, "CSV trace path (stdout when omitted)");

  std::string out_dir;
  auto* keygen = app.add_subcommand("keygen", "Generate keys and write them to a directory");
  keygen->add_option("--config", config_path, "Flat key = value config file");
  keygen->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  dpcc::app::ExperimentConfig cfg;
  try {
    cfg = config_from(config_path);
    if (!mode.empty()) cfg.mode = dpcc::app::parse_mode(mode);
    if (scale_bits) cfg.scale_bits = *scale_bits;
    if (seed) cfg.seed = *seed;
    cfg.validate();
    (void)cfg.he_params();
  } catch (const dpcc::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*run) {
      const auto result = dpcc::app::run_experiment(cfg);
      if (output.empty()) {
        dpcc::app::write_csv(std::cout, result.trace);
      } else {
        std::ofstream out(output);
        if (!out) throw dpcc::Error("cannot write " + output);
        dpcc::app::write_csv(out, result.trace);
      }
      const auto& m = result.metrics;
      std::fprintf(stderr,
                   "mode=%s scale_bits=%d seed=%llu rmse=%.6g rmse_true=%.6g "
                   "round_ms(mean=%.3g max=%.3g) refreshes=%d\n",
                   std::string(dpcc::app::to_string(cfg.mode)).c_str(), cfg.scale_bits,
                   static_cast<unsigned long long>(cfg.seed), m.rmse, m.rmse_true,
                   m.mean_round_ms, m.max_round_ms, m.refreshes);
    } else {
      std::filesystem::create_directories(out_dir);
      dpcc::app::EdgeRole edge(cfg.he_params(), cfg.N,
                               cfg.encryption == dpcc::app::UploadEncryption::kPublicKey, cfg.seed);
      const auto& ctx = edge.context();
      const std::filesystem::path dir(out_dir);
      write_file(dir / "secret.key", dpcc::he::serialize(ctx, edge.keys().secret_key));
      write_file(dir / "public.key", dpcc::he::serialize(ctx, edge.keys().public_key));
      write_file(dir / "evaluation.keys", edge.evaluation_keys());
      for (const auto& w : cfg.he_params().warnings()) std::cerr << "warning: " << w << "\n";
      std::cerr << "wrote keys to " << dir.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
