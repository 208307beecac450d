#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "predlab/harness.hpp"

namespace {

using namespace predlab;

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void emit_failure(const FailureRecord& f) { std::cerr << f.to_json().dump() << '\n'; }

int finish(const ErrorReport& report, const ExperimentConfig& config, bool emit_svg) {
  write_report_files(report, config, emit_svg);
  if (config.csv_path.empty()) std::cout << report.to_csv();
  std::cerr << Json({{"operation", report.operation}, {"summary", report.summary}, {"ok", report.ok()}}).dump() << '\n';
  for (const FailureRecord& f : report.failures) emit_failure(f);
  return report.ok() ? kExitPass : kExitFailure;
}

int run_synth(const ExperimentConfig& config, const std::string& out_dir) {
  for (double g : config.gamma_ladder) {
    const PredictorTransfer predictor = make_predictor(config.kernel, g);
    TimeGrid grid = config.grid ? *config.grid : default_time_grid(config.kernel.omega(), config.kernel.min_decay());
    // without an explicit grid, refine dt until the FFT remainder has decayed at the band ends
    std::optional<TimePredictor> synthesized;
    for (int refine = 0; !synthesized; ++refine) {
      try {
        synthesized = synthesize_time_predictor(predictor, grid);
      } catch (const Error& e) {
        if (config.grid || e.code() != ErrorCode::SpectrumNotDecayed || refine == 8) throw;
        grid = TimeGrid::centered(grid.dt / 2.0, grid.n * 2);
      }
    }
    const TimePredictor& khat = *synthesized;
    if (!out_dir.empty()) {
      std::ostringstream name;
      name << "khat_g" << g << ".csv";
      write_signal_csv(std::filesystem::path(out_dir) / name.str(), khat.samples);
    }
    Json line = predictor_to_json(predictor);
    line["leakage"] = khat.leakage;
    line["grid"] = {{"t0", grid.t0}, {"dt", grid.dt}, {"n", grid.n}};
    std::cout << line.dump() << '\n';
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral predictors for band-limited and high-frequency signals"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string predictions_dir;
  std::optional<std::uint64_t> seed;
  bool emit_svg = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_path, "report CSV path (synth: output directory)");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--predictions-dir", predictions_dir, "write every prediction as CSV + JSON here");
    sub->add_flag("--emit-svg", emit_svg, "also write an SVG plot of error vs gamma");
  };
  CLI::App* validate = app.add_subcommand("validate", "parse and check a config");
  CLI::App* synth = app.add_subcommand("synth", "synthesize time-domain predictors for the ladder");
  CLI::App* sweep = app.add_subcommand("sweep", "L2 convergence along the ladder");
  CLI::App* bound = app.add_subcommand("bound-check", "uniform sup-error bound on mixed spectra");
  CLI::App* robust = app.add_subcommand("robustness", "error vs gamma with out-of-band noise");
  CLI::App* decompose = app.add_subcommand("decompose", "split, predict both parts, sum");
  for (CLI::App* sub : {validate, synth, sweep, bound, robust, decompose}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ExperimentConfig config;
  try {
    Json j = read_json_file(config_path);
    if (seed) j["seed"] = *seed;
    config = parse_config(j);
    if (!out_path.empty() && !synth->parsed()) config.csv_path = out_path;
    if (!predictions_dir.empty()) config.predictions_dir = predictions_dir;
  } catch (const std::exception& e) {
    std::cerr << Json({{"code", "InvalidConfig"}, {"message", e.what()}}).dump() << '\n';
    return kExitUsage;
  }

  try {
    if (validate->parsed()) {
      std::cout << Json({{"valid", true}, {"kernel", kernel_to_json(config.kernel)}}).dump() << '\n';
      return kExitPass;
    }
    if (synth->parsed()) return run_synth(config, out_path);
    if (sweep->parsed()) return finish(run_convergence_sweep(config), config, emit_svg);
    if (bound->parsed()) return finish(run_uniform_bound_check(config), config, emit_svg);
    if (robust->parsed()) return finish(run_robustness_probe(config), config, emit_svg);
    return finish(run_decomposition_demo(config), config, emit_svg);
  } catch (const Error& e) {
    FailureRecord f;
    f.code = e.code();
    f.gamma = std::numeric_limits<double>::quiet_NaN();
    f.gamma_prev = f.gamma;
    f.measured = f.gamma;
    f.bound = f.gamma;
    f.message = e.what();
    emit_failure(f);
    return e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::IoError ? kExitUsage : kExitFailure;
  }
}
