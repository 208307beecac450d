#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "predlab/error.hpp"
#include "predlab/io.hpp"
#include "predlab/kernel.hpp"
#include "predlab/predictor.hpp"
#include "predlab/signals.hpp"
#include "predlab/spectral.hpp"

namespace predlab {

struct SignalSpec {
  std::string id;
  std::vector<Band> bands;
};

struct MixedSignalSpec {
  std::string id;
  MixedSpectrum spectrum;
};

/// Seeded random mixed spectra of the configured class: `atoms` point masses plus `bumps`
/// raised-cosine density components per signal.
struct RandomMixedSpec {
  std::size_t count = 0;
  std::size_t atoms = 2;
  std::size_t bumps = 1;
};

/// Out-of-band perturbation on +-[lo, hi] with energy fraction eta.
struct NoiseSpec {
  double eta = 0.0;
  double lo = 1.05;
  double hi = 1.1;
};

struct ExperimentConfig {
  RationalAnticausalKernel kernel;
  std::vector<double> gamma_ladder;
  /// gamma < 0 ladder for the decomposition demo; empty means the mirror of gamma_ladder.
  std::vector<double> high_gamma_ladder;
  TargetClass domain = TargetClass::Low;
  double epsilon = 0.1;
  std::vector<SignalSpec> signals;
  std::vector<MixedSignalSpec> mixed_signals;
  RandomMixedSpec random_mixed;
  /// Analysis grid for band signals; unset picks default_time_grid.
  std::optional<TimeGrid> grid;
  /// Evaluation points for mixed spectra.
  TimeGrid t_grid{-20.0, 0.25, 161};
  NoiseSpec noise;
  std::string csv_path;
  std::string svg_path;
  std::string predictions_dir;
  std::uint64_t seed = 0;
};

/// Parses and validates; throws InvalidConfig (or the kernel's own error) on bad input.
ExperimentConfig parse_config(const Json& j);
/// Ladder nonempty, no zero, one sign, strictly increasing in |gamma|, sign matching the domain.
void validate_config(const ExperimentConfig& config);

struct ReportRow {
  std::string signal;
  double gamma = 0.0;
  double err_l2 = 0.0;
  double err_linf = 0.0;
  double deviation_inf = 0.0;
  /// The asserted bound for this row, NaN when none applies.
  double bound = 0.0;
  /// Operation-specific extra value (tightness ratio, linearity residual, ...), NaN if unused.
  double diagnostic = 0.0;
  bool pass = true;
};

struct FailureRecord {
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string signal;
  double gamma = 0.0;
  /// Previous ladder value for monotonicity failures, NaN otherwise.
  double gamma_prev = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  std::string message;
  /// Reported but does not fail the run.
  bool fatal = true;

  Json to_json() const;
};

struct ErrorReport {
  std::string operation;
  std::vector<ReportRow> rows;
  std::vector<FailureRecord> failures;
  Json summary = Json::object();

  bool ok() const;
  std::string to_csv() const;
};

ErrorReport run_convergence_sweep(const ExperimentConfig& config);
ErrorReport run_uniform_bound_check(const ExperimentConfig& config);
ErrorReport run_robustness_probe(const ExperimentConfig& config);
ErrorReport run_decomposition_demo(const ExperimentConfig& config);

/// The configured mixed signals followed by the random ones.
std::vector<MixedSignalSpec> expand_mixed_signals(const ExperimentConfig& config);

/// Writes the CSV (and SVG when requested) named in the config.
void write_report_files(const ErrorReport& report, const ExperimentConfig& config, bool emit_svg);

}  // namespace predlab
