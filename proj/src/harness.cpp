#include "predlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "predlab/svg.hpp"

namespace predlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad_config(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

std::vector<double> ladder_from(const Json& j, const char* key) {
  std::vector<double> out;
  if (!j.is_array()) bad_config(std::string(key) + " must be an array");
  for (const Json& g : j) {
    if (!g.is_number()) bad_config(std::string(key) + " entries must be numbers");
    out.push_back(g.get<double>());
  }
  return out;
}

void check_ladder(const std::vector<double>& ladder, const char* name) {
  if (ladder.empty()) bad_config(std::string(name) + " is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] == 0.0 || !std::isfinite(ladder[i])) bad_config(std::string(name) + " contains gamma = 0 or a non-finite value");
    if ((ladder[i] > 0.0) != (ladder[0] > 0.0)) bad_config(std::string(name) + " mixes signs");
    if (i > 0 && !(std::abs(ladder[i]) > std::abs(ladder[i - 1]))) {
      bad_config(std::string(name) + " is not strictly increasing in |gamma|");
    }
  }
}

std::string gamma_tag(double g) {
  std::ostringstream s;
  s << g;
  return s.str();
}

TimeGrid band_grid(const ExperimentConfig& config, double extra_max = 0.0) {
  if (config.grid) return *config.grid;
  double wmax = std::max(config.kernel.omega(), extra_max);
  for (const SignalSpec& s : config.signals) {
    for (const Band& b : s.bands) wmax = std::max({wmax, std::abs(b.lo), std::abs(b.hi)});
  }
  return default_time_grid(wmax, config.kernel.min_decay());
}

FrequencyDomain eps_domain(const ExperimentConfig& config, TargetClass kind) { return {kind, config.epsilon}; }

bool bands_inside(const std::vector<Band>& bands, const FrequencyDomain& d, double omega) {
  for (const Band& b : bands) {
    if (!d.contains(b.lo, omega) || !d.contains(b.hi, omega)) return false;
    if (d.kind == TargetClass::High && b.lo < 0.0 && b.hi > 0.0) return false;
  }
  return true;
}

SignalPair class_signal(const SignalSpec& spec, TargetClass kind, double omega, const TimeGrid& grid) {
  try {
    return kind == TargetClass::Low ? make_bandlimited_signal(spec.bands, omega, grid)
                                    : make_highfreq_signal(spec.bands, omega, grid);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SupportViolation) throw;
    throw Error(ErrorCode::ClassMismatch, "signal " + spec.id + " is not " + std::string(to_string(kind)) + ": " + e.what());
  }
}

void save_prediction(const ExperimentConfig& config, const std::string& signal, const PredictionResult& r,
                     const Json& extra) {
  if (config.predictions_dir.empty()) return;
  std::string stem = signal + "_g" + gamma_tag(r.gamma);
  for (char& c : stem) {
    if (c == ':' || c == '/' || c == ' ') c = '_';
  }
  write_prediction(std::filesystem::path(config.predictions_dir) / stem, r, extra);
}

/// Strict decrease of err_l2 over report rows [first, last). All-zero runs pass.
void check_decreasing(ErrorReport& report, std::size_t first, std::size_t last) {
  for (std::size_t i = first + 1; i < last; ++i) {
    ReportRow& prev = report.rows[i - 1];
    ReportRow& row = report.rows[i];
    if (row.err_l2 < prev.err_l2 || (row.err_l2 == 0.0 && prev.err_l2 == 0.0)) continue;
    row.pass = false;
    FailureRecord f;
    f.code = ErrorCode::MonotonicityViolation;
    f.signal = row.signal;
    f.gamma = row.gamma;
    f.gamma_prev = prev.gamma;
    f.measured = row.err_l2;
    f.bound = prev.err_l2;
    f.message = "err_l2 did not decrease along the ladder";
    report.failures.push_back(f);
  }
}

Complex complex_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

MixedSpectrum random_mixed(const ExperimentConfig& config, std::mt19937_64& rng) {
  const double omega = config.kernel.omega();
  const double eps = config.epsilon;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // position in the allowed region: [-omega+eps, omega-eps] or +-[omega+eps, 3*omega+eps]
  auto position = [&](double margin) {
    if (config.domain == TargetClass::Low) {
      const double reach = omega - eps - margin;
      return -reach + 2.0 * reach * unit(rng);
    }
    const double base = omega + eps + margin;
    const double w = base + 2.0 * omega * unit(rng);
    return unit(rng) < 0.5 ? -w : w;
  };
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < config.random_mixed.atoms; ++i) {
    const double w = position(0.0);
    atoms.push_back({w, 2.0 * std::numbers::pi * complex_normal(rng) / std::numbers::sqrt2});
  }
  std::vector<DensityComponent> density;
  for (std::size_t i = 0; i < config.random_mixed.bumps; ++i) {
    const double half = (0.05 + 0.2 * unit(rng)) * std::min(omega - eps, omega);
    const double center = position(half);
    DensityComponent c;
    c.kind = DensityComponent::Kind::RaisedCosine;
    c.lo = center - half;
    c.hi = center + half;
    c.amplitude = complex_normal(rng);
    density.push_back(c);
  }
  return make_mixed_signal(std::move(atoms), std::move(density), config.domain, eps, omega);
}

}  // namespace

Json FailureRecord::to_json() const {
  Json j = {{"code", std::string(to_string(code))},
            {"signal", signal},
            {"gamma", gamma},
            {"measured", measured},
            {"bound", bound},
            {"message", message},
            {"fatal", fatal}};
  if (!std::isnan(gamma_prev)) j["gamma_prev"] = gamma_prev;
  return j;
}

bool ErrorReport::ok() const {
  for (const ReportRow& r : rows) {
    if (!r.pass) return false;
  }
  for (const FailureRecord& f : failures) {
    if (f.fatal) return false;
  }
  return true;
}

std::string ErrorReport::to_csv() const {
  std::string out = "signal,gamma,err_l2,err_linf,deviation_inf,bound,diagnostic,pass\n";
  for (const ReportRow& r : rows) {
    out += r.signal + ',' + format_double(r.gamma) + ',' + format_double(r.err_l2) + ',' + format_double(r.err_linf) +
           ',' + format_double(r.deviation_inf) + ',' + format_double(r.bound) + ',' + format_double(r.diagnostic) + ',' +
           (r.pass ? "1" : "0") + '\n';
  }
  return out;
}

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) bad_config("config must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("kernel")) bad_config("config needs \"kernel\"");
  c.kernel = kernel_from_json(j.at("kernel"));
  if (!j.contains("gamma_ladder")) bad_config("config needs \"gamma_ladder\"");
  c.gamma_ladder = ladder_from(j.at("gamma_ladder"), "gamma_ladder");
  if (j.contains("high_gamma_ladder")) c.high_gamma_ladder = ladder_from(j.at("high_gamma_ladder"), "high_gamma_ladder");
  try {
    c.domain = target_class_from_string(j.value("domain", std::string("LOW")));
  } catch (const Error& e) {
    bad_config(e.what());
  }
  c.epsilon = j.value("epsilon", 0.1 * c.kernel.omega());
  for (const Json& s : j.value("signals", Json::array())) {
    SignalSpec spec;
    spec.id = s.value("id", "signal" + std::to_string(c.signals.size()));
    for (const Json& b : s.value("bands", Json::array())) spec.bands.push_back(band_from_json(b));
    c.signals.push_back(std::move(spec));
  }
  for (const Json& s : j.value("mixed_signals", Json::array())) {
    Json body = s;
    if (!body.contains("class")) body["class"] = std::string(to_string(c.domain));
    if (!body.contains("epsilon")) body["epsilon"] = c.epsilon;
    if (!body.contains("omega")) body["omega"] = c.kernel.omega();
    c.mixed_signals.push_back({s.value("id", "mixed" + std::to_string(c.mixed_signals.size())),
                               mixed_spectrum_from_json(body)});
  }
  if (j.contains("random_mixed")) {
    const Json& r = j.at("random_mixed");
    c.random_mixed.count = r.value("count", std::size_t{0});
    c.random_mixed.atoms = r.value("atoms", std::size_t{2});
    c.random_mixed.bumps = r.value("bumps", std::size_t{1});
  }
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    const double dt = g.value("dt", 0.0);
    const std::size_t n = g.value("n", std::size_t{0});
    if (!(dt > 0.0) || !is_power_of_two(n) || n < 2) bad_config("grid needs dt > 0 and a power-of-two n");
    c.grid = TimeGrid::centered(dt, n);
  }
  if (j.contains("t_grid")) {
    const Json& g = j.at("t_grid");
    c.t_grid.t0 = g.value("t0", c.t_grid.t0);
    c.t_grid.dt = g.value("dt", c.t_grid.dt);
    c.t_grid.n = g.value("n", c.t_grid.n);
    if (!(c.t_grid.dt > 0.0) || c.t_grid.n == 0) bad_config("t_grid needs dt > 0 and n > 0");
  }
  if (j.contains("noise")) {
    const Json& n = j.at("noise");
    c.noise.eta = n.value("eta", 0.0);
    c.noise.lo = n.value("lo", 1.05 * c.kernel.omega());
    c.noise.hi = n.value("hi", 1.1 * c.kernel.omega());
  } else {
    c.noise.lo = 1.05 * c.kernel.omega();
    c.noise.hi = 1.1 * c.kernel.omega();
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    c.csv_path = o.value("csv", "");
    c.svg_path = o.value("svg", "");
    c.predictions_dir = o.value("predictions_dir", "");
  }
  c.seed = j.value("seed", std::uint64_t{0});
  validate_config(c);
  return c;
}

void validate_config(const ExperimentConfig& config) {
  check_ladder(config.gamma_ladder, "gamma_ladder");
  const bool positive = config.gamma_ladder.front() > 0.0;
  if (positive != (config.domain == TargetClass::Low)) {
    bad_config("gamma_ladder sign disagrees with domain " + std::string(to_string(config.domain)));
  }
  if (!config.high_gamma_ladder.empty()) {
    check_ladder(config.high_gamma_ladder, "high_gamma_ladder");
    if (config.high_gamma_ladder.front() > 0.0) bad_config("high_gamma_ladder must be negative");
    if (config.high_gamma_ladder.size() != config.gamma_ladder.size()) {
      bad_config("high_gamma_ladder must pair with gamma_ladder");
    }
  }
  if (!(config.epsilon >= 0.0) || config.epsilon >= config.kernel.omega()) bad_config("epsilon must lie in [0, omega)");
  if (!(config.noise.eta >= 0.0)) bad_config("noise eta must be non-negative");
  if (config.noise.eta > 0.0 && !(config.noise.hi > config.noise.lo && config.noise.lo > config.kernel.omega())) {
    bad_config("noise band must lie beyond omega");
  }
}

std::vector<MixedSignalSpec> expand_mixed_signals(const ExperimentConfig& config) {
  std::vector<MixedSignalSpec> out = config.mixed_signals;
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = 0; i < config.random_mixed.count; ++i) {
    out.push_back({"random" + std::to_string(i), random_mixed(config, rng)});
  }
  return out;
}

ErrorReport run_convergence_sweep(const ExperimentConfig& config) {
  validate_config(config);
  ErrorReport report;
  report.operation = "sweep";
  const double omega = config.kernel.omega();
  const TimeGrid grid = band_grid(config);
  const FrequencyDomain domain = eps_domain(config, config.domain);

  std::vector<double> deviation;
  for (double g : config.gamma_ladder) deviation.push_back(deviation_norm(make_predictor(config.kernel, g), domain, kInf));

  for (const SignalSpec& spec : config.signals) {
    const SignalPair signal = class_signal(spec, config.domain, omega, grid);
    const double x_l2 = std::sqrt(spectrum_energy(signal.second) / (2.0 * std::numbers::pi));
    const bool bounded = bands_inside(spec.bands, domain, omega);
    const std::size_t first = report.rows.size();
    for (std::size_t i = 0; i < config.gamma_ladder.size(); ++i) {
      const double g = config.gamma_ladder[i];
      PredictionResult r = spectral_predict(signal.second, config.kernel, g, grid.t0);
      ReportRow row{spec.id, g, r.err_l2, r.err_linf, deviation[i], kNaN, kNaN, true};
      if (bounded) {
        row.bound = deviation[i] * x_l2;
        if (r.err_l2 > row.bound * (1.0 + 1e-9) + 1e-15) {
          row.pass = false;
          report.failures.push_back({ErrorCode::BoundViolation, spec.id, g, kNaN, r.err_l2, row.bound,
                                     "L2 error above sup deviation times signal norm", true});
        }
      }
      save_prediction(config, spec.id, r, {{"deviation_inf", deviation[i]}, {"l2_bound", row.bound}});
      report.rows.push_back(row);
    }
    check_decreasing(report, first, report.rows.size());
    report.summary[spec.id] = {{"ratio_last_first", report.rows[first].err_l2 > 0.0
                                                        ? report.rows.back().err_l2 / report.rows[first].err_l2
                                                        : 0.0}};
  }
  return report;
}

ErrorReport run_uniform_bound_check(const ExperimentConfig& config) {
  validate_config(config);
  ErrorReport report;
  report.operation = "bound-check";
  const FrequencyDomain domain = eps_domain(config, config.domain);
  const std::vector<MixedSignalSpec> signals = expand_mixed_signals(config);
  for (const MixedSignalSpec& s : signals) {
    if (s.spectrum.class_tag() != config.domain) {
      throw Error(ErrorCode::ClassMismatch, "mixed signal " + s.id + " is not " + std::string(to_string(config.domain)));
    }
  }
  for (double g : config.gamma_ladder) {
    const PredictorTransfer predictor = make_predictor(config.kernel, g);
    const double dev = deviation_norm(predictor, domain, kInf);
    Json per_gamma = {{"deviation_inf", dev}};
    for (const MixedSignalSpec& s : signals) {
      const double cstar = cstar_norm(s.spectrum);
      const double bound = dev * cstar / (2.0 * std::numbers::pi);
      PredictionResult r = mixed_predict(s.spectrum, config.kernel, g, config.t_grid);
      ReportRow row{s.id, g, r.err_l2, r.err_linf, dev, bound, kNaN, true};
      if (r.err_linf > bound + 1e-6) {
        row.pass = false;
        report.failures.push_back({ErrorCode::BoundViolation, s.id, g, kNaN, r.err_linf, bound,
                                   "sup error above the uniform bound", true});
      }
      const bool single_atom = s.spectrum.atoms().size() == 1 && s.spectrum.density().empty();
      if (single_atom && bound > 0.0) {
        const Atom& atom = s.spectrum.atoms().front();
        const Complex dk = eval_predictor_transfer(predictor, atom.omega).value - eval_transfer(config.kernel, atom.omega);
        const double exact = std::abs(dk) * std::abs(atom.c) / (2.0 * std::numbers::pi);
        row.diagnostic = r.err_linf / bound;
        if (std::abs(r.err_linf - exact) > 1e-6) {
          row.pass = false;
          report.failures.push_back({ErrorCode::BoundViolation, s.id, g, kNaN, r.err_linf, exact,
                                     "single-atom error differs from the closed form", true});
        }
      }
      save_prediction(config, s.id, r, {{"deviation_inf", dev}, {"cstar_norm", cstar}, {"uniform_bound", bound}});
      report.rows.push_back(row);
    }
    report.summary["gamma=" + gamma_tag(g)] = per_gamma;
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [&](const ReportRow& a, const ReportRow& b) {
    auto index = [&](const std::string& id) {
      for (std::size_t i = 0; i < signals.size(); ++i) {
        if (signals[i].id == id) return i;
      }
      return signals.size();
    };
    return index(a.signal) < index(b.signal);
  });
  return report;
}

ErrorReport run_robustness_probe(const ExperimentConfig& config) {
  validate_config(config);
  if (config.domain != TargetClass::Low) bad_config("robustness probe needs a LOW domain");
  ErrorReport report;
  report.operation = "robustness";
  const double omega = config.kernel.omega();
  const TimeGrid grid = band_grid(config, config.noise.eta > 0.0 ? config.noise.hi : 0.0);
  for (std::size_t si = 0; si < config.signals.size(); ++si) {
    const SignalSpec& spec = config.signals[si];
    const SignalPair base = class_signal(spec, TargetClass::Low, omega, grid);
    const SignalPair noisy = config.noise.eta > 0.0
                                 ? add_outofband_noise(base, config.noise.eta, config.noise.lo, config.noise.hi, omega,
                                                       config.seed + si)
                                 : base;
    const std::size_t first = report.rows.size();
    for (double g : config.gamma_ladder) {
      PredictionResult r = spectral_predict(noisy.second, config.kernel, g, grid.t0);
      save_prediction(config, spec.id, r, {{"eta", config.noise.eta}});
      report.rows.push_back({spec.id, g, r.err_l2, r.err_linf, kNaN, kNaN, kNaN, true});
    }
    std::size_t best = first;
    for (std::size_t i = first; i < report.rows.size(); ++i) {
      if (report.rows[i].err_l2 < report.rows[best].err_l2) best = i;
    }
    const std::size_t last = report.rows.size() - 1;
    const double err_min = report.rows[best].err_l2;
    const double growth = err_min > 0.0 ? report.rows[last].err_l2 / err_min : 1.0;
    const bool interior = best > first && best < last;
    const bool u_shape = interior && report.rows[last].err_l2 > err_min;
    for (std::size_t i = first; i <= last; ++i) report.rows[i].diagnostic = report.rows[i].err_l2 / err_min;
    report.summary[spec.id] = {{"gamma_star", report.rows[best].gamma},
                               {"err_min", err_min},
                               {"growth_factor", growth},
                               {"u_shape", u_shape},
                               {"grows_from_start", best == first && growth > 1.0}};
    if (config.noise.eta == 0.0) {
      check_decreasing(report, first, report.rows.size());
    } else if (best == last) {
      report.failures.push_back({ErrorCode::NoGrowthDetected, spec.id, report.rows[best].gamma, kNaN, err_min, kNaN,
                                 "error still decreasing at the end of the ladder", false});
    }
  }
  return report;
}

ErrorReport run_decomposition_demo(const ExperimentConfig& config) {
  check_ladder(config.gamma_ladder, "gamma_ladder");
  if (config.gamma_ladder.front() < 0.0) bad_config("decomposition needs a positive gamma_ladder");
  std::vector<double> high = config.high_gamma_ladder;
  if (high.empty()) {
    for (double g : config.gamma_ladder) high.push_back(-g);
  }
  ExperimentConfig checked = config;
  checked.domain = TargetClass::Low;
  checked.high_gamma_ladder = high;
  validate_config(checked);

  ErrorReport report;
  report.operation = "decompose";
  const double omega = config.kernel.omega();
  const TimeGrid grid = band_grid(config);
  for (const SignalSpec& spec : config.signals) {
    const SignalPair signal = make_signal(spec.bands, grid);
    const auto [x_low, x_high] = ideal_lowpass_split(signal.second, omega);
    std::vector<ReportRow> low_rows, high_rows, sum_rows;
    for (std::size_t i = 0; i < config.gamma_ladder.size(); ++i) {
      const double gl = config.gamma_ladder[i];
      const double gh = high[i];
      const PredictionResult rl = spectral_predict(x_low, config.kernel, gl, grid.t0);
      const PredictionResult rh = spectral_predict(x_high, config.kernel, gh, grid.t0);

      const PredictorTransfer pl = make_predictor(config.kernel, gl);
      const PredictorTransfer ph = make_predictor(config.kernel, gh);
      SampledSpectrum y = signal.second;
      SampledSpectrum yhat_direct = signal.second;
      for (std::size_t k = 0; k < y.values.size(); ++k) {
        const Complex xv = signal.second.values[k];
        if (xv == Complex{}) {
          y.values[k] = yhat_direct.values[k] = Complex{};
          continue;
        }
        const double w = y.frequency(k);
        const Complex kv = eval_transfer(config.kernel, w);
        const CompensatorValue v = eval_V(std::abs(w) <= omega ? pl : ph, Complex(0.0, w));
        y.values[k] = kv * xv;
        yhat_direct.values[k] = v.value * kv * xv;
      }
      const SampledSignal y_t = fourier_inverse(y, grid.t0);
      const SampledSignal direct_t = fourier_inverse(yhat_direct, grid.t0);
      SampledSignal sum = rl.yhat;
      double residual = 0.0;
      double scale = 1.0;
      for (std::size_t n = 0; n < sum.values.size(); ++n) {
        sum.values[n] += rh.yhat.values[n];
        residual = std::max(residual, std::abs(sum.values[n] - direct_t.values[n]));
        scale = std::max(scale, std::abs(direct_t.values[n]));
      }
      const ErrorNorms total = error_norms(y_t, sum);
      ReportRow row{spec.id, gl, total.l2, total.linf, kNaN, rl.err_l2 + rh.err_l2 + 1e-9, residual, true};
      if (residual > 1e-12 * scale) {
        row.pass = false;
        report.failures.push_back({ErrorCode::BoundViolation, spec.id, gl, kNaN, residual, 1e-12 * scale,
                                   "split prediction differs from the componentwise sum", true});
      }
      if (total.l2 > row.bound) {
        row.pass = false;
        report.failures.push_back({ErrorCode::BoundViolation, spec.id, gl, kNaN, total.l2, row.bound,
                                   "combined error above the sum of component errors", true});
      }
      low_rows.push_back({spec.id + ":L", gl, rl.err_l2, rl.err_linf, kNaN, kNaN, kNaN, true});
      high_rows.push_back({spec.id + ":H", gh, rh.err_l2, rh.err_linf, kNaN, kNaN, kNaN, true});
      sum_rows.push_back(row);
      save_prediction(config, spec.id + ":L", rl, Json::object());
      save_prediction(config, spec.id + ":H", rh, Json::object());
    }
    for (auto* rows : {&low_rows, &high_rows, &sum_rows}) {
      const std::size_t first = report.rows.size();
      report.rows.insert(report.rows.end(), rows->begin(), rows->end());
      check_decreasing(report, first, report.rows.size());
    }
  }
  return report;
}

void write_report_files(const ErrorReport& report, const ExperimentConfig& config, bool emit_svg) {
  if (!config.csv_path.empty()) write_text_file(config.csv_path, report.to_csv());
  if (!emit_svg) return;
  std::map<std::string, PlotSeries> by_signal;
  std::vector<std::string> order;
  for (const ReportRow& r : report.rows) {
    auto [it, fresh] = by_signal.try_emplace(r.signal);
    if (fresh) {
      order.push_back(r.signal);
      it->second.label = r.signal;
    }
    it->second.x.push_back(std::abs(r.gamma));
    it->second.y.push_back(report.operation == "bound-check" ? r.err_linf : r.err_l2);
  }
  std::vector<PlotSeries> series;
  for (const std::string& id : order) series.push_back(by_signal[id]);
  std::string path = config.svg_path;
  if (path.empty()) path = config.csv_path.empty() ? report.operation + ".svg" : config.csv_path + ".svg";
  const std::string y_label = report.operation == "bound-check" ? "sup error" : "L2 error";
  write_text_file(path, svg_plot(series, report.operation + ": error vs |gamma|", "|gamma|", y_label, true, true));
}

}  // namespace predlab
