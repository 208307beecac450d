// Acceptance checks, one per criterion. `acceptance cNN` runs one, `acceptance all` runs
// every criterion, `acceptance freeze` recomputes the golden values from an oracle run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "predlab/error.hpp"
#include "predlab/harness.hpp"
#include "predlab/quadrature.hpp"

using namespace predlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr double kNaN() { return std::numeric_limits<double>::quiet_NaN(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::string golden_path = std::string(PREDLAB_GOLDEN_DIR) + "/acceptance.json";

Json load_golden() {
  if (!std::filesystem::exists(golden_path)) return Json::object();
  return read_json_file(golden_path);
}

RationalAnticausalKernel reference_kernel() { return build_kernel({{1.0, 0.0, 1}}, {1.0}, 1.0); }

RationalAnticausalKernel random_kernel(std::mt19937_64& rng, double omega) {
  std::uniform_real_distribution<double> a(0.2, 2.0), b(0.05, 0.95), c(-1.0, 1.0);
  std::vector<Pole> poles;
  const int pairs = static_cast<int>(rng() % 2);
  for (int i = 0; i < pairs; ++i) {
    const double aa = a(rng), bb = b(rng) * omega;
    poles.push_back({aa, bb, 1});
    poles.push_back({aa, -bb, 1});
  }
  poles.push_back({a(rng), 0.0, 1 + static_cast<int>(rng() % 2)});
  int degree = 0;
  for (const Pole& p : poles) degree += p.multiplicity;
  std::vector<double> num(static_cast<std::size_t>(1 + rng() % static_cast<unsigned>(degree)));
  for (double& v : num) v = c(rng);
  if (num.back() == 0.0) num.back() = 1.0;
  return build_kernel(poles, num, omega);
}

// ---------------------------------------------------------------------------------------------

Outcome real_part_identity() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double omega = 0.1 + 5.0 * u(rng);
    const double a = 0.01 + 5.0 * u(rng);
    const double b = (2.0 * u(rng) - 1.0) * 0.999 * omega;
    const double w = (2.0 * u(rng) - 1.0) * 20.0 * omega;
    const double closed = eval_phi_real(a, b, omega, w);
    const double direct = mobius_exponent(a, b, omega, Complex(0.0, w)).real();
    worst = std::max(worst, std::abs(closed - direct));
  }
  const double t = seconds_since(start);
  return {worst <= 1e-12 && t < 1.0, "real-part identity: 1000 tuples, max |diff| " + fmt("%.3g", worst) +
                                         " (<= 1e-12), " + fmt("%.3f", t) + " s (< 1 s)"};
}

Outcome compensator_modulus_bound() {
  const auto start = Clock::now();
  std::mt19937_64 rng(202);
  double worst = 0.0;
  std::size_t violations = 0, checked = 0;
  std::string worst_case;
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = random_kernel(rng, 1.0);
    for (double gamma : {0.5, 5.0, 50.0, -0.5, -5.0, -50.0}) {
      const auto pred = make_predictor(k, gamma);
      for (int i = 0; i < 10000; ++i) {
        // band edges excluded: open in-band interval, off-band from just past omega to 20 omega
        const double x = (i + 0.5) / 10000.0;
        const double w = gamma > 0 ? -1.0 + 2.0 * x : (i % 2 ? 1.0 : -1.0) * (1.0 + 19.0 * x);
        const CompensatorValue v = eval_V(pred, Complex(0.0, w));
        const double excess = v.saturated ? kInf : std::abs(v.value) - 1.0;
        ++checked;
        if (excess > 1e-12) ++violations;
        if (excess > worst) {
          worst = excess;
          worst_case = "kernel " + std::to_string(trial) + " gamma " + fmt("%g", gamma) + " w " + fmt("%.6g", w);
        }
      }
    }
  }
  const double t = seconds_since(start);
  std::ostringstream d;
  d << "|V(iw)| <= 1: " << violations << " of " << checked << " points exceed by > 1e-12, max |V| - 1 = "
    << fmt("%.6g", worst) << (worst_case.empty() ? "" : " at " + worst_case) << ", " << fmt("%.2f", t) << " s";
  return {violations == 0 && t < 30.0, d.str()};
}

Outcome deviation_monotone_and_uniform() {
  const auto start = Clock::now();
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> a_dist(0.5, 1.0);
  std::vector<double> ladder;
  for (int j = 0; j <= 9; ++j) ladder.push_back(std::ldexp(1.0, j));
  const double omega = 1.0, eps = 0.1 * omega;
  std::size_t broken = 0, points = 0, kernels_below = 0;
  double worst_gamma = 0.0;
  const int kernels = 20;
  for (int trial = 0; trial < kernels; ++trial) {
    const auto k = build_kernel({{a_dist(rng), 0.0, 1}}, {1.0}, omega);
    std::vector<PredictorTransfer> preds;
    for (double g : ladder) preds.push_back(make_predictor(k, g));
    for (int i = 1; i < 2000; ++i) {
      const double w = -omega + 2.0 * omega * i / 2000.0;
      double prev = kInf;
      bool ok = true;
      for (const auto& p : preds) {
        const double d = std::abs(eval_V_minus_one(p, Complex(0.0, w)));
        if (!(d < prev)) ok = false;
        prev = d;
      }
      ++points;
      if (!ok) ++broken;
    }
    double first_below = 0.0;
    for (std::size_t j = 0; j < ladder.size() && first_below == 0.0; ++j) {
      double sup = 0.0;
      for (int i = 0; i <= 10000; ++i) {
        const double w = -omega + eps + 2.0 * (omega - eps) * i / 10000.0;
        sup = std::max(sup, std::abs(eval_V_minus_one(preds[j], Complex(0.0, w))));
      }
      if (sup < 1e-6) first_below = ladder[j];
    }
    if (first_below > 0.0) {
      ++kernels_below;
      worst_gamma = std::max(worst_gamma, first_below);
    }
  }
  // diagnostic only: the same pointwise test for a conjugate pair
  const auto pair = build_kernel({{0.5, 0.8, 1}, {0.5, -0.8, 1}}, {0.0, 1.0}, omega);
  std::size_t pair_ok = 0;
  for (int i = 1; i < 2000; ++i) {
    const double w = -omega + 2.0 * omega * i / 2000.0;
    double prev = kInf;
    bool ok = true;
    for (double g : ladder) {
      const double d = std::abs(eval_V_minus_one(make_predictor(pair, g), Complex(0.0, w)));
      if (!(d < prev)) ok = false;
      prev = d;
    }
    if (ok) ++pair_ok;
  }
  const double t = seconds_since(start);
  std::ostringstream d;
  d << "|V-1| along gamma = 1..512 (doubling), " << kernels << " single-pole kernels: " << points - broken << "/"
    << points << " interior points strictly decreasing; sup over D_eps < 1e-6 reached for " << kernels_below << "/"
    << kernels << " kernels, by gamma = " << worst_gamma << "; conjugate-pair diagnostic " << pair_ok
    << "/1999 points; " << fmt("%.2f", t) << " s";
  return {broken == 0 && kernels_below == static_cast<std::size_t>(kernels) && t < 30.0, d.str()};
}

// L2 error of the spectral prediction by quadrature of (1/2pi) int |V-1|^2 |K|^2 |X|^2.
double oracle_l2_error(const RationalAnticausalKernel& k, double gamma, const std::vector<Band>& bands) {
  const auto pred = make_predictor(k, gamma);
  double total = 0.0;
  for (const Band& b : bands) {
    for (const auto& [lo, hi] : {std::pair{b.lo, b.hi}, std::pair{-b.hi, -b.lo}}) {
      if (!b.mirror && lo != b.lo) continue;
      total += integrate_real(
          [&](double w) {
            const Complex x = spectrum_value(bands, w);
            return std::norm(eval_V_minus_one(pred, Complex(0.0, w)) * eval_transfer(k, w) * x);
          },
          lo, hi, 1e-8, 0.0, 20);
    }
  }
  return std::sqrt(total / (2.0 * kPi));
}

struct LadderRun {
  std::vector<double> errors;
  std::vector<double> oracle;
  bool decreasing = true;
  double ratio() const { return errors.back() / errors.front(); }
  double oracle_ratio() const { return oracle.back() / oracle.front(); }
};

LadderRun convergence_run(TargetClass kind) {
  const auto k = reference_kernel();
  const std::vector<Band> bands =
      kind == TargetClass::Low
          ? std::vector<Band>{{EnvelopeShape::RaisedCosine, -0.9, 0.9, {1.0, 0.0}, 0.0, false}}
          : std::vector<Band>{{EnvelopeShape::RaisedCosine, 1.2, 1.5, {1.0, 0.0}, 0.0, true}};
  const std::vector<double> ladder{2, 5, 10, 20, 50};
  const double sign = kind == TargetClass::Low ? 1.0 : -1.0;
  const TimeGrid grid = default_time_grid(1.5, k.min_decay());
  const SignalPair s = kind == TargetClass::Low ? make_bandlimited_signal(bands, 1.0, grid)
                                                : make_highfreq_signal(bands, 1.0, grid);
  LadderRun run;
  for (double g : ladder) {
    run.errors.push_back(spectral_predict(s.second, k, sign * g, grid.t0).err_l2);
    run.oracle.push_back(oracle_l2_error(k, sign * g, bands));
    if (run.errors.size() > 1 && !(run.errors.back() < run.errors[run.errors.size() - 2])) run.decreasing = false;
  }
  return run;
}

Outcome convergence_ladder() {
  const auto start = Clock::now();
  const Json golden = load_golden();
  bool pass = true;
  std::ostringstream d;
  d << "err_l2 along gamma = +-{2,5,10,20,50}:";
  for (TargetClass kind : {TargetClass::Low, TargetClass::High}) {
    const LadderRun run = convergence_run(kind);
    const std::string key = kind == TargetClass::Low ? "low_ratio" : "high_ratio";
    const double frozen = golden.contains(key) ? golden.at(key).get<double>() : kNaN();
    const bool below = run.ratio() <= frozen * (1.0 + 1e-9);
    const double oracle_gap = std::abs(run.ratio() / run.oracle_ratio() - 1.0);
    pass = pass && run.decreasing && below && oracle_gap < 1e-3;
    d << " " << to_string(kind) << " decreasing=" << (run.decreasing ? "yes" : "no") << " ratio " << fmt("%.6e", run.ratio())
      << " (<= golden " << fmt("%.6e", frozen) << ", quadrature oracle " << fmt("%.6e", run.oracle_ratio())
      << ", rel gap " << fmt("%.1e", oracle_gap) << " < 1e-3" << ");";
  }
  const double t = seconds_since(start);
  d << " " << fmt("%.2f", t) << " s";
  return {pass && t < 60.0, d.str()};
}

Outcome holder_chain() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto k = reference_kernel();
  const double omega = 1.0, eps = 0.1;
  const TimeGrid grid = default_time_grid(1.0, k.min_decay());
  std::size_t checks = 0, failures = 0;
  double tightest = 0.0;
  for (double q : {4.0, 8.0}) {
    const double mu = 2.0 * q / (q - 2.0);
    for (int s = 0; s < 10; ++s) {
      std::vector<Band> bands;
      const int count = 1 + static_cast<int>(rng() % 3);
      for (int b = 0; b < count; ++b) {
        const double lo = -0.9 + 1.6 * u(rng);
        const double hi = std::min(0.9, lo + 0.05 + 0.5 * u(rng));
        const auto shape = static_cast<EnvelopeShape>(rng() % 3);
        bands.push_back({shape, lo, hi, {u(rng) - 0.5, u(rng) - 0.5}, 0.25 * (hi - lo), rng() % 2 == 0});
      }
      const SignalPair sig = make_bandlimited_signal(bands, omega, grid);
      // the signal's own frequency grid restricted to D is the quadrature rule for every norm
      DomainQuadrature rule;
      std::vector<double> x_abs;
      for (std::size_t i = 0; i < sig.second.values.size(); ++i) {
        const double w = sig.second.frequency(i);
        if (std::abs(w) > omega - eps) continue;
        rule.nodes.push_back(w);
        rule.weights.push_back(sig.second.domega);
        x_abs.push_back(std::abs(sig.second.values[i]));
      }
      const double xq = weighted_lp_norm(x_abs, rule.weights, q);
      for (double g : {2.0, 5.0, 10.0, 20.0, 50.0}) {
        const auto [y, yhat] = predicted_spectra(sig.second, k, g);
        double e2 = 0.0;
        for (std::size_t i = 0; i < y.values.size(); ++i) e2 += std::norm(yhat.values[i] - y.values[i]);
        const double measured = std::sqrt(e2 * y.domega);
        const double bound = deviation_norm(make_predictor(k, g), rule, mu) * xq;
        ++checks;
        if (!(measured <= bound * (1.0 + 1e-9))) ++failures;
        if (bound > 0.0) tightest = std::max(tightest, measured / bound);
      }
    }
  }
  std::ostringstream d;
  d << "Hoelder chain (q = 4, 8; 10 signals each; 5 gammas): " << checks - failures << "/" << checks
    << " satisfy ||Yhat-Y||_2 <= ||Khat-K||_mu ||X||_q (1 + 1e-9), max measured/bound " << fmt("%.4f", tightest);
  return {failures == 0, d.str()};
}

Outcome uniform_bound() {
  const auto start = Clock::now();
  std::size_t rows = 0, failed = 0, tight_ok = 0, tight_total = 0;
  double worst_slack = -kInf;
  std::string loose;
  for (TargetClass kind : {TargetClass::Low, TargetClass::High}) {
    const double sign = kind == TargetClass::Low ? 1.0 : -1.0;
    Json j = {{"kernel", {{"omega", 1.0}, {"poles", {{1.0, 0.0, 1}}}, {"numerator", {1.0}}, {"paired", true}}},
              {"gamma_ladder", {2 * sign, 5 * sign, 10 * sign, 20 * sign, 50 * sign}},
              {"domain", std::string(to_string(kind))},
              {"epsilon", 0.1},
              {"random_mixed", {{"count", 10}, {"atoms", 3}, {"bumps", 2}}},
              {"seed", kind == TargetClass::Low ? 61 : 62}};
    const std::vector<double> atoms =
        kind == TargetClass::Low ? std::vector<double>{0.0, 0.45, -0.9} : std::vector<double>{1.1, -1.6, 3.0};
    Json singles = Json::array();
    for (double w : atoms) singles.push_back({{"id", "atom" + fmt("%g", w)}, {"atoms", {{w, 2.0 * kPi, 0.0}}}});
    j["mixed_signals"] = singles;
    const ExperimentConfig c = parse_config(j);
    const ErrorReport r = run_uniform_bound_check(c);
    for (const ReportRow& row : r.rows) {
      ++rows;
      if (!(row.err_linf <= row.bound + 1e-6)) ++failed;
      worst_slack = std::max(worst_slack, row.err_linf - row.bound);
      if (row.signal.rfind("atom", 0) == 0) {
        const double w = std::stod(row.signal.substr(4));
        const auto pred = make_predictor(c.kernel, row.gamma);
        const double share =
            std::abs(eval_predictor_transfer(pred, w).value - eval_transfer(c.kernel, w)) / row.deviation_inf;
        ++tight_total;
        // err_linf comes from differencing O(1) samples, so its floor is absolute roundoff
        if (row.err_linf >= share * row.bound - 1e-12) {
          ++tight_ok;
        } else {
          loose += " " + row.signal + "@" + fmt("%g", row.gamma) + ":" + fmt("%.6g", row.err_linf / row.bound) + "<" +
                   fmt("%.6g", share);
        }
      }
    }
  }
  const double t = seconds_since(start);
  std::ostringstream d;
  d << "uniform sup bound (10 random M_L + 10 random M_H + 6 single atoms, 5 gammas each): " << rows - failed << "/"
    << rows << " rows within bound + 1e-6 (max err - bound " << fmt("%.3g", worst_slack) << "); single-atom ratio >= share "
    << tight_ok << "/" << tight_total << (loose.empty() ? "" : " (short:" + loose + ")") << "; " << fmt("%.2f", t) << " s";
  return {failed == 0 && tight_ok == tight_total, d.str()};
}

Outcome pure_tone() {
  const auto start = Clock::now();
  const auto k = reference_kernel();
  const double w0 = 0.5, gamma = 2.0;
  const SignalFunction tone = [&](double t) { return std::exp(Complex(0.0, w0 * t)); };

  const TimeGrid probe{-3.0, 0.75, 9};
  const SampledSignal y = anticausal_convolve_oracle(k, tone, probe, 1e-10);
  double oracle_err = 0.0;
  for (std::size_t i = 0; i < probe.n; ++i) {
    oracle_err = std::max(oracle_err, std::abs(y.values[i] - eval_transfer(k, w0) * tone(probe.at(i))));
  }

  const double dt = std::ldexp(1.0, -10);
  const TimeGrid kgrid = TimeGrid::centered(dt, std::size_t{1} << 17);
  const auto pred = make_predictor(k, gamma);
  const TimePredictor khat = synthesize_time_predictor(pred, kgrid);
  const Complex expected_gain = eval_predictor_transfer(pred, w0).value;
  std::ostringstream trunc;
  double causal_err = kInf;
  for (double horizon : {10.0, 20.0, 40.0, 60.0}) {
    const auto lags = static_cast<std::size_t>(std::llround(horizon / dt));
    SampledSignal x{-horizon, dt, std::vector<Complex>(lags + 5)};
    for (std::size_t i = 0; i < x.values.size(); ++i) x.values[i] = tone(x.time(i));
    const SampledSignal yhat = causal_convolve(khat.samples, x, horizon);
    double err = 0.0;
    for (std::size_t i = 0; i < yhat.values.size(); ++i) {
      err = std::max(err, std::abs(yhat.values[i] - expected_gain * tone(yhat.time(i))));
    }
    trunc << " M=" << horizon << ":" << fmt("%.2e", err);
    causal_err = err;
  }
  const double t = seconds_since(start);
  std::ostringstream d;
  d << "pure tone w0 = 0.5: oracle |y - K(iw0) x| = " << fmt("%.2e", oracle_err)
    << " (<= 1e-6); causal k^ (gamma 2, dt 2^-10) |y^ - K^(iw0) x| = " << fmt("%.2e", causal_err)
    << " (<= 1e-5); truncation error vs M:" << trunc.str() << "; " << fmt("%.2f", t) << " s";
  return {oracle_err <= 1e-6 && causal_err <= 1e-5, d.str()};
}

Outcome decomposition() {
  Json j = {{"kernel", {{"omega", 1.0}, {"poles", {{0.5, 0.8, 1}}}, {"numerator", {0.0, 1.0}}, {"paired", true}}},
            {"gamma_ladder", {2, 5, 10, 20, 50}},
            {"signals",
             {{{"id", "mixed"},
               {"bands",
                {{{"shape", "raised_cosine"}, {"lo", -0.8}, {"hi", 0.8}},
                 {{"shape", "raised_cosine"}, {"lo", 1.2}, {"hi", 1.5}, {"mirror", true}}}}}}}};
  const ErrorReport r = run_decomposition_demo(parse_config(j));
  double residual = 0.0;
  bool combined_decreasing = true, parts_decreasing = true, triangle = true;
  double prev_sum = kInf, prev_l = kInf, prev_h = kInf;
  for (const ReportRow& row : r.rows) {
    if (row.signal == "mixed") {
      residual = std::max(residual, row.diagnostic);
      combined_decreasing = combined_decreasing && row.err_l2 < prev_sum;
      triangle = triangle && row.err_l2 <= row.bound;
      prev_sum = row.err_l2;
    } else if (row.signal == "mixed:L") {
      parts_decreasing = parts_decreasing && row.err_l2 < prev_l;
      prev_l = row.err_l2;
    } else {
      parts_decreasing = parts_decreasing && row.err_l2 < prev_h;
      prev_h = row.err_l2;
    }
  }
  std::ostringstream d;
  d << "split-predict-sum vs direct: max residual " << fmt("%.2e", residual) << " (<= 1e-12); combined err_l2 "
    << (combined_decreasing ? "decreasing" : "NOT decreasing") << " along paired ladder; components "
    << (parts_decreasing ? "decreasing" : "NOT decreasing") << "; triangle inequality " << (triangle ? "holds" : "fails");
  return {r.ok() && residual <= 1e-12 && combined_decreasing && parts_decreasing && triangle, d.str()};
}

Json robustness_config() {
  return {{"kernel", {{"omega", 1.0}, {"poles", {{1.0, 0.0, 1}}}, {"numerator", {1.0}}, {"paired", true}}},
          {"gamma_ladder", {2, 5, 10, 20, 50, 100, 200}},
          {"signals", {{{"id", "rc"}, {"bands", {{{"shape", "raised_cosine"}, {"lo", -0.9}, {"hi", 0.9}}}}}}},
          {"noise", {{"eta", 1e-3}, {"lo", 1.05}, {"hi", 1.1}}},
          {"seed", 2024}};
}

Outcome robustness() {
  const Json golden = load_golden();
  const ErrorReport r = run_robustness_probe(parse_config(robustness_config()));
  const Json& s = r.summary.at("rc");
  const double gamma_star = s.at("gamma_star").get<double>();
  const double growth = s.at("growth_factor").get<double>();
  const bool u_shape = s.at("u_shape").get<bool>();
  const double frozen_gamma = golden.contains("robust_gamma_star") ? golden.at("robust_gamma_star").get<double>() : kNaN();
  const double frozen_growth = golden.contains("robust_growth") ? golden.at("robust_growth").get<double>() : kNaN();
  const bool last_above = r.rows.back().err_l2 > s.at("err_min").get<double>();
  std::ostringstream d;
  d << "noise fraction 1e-3 on +-[1.05, 1.1]: U-shape " << (u_shape ? "detected" : "NOT detected") << ", gamma* = "
    << gamma_star << " (frozen " << frozen_gamma << "), growth factor " << fmt("%.6g", growth) << " (frozen threshold "
    << fmt("%.6g", frozen_growth) << ")";
  return {u_shape && last_above && gamma_star == frozen_gamma && growth >= frozen_growth * (1.0 - 1e-9), d.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto start = Clock::now();
  const auto dir = std::filesystem::temp_directory_path() / "predlab_acceptance_determinism";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  Json bound = {{"kernel", {{"omega", 1.0}, {"poles", {{0.5, 0.8, 1}}}, {"numerator", {0.0, 1.0}}, {"paired", true}}},
                {"gamma_ladder", {2, 5, 10}},
                {"random_mixed", {{"count", 4}, {"atoms", 2}, {"bumps", 1}}},
                {"seed", 99}};
  const std::vector<std::pair<std::string, Json>> runs{
      {"sweep", Json::parse(slurp(std::string(PREDLAB_GOLDEN_DIR) + "/sweep_reference.json"))},
      {"bound-check", bound},
      {"robustness", robustness_config()},
      {"decompose", Json::parse(slurp(std::string(PREDLAB_GOLDEN_DIR) + "/sweep_reference.json"))}};
  std::size_t identical = 0;
  std::string mismatch;
  for (const auto& [cmd, cfg] : runs) {
    const auto cfg_path = dir / (cmd + ".json");
    std::ofstream(cfg_path) << cfg.dump(2);
    std::string first;
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / (cmd + "_" + std::to_string(rep) + ".csv");
      const auto preds = dir / (cmd + "_pred" + std::to_string(rep));
      const std::string line = std::string(PREDLAB_CLI) + " " + cmd + " --config " + cfg_path.string() + " --out " +
                               out.string() + " --predictions-dir " + preds.string() + " --seed 7 2>/dev/null";
      const int status = std::system(line.c_str());
      if (status != 0) {
        same = false;
        mismatch += " " + cmd + " exited " + std::to_string(status);
        break;
      }
      std::string content = slurp(out);
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(preds)) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) content += f.filename().string() + "\n" + slurp(f);
      if (rep == 0) {
        first = content;
      } else if (content != first || first.empty()) {
        same = false;
        mismatch += " " + cmd;
      }
    }
    if (same) ++identical;
  }
  const double t = seconds_since(start);
  std::ostringstream d;
  d << "determinism: " << identical << "/" << runs.size()
    << " CLI runs (report CSV + every prediction CSV/JSON) bit-identical across two invocations with --seed 7"
    << (mismatch.empty() ? "" : "; differs:" + mismatch) << "; " << fmt("%.2f", t)
    << " s (suite runtime is the ctest total)";
  return {identical == runs.size(), d.str()};
}

int freeze() {
  Json golden = load_golden();
  golden["low_ratio"] = convergence_run(TargetClass::Low).ratio();
  golden["high_ratio"] = convergence_run(TargetClass::High).ratio();
  const ErrorReport r = run_robustness_probe(parse_config(robustness_config()));
  golden["robust_gamma_star"] = r.summary.at("rc").at("gamma_star");
  golden["robust_growth"] = r.summary.at("rc").at("growth_factor");
  write_text_file(golden_path, golden.dump(2) + "\n");
  std::printf("%s\n", golden.dump(2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"c01", real_part_identity},        {"c02", compensator_modulus_bound}, {"c03", deviation_monotone_and_uniform},
      {"c04", convergence_ladder},        {"c05", holder_chain},              {"c06", uniform_bound},
      {"c07", pure_tone},                 {"c08", decomposition},             {"c09", robustness},
      {"c10", determinism}};
  const std::string which = argc > 1 ? argv[1] : "all";
  if (which == "freeze") return freeze();
  int failed = 0, ran = 0;
  for (const auto& [name, fn] : criteria) {
    if (which != "all" && which != name) continue;
    ++ran;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion %s\n", which.c_str());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
