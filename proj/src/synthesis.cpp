#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "predlab/error.hpp"
#include "predlab/predictor.hpp"

namespace predlab {
namespace {

constexpr int kTailTerms = 6;
constexpr std::size_t kContourPoints = 256;
constexpr double kDecayLevel = 1e-8;

struct TailExpansion {
  double shift = 1.0;
  std::vector<Complex> coefficients;  // coefficient j-1 multiplies (shift/(p+shift))^j
};

// Taylor coefficients of K^(p(w)) at w = 0 with p = shift/w - shift, read off a circle in the
// w-plane that stays clear of the essential singularities of V and the cancelled poles of K.
TailExpansion tail_expansion(const PredictorTransfer& predictor) {
  const auto& kernel = predictor.kernel();
  std::vector<Complex> singular;
  for (std::size_t m = 0; m < kernel.poles().size(); ++m) {
    singular.push_back(kernel.poles()[m].location());
    singular.emplace_back(-predictor.alphas()[m], kernel.poles()[m].b);
  }
  double shift = 1e-3;
  for (const Complex& z : singular) shift = std::max(shift, std::abs(z));
  double rho = 1.0;
  for (const Complex& z : singular) rho = std::min(rho, shift / std::abs(shift + z));
  // Large |gamma| makes K^ grow quickly away from w = 0, so the coefficient error
  // eps * max|f| / r^J is smallest on a smaller circle. Try a few radii.
  double radius = 0.5 * rho;
  std::vector<Complex> samples;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 8; ++level) {
    const double r = 0.5 * rho * std::ldexp(1.0, -level);
    std::vector<Complex> trial(kContourPoints);
    double peak = 0.0;
    for (std::size_t k = 0; k < kContourPoints; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(kContourPoints);
      const Complex w = std::polar(r, theta);
      const Complex p = shift / w - shift;
      const CompensatorValue v = eval_V(predictor, p);
      if (v.saturated) {
        peak = std::numeric_limits<double>::infinity();
        break;
      }
      trial[k] = v.value * eval_transfer_at(kernel, p);
      peak = std::max(peak, std::abs(trial[k]));
    }
    const double cost = peak / std::pow(r, kTailTerms);
    if (cost < best_cost) {
      best_cost = cost;
      radius = r;
      samples = std::move(trial);
    }
  }
  if (samples.empty()) {
    std::ostringstream msg;
    msg << "V overflows near p=inf for gamma=" << predictor.gamma();
    throw Error(ErrorCode::SaturatedSpectrum, msg.str());
  }
  const std::vector<Complex> sums = dft(samples, -1);

  TailExpansion out;
  out.shift = shift;
  double scale = 1.0;
  for (int j = 1; j <= kTailTerms; ++j) {
    scale /= radius;
    out.coefficients.push_back(sums[static_cast<std::size_t>(j)] * scale / static_cast<double>(kContourPoints));
  }
  return out;
}

Complex tail_transfer(const TailExpansion& tail, Complex p) {
  const Complex w = tail.shift / (p + tail.shift);
  Complex acc{};
  Complex power{1.0, 0.0};
  for (const Complex& c : tail.coefficients) {
    power *= w;
    acc += c * power;
  }
  return acc;
}

// Inverse transform of the tail terms: sum_j c_j shift^j t^(j-1) exp(-shift t)/(j-1)! for t >= 0.
Complex tail_time(const TailExpansion& tail, double t) {
  if (t < 0.0) return {};
  Complex acc{};
  double term = tail.shift * std::exp(-tail.shift * t);
  for (std::size_t j = 0; j < tail.coefficients.size(); ++j) {
    acc += tail.coefficients[j] * term;
    term *= tail.shift * t / static_cast<double>(j + 1);
  }
  return acc;
}

}  // namespace

TimePredictor synthesize_time_predictor(const PredictorTransfer& predictor, const TimeGrid& grid) {
  if (!is_power_of_two(grid.n) || grid.n < 2 || !(grid.dt > 0.0)) {
    throw Error(ErrorCode::GridMismatch, "synthesis needs a power-of-two time grid");
  }
  const TailExpansion tail = tail_expansion(predictor);

  SampledSpectrum remainder = spectrum_grid_for(grid);
  double peak = 1.0;
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double w = remainder.frequency(k);
    const CompensatorValue khat = eval_predictor_transfer(predictor, w);
    if (khat.saturated) {
      std::ostringstream msg;
      msg << "K^ overflows at omega=" << w << " for gamma=" << predictor.gamma();
      throw Error(ErrorCode::SaturatedSpectrum, msg.str());
    }
    peak = std::max(peak, std::abs(khat.value));
    remainder.values[k] = khat.value - tail_transfer(tail, Complex(0.0, w));
  }
  const double edge = std::max(std::abs(remainder.values.front()), std::abs(remainder.values.back()));
  if (!(edge < kDecayLevel * peak)) {
    std::ostringstream msg;
    msg << "remainder spectrum is " << edge << " at the grid ends (|omega| = " << std::abs(remainder.omega0)
        << "); refine dt";
    throw Error(ErrorCode::SpectrumNotDecayed, msg.str());
  }

  TimePredictor out;
  out.samples = fourier_inverse(remainder, grid.t0);
  out.shift = tail.shift;
  out.tail = tail.coefficients;
  double negative = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = out.samples.time(i);
    out.samples.values[i] += tail_time(tail, t);
    const double e = std::norm(out.samples.values[i]);
    total += e;
    if (t < 0.0) negative += e;
  }
  out.leakage = total > 0.0 ? negative / total : 0.0;
  return out;
}

}  // namespace predlab
