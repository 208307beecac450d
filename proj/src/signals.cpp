#include "predlab/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "predlab/error.hpp"
#include "predlab/quadrature.hpp"

namespace predlab {
namespace {

// Both envelopes are written in terms of the distance to the nearest edge so that values near the
// edges keep full relative precision (adaptive quadrature tests relative error per panel).
double raised_cosine(double w, double lo, double hi) {
  const double d = std::max(0.0, std::min(w - lo, hi - w));
  const double s = std::sin(std::numbers::pi * d / (hi - lo));
  return s * s;
}

// Gaussian shifted and rescaled so that it vanishes at both ends of [lo, hi] and peaks at 1.
double truncated_gaussian(double w, double lo, double hi, double sigma) {
  const double half = 0.5 * (hi - lo);
  const double s = sigma > 0.0 ? sigma : 0.5 * half;
  const double d = std::max(0.0, std::min(w - lo, hi - w));
  const double top = half * half / (2.0 * s * s);
  if (top > 700.0) {
    const double x = half - d;
    return std::exp(-x * x / (2.0 * s * s));
  }
  // g - edge = edge * expm1((half^2 - (w-c)^2) / 2s^2), and half^2 - (w-c)^2 = d (2 half - d)
  return std::expm1(d * (2.0 * half - d) / (2.0 * s * s)) / std::expm1(top);
}

Complex one_sided(const Band& band, double w) {
  if (w < band.lo || w > band.hi) return {};
  switch (band.shape) {
    case EnvelopeShape::RaisedCosine: return band.amplitude * raised_cosine(w, band.lo, band.hi);
    case EnvelopeShape::TruncatedGaussian: return band.amplitude * truncated_gaussian(w, band.lo, band.hi, band.sigma);
    case EnvelopeShape::Indicator: return band.amplitude;
  }
  return {};
}

void check_band(const Band& band) {
  if (!(band.lo < band.hi) || !std::isfinite(band.lo) || !std::isfinite(band.hi)) {
    throw Error(ErrorCode::SupportViolation, "band needs finite lo < hi");
  }
}

}  // namespace

Complex band_value(const Band& band, double w) {
  Complex v = one_sided(band, w);
  if (band.mirror) v += std::conj(one_sided(band, -w));
  return v;
}

Complex spectrum_value(std::span<const Band> bands, double w) {
  Complex v{};
  for (const Band& band : bands) v += band_value(band, w);
  return v;
}

TimeGrid default_time_grid(double omega_max_of_interest, double min_decay) {
  if (!(omega_max_of_interest > 0.0) || !(min_decay > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "default grid needs positive frequency and decay scales");
  }
  const double dt = std::numbers::pi / (8.0 * omega_max_of_interest);
  const double span = 400.0 / min_decay;
  const auto n = next_power_of_two(static_cast<std::size_t>(std::ceil(span / dt)) + 1);
  return TimeGrid::centered(dt, n);
}

SignalPair make_signal(std::span<const Band> bands, const TimeGrid& grid) {
  if (!is_power_of_two(grid.n) || grid.n < 2) throw Error(ErrorCode::GridMismatch, "signal grid must have power-of-two length");
  for (const Band& band : bands) check_band(band);
  SampledSpectrum spectrum = spectrum_grid_for(grid);
  for (std::size_t k = 0; k < grid.n; ++k) spectrum.values[k] = spectrum_value(bands, spectrum.frequency(k));
  SampledSignal signal = fourier_inverse(spectrum, grid.t0);
  return {std::move(signal), std::move(spectrum)};
}

SignalPair make_bandlimited_signal(std::span<const Band> bands, double omega, const TimeGrid& grid) {
  for (const Band& band : bands) {
    check_band(band);
    const bool inside = band.lo >= -omega && band.hi <= omega;
    if (!inside) {
      std::ostringstream msg;
      msg << "band [" << band.lo << ", " << band.hi << "] leaves [-" << omega << ", " << omega << "]";
      throw Error(ErrorCode::SupportViolation, msg.str());
    }
  }
  return make_signal(bands, grid);
}

SignalPair make_highfreq_signal(std::span<const Band> bands, double omega, const TimeGrid& grid) {
  for (const Band& band : bands) {
    check_band(band);
    const bool outside = band.lo >= omega || band.hi <= -omega;
    if (!outside) {
      std::ostringstream msg;
      msg << "band [" << band.lo << ", " << band.hi << "] meets (-" << omega << ", " << omega << ")";
      throw Error(ErrorCode::SupportViolation, msg.str());
    }
  }
  return make_signal(bands, grid);
}

Complex DensityComponent::eval(double w) const {
  switch (kind) {
    case Kind::RaisedCosine:
      return (w < lo || w > hi) ? Complex{} : amplitude * raised_cosine(w, lo, hi);
    case Kind::GaussianBump:
      return (w < lo || w > hi) ? Complex{} : amplitude * truncated_gaussian(w, lo, hi, sigma);
    case Kind::Sampled: {
      if (nodes.empty() || w < nodes.front() || w > nodes.back()) return {};
      const auto it = std::upper_bound(nodes.begin(), nodes.end(), w);
      if (it == nodes.end()) return values.back();
      const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
      const double frac = (w - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
      return values[i - 1] + frac * (values[i] - values[i - 1]);
    }
  }
  return {};
}

double DensityComponent::support_lo() const { return kind == Kind::Sampled ? nodes.front() : lo; }
double DensityComponent::support_hi() const { return kind == Kind::Sampled ? nodes.back() : hi; }

Complex MixedSpectrum::density_at(double w) const {
  Complex v{};
  for (const auto& c : density_) v += c.eval(w);
  return v;
}

std::vector<double> MixedSpectrum::breakpoints() const {
  std::vector<double> cuts;
  for (const auto& c : density_) {
    cuts.push_back(c.support_lo());
    cuts.push_back(c.support_hi());
    if (c.kind == DensityComponent::Kind::Sampled) cuts.insert(cuts.end(), c.nodes.begin(), c.nodes.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

Complex MixedSpectrum::integrate_density(const std::function<Complex(double)>& g, double rel_tol) const {
  const std::vector<double> cuts = breakpoints();
  Complex total{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const bool active = std::any_of(density_.begin(), density_.end(), [&](const DensityComponent& c) {
      return mid >= c.support_lo() && mid <= c.support_hi();
    });
    if (!active) continue;
    total += integrate_adaptive([&](double w) { return g(w) * density_at(w); }, cuts[i], cuts[i + 1], rel_tol, 0.0, 20)
                 .value;
  }
  return total;
}

Complex MixedSpectrum::eval(double t) const {
  Complex acc{};
  for (const Atom& atom : atoms_) acc += atom.c * std::exp(Complex(0.0, atom.omega * t));
  if (!density_.empty()) acc += integrate_density([t](double w) { return std::exp(Complex(0.0, w * t)); });
  return acc / (2.0 * std::numbers::pi);
}

MixedSpectrum make_mixed_signal(std::vector<Atom> atoms, std::vector<DensityComponent> density,
                                TargetClass class_tag, double epsilon, double omega) {
  if (!(omega > 0.0) || !(epsilon > 0.0) || !(epsilon < omega)) {
    throw Error(ErrorCode::InvalidArgument, "mixed spectra need 0 < epsilon < omega");
  }
  const double inner = omega - epsilon;
  const double outer = omega + epsilon;
  for (const Atom& atom : atoms) {
    if (!std::isfinite(atom.omega) || !std::isfinite(atom.c.real()) || !std::isfinite(atom.c.imag())) {
      throw Error(ErrorCode::InvalidArgument, "atoms must be finite");
    }
    const bool ok = class_tag == TargetClass::Low ? std::abs(atom.omega) <= inner : std::abs(atom.omega) >= outer;
    if (!ok) {
      std::ostringstream msg;
      msg << "atom at omega=" << atom.omega << " violates the " << to_string(class_tag) << " constraint with epsilon="
          << epsilon;
      throw Error(ErrorCode::ClassConstraintViolation, msg.str());
    }
  }
  for (const auto& c : density) {
    if (c.kind == DensityComponent::Kind::Sampled) {
      if (c.nodes.size() < 2 || c.nodes.size() != c.values.size() || !std::is_sorted(c.nodes.begin(), c.nodes.end())) {
        throw Error(ErrorCode::InvalidArgument, "sampled density needs >= 2 sorted nodes with matching values");
      }
    } else if (!(c.lo < c.hi)) {
      throw Error(ErrorCode::InvalidArgument, "density component needs lo < hi");
    }
    const double lo = c.support_lo();
    const double hi = c.support_hi();
    const bool ok = class_tag == TargetClass::Low ? (lo >= -inner && hi <= inner) : (lo >= outer || hi <= -outer);
    if (!ok) {
      std::ostringstream msg;
      msg << "density support [" << lo << ", " << hi << "] violates the " << to_string(class_tag)
          << " constraint with epsilon=" << epsilon;
      throw Error(ErrorCode::ClassConstraintViolation, msg.str());
    }
  }
  MixedSpectrum ms;
  ms.atoms_ = std::move(atoms);
  ms.density_ = std::move(density);
  ms.class_tag_ = class_tag;
  ms.epsilon_ = epsilon;
  ms.omega_ = omega;
  return ms;
}

double cstar_norm(const MixedSpectrum& ms) {
  double total = 0.0;
  for (const Atom& atom : ms.atoms()) total += std::abs(atom.c);
  if (ms.density().empty()) return total;
  // |X_c| integrated over the same breakpoint partition the signal quadrature uses.
  std::vector<double> cuts;
  for (const auto& c : ms.density()) {
    cuts.push_back(c.support_lo());
    cuts.push_back(c.support_hi());
    if (c.kind == DensityComponent::Kind::Sampled) cuts.insert(cuts.end(), c.nodes.begin(), c.nodes.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // overlapping components can cancel, leaving kinks in |X_c|; accuracy is judged against the total mass
  double mass = 0.0;
  for (const auto& c : ms.density()) {
    double peak = std::abs(c.amplitude);
    for (const Complex& v : c.values) peak = std::max(peak, std::abs(v));
    mass += peak * (c.support_hi() - c.support_lo());
  }
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_real([&](double w) { return std::abs(ms.density_at(w)); }, cuts[i], cuts[i + 1], 1e-12,
                            1e-12 * mass, 20);
  }
  return total;
}

std::pair<SampledSpectrum, SampledSpectrum> ideal_lowpass_split(const SampledSpectrum& spectrum, double omega) {
  SampledSpectrum low = spectrum;
  SampledSpectrum high = spectrum;
  for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
    if (std::abs(spectrum.frequency(k)) <= omega) {
      high.values[k] = Complex{};
    } else {
      low.values[k] = Complex{};
    }
  }
  return {std::move(low), std::move(high)};
}

double spectrum_energy(const SampledSpectrum& spectrum) {
  double e = 0.0;
  for (const Complex& v : spectrum.values) e += std::norm(v);
  return e * spectrum.domega;
}

SignalPair add_outofband_noise(const SignalPair& signal, double eta, double lo, double hi, double omega,
                               std::uint64_t seed) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::InvalidArgument, "eta must be finite and >= 0");
  if (hi < 0.0) {
    const double tmp = lo;
    lo = -hi;
    hi = -tmp;
  }
  if (!(lo < hi) || !(lo > omega)) {
    std::ostringstream msg;
    msg << "noise band +-[" << lo << ", " << hi << "] must lie outside [-" << omega << ", " << omega << "]";
    throw Error(ErrorCode::SupportViolation, msg.str());
  }
  if (eta == 0.0) return signal;

  const SampledSpectrum& x = signal.second;
  const std::size_t n = x.values.size();
  if (std::abs(x.omega0 + static_cast<double>(n / 2) * x.domega) > 1e-9 * x.domega * static_cast<double>(n)) {
    throw Error(ErrorCode::GridMismatch, "noise injection needs a frequency grid symmetric about zero");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SampledSpectrum noise = x;
  std::fill(noise.values.begin(), noise.values.end(), Complex{});
  for (std::size_t k = n / 2 + 1; k < n; ++k) {
    const double w = x.frequency(k);
    if (w < lo || w > hi) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    noise.values[k] = {re, im};
    noise.values[n - k] = {re, -im};
  }
  const double e_signal = spectrum_energy(x);
  const double e_noise = spectrum_energy(noise);
  if (!(e_noise > 0.0)) throw Error(ErrorCode::SupportViolation, "noise band contains no grid frequencies");
  const double scale = std::sqrt(eta * e_signal / e_noise);

  SampledSpectrum perturbed = x;
  for (std::size_t k = 0; k < n; ++k) perturbed.values[k] += scale * noise.values[k];
  SampledSignal time = fourier_inverse(perturbed, signal.first.t0);
  return {std::move(time), std::move(perturbed)};
}

}  // namespace predlab
