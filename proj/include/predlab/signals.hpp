#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "predlab/fourier.hpp"
#include "predlab/predictor.hpp"

namespace predlab {

enum class EnvelopeShape { RaisedCosine, TruncatedGaussian, Indicator };

/// A spectral bump on [lo, hi]. The value is exactly zero outside the closed interval.
/// With `mirror` set, the Hermitian mate conj(E(-w)) on [-hi, -lo] is added so the
/// resulting signal is real.
struct Band {
  EnvelopeShape shape = EnvelopeShape::RaisedCosine;
  double lo = -1.0;
  double hi = 1.0;
  Complex amplitude{1.0, 0.0};
  /// Gaussian width; zero selects (hi - lo)/4.
  double sigma = 0.0;
  bool mirror = false;
};

Complex band_value(const Band& band, double w);
Complex spectrum_value(std::span<const Band> bands, double w);

using SignalPair = std::pair<SampledSignal, SampledSpectrum>;

/// Default analysis grid: dt = pi/(8*omega_max), span >= 400/min_decay, power-of-two length.
TimeGrid default_time_grid(double omega_max_of_interest, double min_decay);

/// Spectrum sampled on the grid paired with `grid`, signal by inverse transform.
SignalPair make_signal(std::span<const Band> bands, const TimeGrid& grid);

/// Throws SupportViolation if any band (or its mirror) leaves [-omega, omega].
SignalPair make_bandlimited_signal(std::span<const Band> bands, double omega, const TimeGrid& grid);

/// Throws SupportViolation if any band (or its mirror) meets (-omega, omega).
SignalPair make_highfreq_signal(std::span<const Band> bands, double omega, const TimeGrid& grid);

struct Atom {
  double omega = 0.0;
  Complex c;
};

/// One additive piece of an integrable density X_c.
struct DensityComponent {
  enum class Kind { RaisedCosine, GaussianBump, Sampled };
  Kind kind = Kind::RaisedCosine;
  double lo = 0.0;
  double hi = 0.0;
  Complex amplitude{1.0, 0.0};
  double sigma = 0.0;
  /// Sampled: sorted nodes with values, piecewise-linear in between, zero outside.
  std::vector<double> nodes;
  std::vector<Complex> values;

  Complex eval(double w) const;
  double support_lo() const;
  double support_hi() const;
};

/// Atomic-plus-density spectrum of a bounded signal
/// x(t) = (1/2pi) sum c_k exp(i w_k t) + (1/2pi) int exp(i w t) X_c(w) dw.
class MixedSpectrum {
 public:
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityComponent>& density() const { return density_; }
  TargetClass class_tag() const { return class_tag_; }
  double epsilon() const { return epsilon_; }
  double omega() const { return omega_; }

  Complex density_at(double w) const;

  /// int g(w) X_c(w) dw, split at every component breakpoint.
  Complex integrate_density(const std::function<Complex(double)>& g, double rel_tol = 1e-10) const;

  Complex eval(double t) const;

 private:
  friend MixedSpectrum make_mixed_signal(std::vector<Atom>, std::vector<DensityComponent>, TargetClass, double,
                                         double);
  std::vector<double> breakpoints() const;

  std::vector<Atom> atoms_;
  std::vector<DensityComponent> density_;
  TargetClass class_tag_ = TargetClass::Low;
  double epsilon_ = 0.1;
  double omega_ = 1.0;
};

/// Throws ClassConstraintViolation if an atom or density support leaves the class region.
MixedSpectrum make_mixed_signal(std::vector<Atom> atoms, std::vector<DensityComponent> density,
                                TargetClass class_tag, double epsilon, double omega);

/// sum |c_k| + int |X_c|.
double cstar_norm(const MixedSpectrum& ms);

/// (chi_L * X, chi_H * X) with chi_L the closed indicator of |w| <= omega.
std::pair<SampledSpectrum, SampledSpectrum> ideal_lowpass_split(const SampledSpectrum& spectrum, double omega);

/// Adds a seeded Hermitian random spectrum on +-[lo, hi] whose energy is eta times the
/// signal energy. Throws SupportViolation if the band meets [-omega, omega].
SignalPair add_outofband_noise(const SignalPair& signal, double eta, double lo, double hi, double omega,
                               std::uint64_t seed);

/// sum |X_k|^2 * domega.
double spectrum_energy(const SampledSpectrum& spectrum);

}  // namespace predlab
