#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace predlab {

using Complex = std::complex<double>;

/// Uniform time grid t_n = t0 + n*dt, n = 0..n-1.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t n = 0;

  double at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double span() const { return static_cast<double>(n - 1) * dt; }

  /// Grid of n points centred so that t = 0 is the sample with index n/2.
  static TimeGrid centered(double dt, std::size_t n);
};

/// Samples of a signal on a uniform time grid. Real signals carry zero imaginary parts.
struct SampledSignal {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<Complex> values;

  TimeGrid grid() const { return {t0, dt, values.size()}; }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

/// Samples of a spectrum on a uniform frequency grid omega_k = omega0 + k*domega.
struct SampledSpectrum {
  double omega0 = 0.0;
  double domega = 1.0;
  std::vector<Complex> values;

  double frequency(std::size_t k) const { return omega0 + static_cast<double>(k) * domega; }
};

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Frequency grid paired with a time grid by the DFT: omega0 = -pi/dt, domega = 2*pi/(n*dt).
SampledSpectrum spectrum_grid_for(const TimeGrid& grid);

/// Unnormalised DFT, out[k] = sum_n in[n] exp(sign * 2*pi*i*k*n/N), sign = -1 forward.
std::vector<Complex> dft(std::span<const Complex> in, int sign);

/// Discrete approximation of X(omega) = int exp(-i*omega*t) x(t) dt on the paired grid.
/// Throws GridMismatch unless the length is a power of two.
SampledSpectrum fourier_forward(const SampledSignal& signal);

/// x(t) = (1/2pi) int exp(i*omega*t) X(omega) domega on the paired time grid, which starts at
/// t0 (default: centred grid).
SampledSignal fourier_inverse(const SampledSpectrum& spectrum);
SampledSignal fourier_inverse(const SampledSpectrum& spectrum, double t0);

/// Appends zeros until the length is a power of two.
SampledSignal zero_pad_to_pow2(SampledSignal signal);

}  // namespace predlab
