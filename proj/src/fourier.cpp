#include "predlab/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "predlab/error.hpp"

namespace predlab {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// Snaps x to the nearest half-integer when it is one up to rounding, so that grid phases
// of centred grids come out as exact signs.
long double snap_half(double x) {
  const double twice = 2.0 * x;
  const double r = std::round(twice);
  if (std::abs(twice - r) <= 1e-9 * std::max(1.0, std::abs(twice))) return static_cast<long double>(r) / 2;
  return x;
}

// exp(2*pi*i*cycles), reduced modulo one cycle before the trig call.
Complex unit_phase(long double cycles) {
  long double frac = cycles - std::round(cycles);
  if (frac == 0.0L) return {1.0, 0.0};
  if (frac == 0.5L || frac == -0.5L) return {-1.0, 0.0};
  const double angle = static_cast<double>(2.0L * std::numbers::pi_v<long double> * frac);
  return std::polar(1.0, angle);
}

}  // namespace

TimeGrid TimeGrid::centered(double dt, std::size_t n) {
  return {-static_cast<double>(n / 2) * dt, dt, n};
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

SampledSpectrum spectrum_grid_for(const TimeGrid& grid) {
  const double pi = std::numbers::pi;
  SampledSpectrum s;
  s.omega0 = -pi / grid.dt;
  s.domega = 2.0 * pi / (static_cast<double>(grid.n) * grid.dt);
  s.values.assign(grid.n, Complex{});
  return s;
}

std::vector<Complex> dft(std::span<const Complex> in, int sign) {
  const std::size_t n = in.size();
  std::vector<Complex> out(n);
  if (n == 0) return out;
  FftwBuffer buf_in(n);
  FftwBuffer buf_out(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf_in.data, buf_out.data,
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    buf_in.data[i][0] = in[i].real();
    buf_in.data[i][1] = in[i].imag();
  }
  fftw_execute(plan);
  for (std::size_t i = 0; i < n; ++i) out[i] = {buf_out.data[i][0], buf_out.data[i][1]};
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

SampledSpectrum fourier_forward(const SampledSignal& signal) {
  const std::size_t n = signal.values.size();
  if (!is_power_of_two(n) || n < 2) {
    throw Error(ErrorCode::GridMismatch, "fourier_forward needs a power-of-two length, got " + std::to_string(n));
  }
  if (!(signal.dt > 0.0)) throw Error(ErrorCode::GridMismatch, "time step must be positive");

  SampledSpectrum out = spectrum_grid_for(signal.grid());
  // exp(-i*omega0*n*dt) = (-1)^n on the paired grid.
  std::vector<Complex> work(n);
  for (std::size_t i = 0; i < n; ++i) work[i] = (i % 2 == 0) ? signal.values[i] : -signal.values[i];
  const std::vector<Complex> sums = dft(work, -1);

  const long double tau = snap_half(signal.t0 / signal.dt);
  const long double nn = static_cast<long double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    // exp(-i*omega_k*t0) with omega_k*t0/(2pi) = -tau/2 + k*tau/n
    const long double cycles = tau / 2 - static_cast<long double>(k) * tau / nn;
    out.values[k] = signal.dt * unit_phase(cycles) * sums[k];
  }
  return out;
}

SampledSignal fourier_inverse(const SampledSpectrum& spectrum) {
  const std::size_t n = spectrum.values.size();
  const double dt = 2.0 * std::numbers::pi / (static_cast<double>(n) * spectrum.domega);
  return fourier_inverse(spectrum, -static_cast<double>(n / 2) * dt);
}

SampledSignal fourier_inverse(const SampledSpectrum& spectrum, double t0) {
  const std::size_t n = spectrum.values.size();
  if (!is_power_of_two(n) || n < 2) {
    throw Error(ErrorCode::GridMismatch, "fourier_inverse needs a power-of-two length, got " + std::to_string(n));
  }
  if (!(spectrum.domega > 0.0)) throw Error(ErrorCode::GridMismatch, "frequency step must be positive");

  const long double nn = static_cast<long double>(n);
  const double dt = 2.0 * std::numbers::pi / (static_cast<double>(n) * spectrum.domega);
  const long double beta = snap_half(spectrum.omega0 / (static_cast<double>(n) * spectrum.domega));
  const long double tau = snap_half(t0 / dt);

  std::vector<Complex> work(n);
  for (std::size_t k = 0; k < n; ++k) {
    work[k] = spectrum.values[k] * unit_phase(static_cast<long double>(k) * tau / nn);
  }
  const std::vector<Complex> sums = dft(work, +1);

  SampledSignal out;
  out.t0 = t0;
  out.dt = dt;
  out.values.resize(n);
  const double scale = spectrum.domega / (2.0 * std::numbers::pi);
  const Complex base = unit_phase(beta * tau);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = scale * base * unit_phase(static_cast<long double>(i) * beta) * sums[i];
  }
  return out;
}

SampledSignal zero_pad_to_pow2(SampledSignal signal) {
  signal.values.resize(next_power_of_two(signal.values.size()), Complex{});
  return signal;
}

}  // namespace predlab
