#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "predlab/fourier.hpp"
#include "predlab/kernel.hpp"
#include "predlab/predictor.hpp"
#include "predlab/signals.hpp"

namespace predlab {

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Target y, prediction y^ on one grid, and their error norms.
struct PredictionResult {
  SampledSignal y;
  SampledSignal yhat;
  double err_l2 = 0.0;
  double err_linf = 0.0;
  double gamma = 0.0;
  std::string kernel_id;
  /// NaN when the prediction used the whole past (spectral route).
  double horizon = std::numeric_limits<double>::quiet_NaN();
};

/// Trapezoid L2 and sup norms of yhat - y. Throws GridMismatch for differing grids.
ErrorNorms error_norms(const SampledSignal& y, const SampledSignal& yhat);

using SignalFunction = std::function<Complex(double)>;

/// y(t) = int_t^inf k(t-s) x(s) ds = int_0^U k(-u) x(t+u) du by adaptive quadrature, with U
/// chosen so the dropped kernel tail is below tol.
SampledSignal anticausal_convolve_oracle(const RationalAnticausalKernel& kernel, const SignalFunction& x,
                                         const TimeGrid& grid, double tol = 1e-8);

enum class ConvolutionRule { Trapezoid, LeftRectangle };

/// y^(t_n) = dt * sum_{j=0}^{L} w_j k^(j*dt) x(t_n - j*dt), L = round(M/dt), using only past
/// samples. The output covers the points of x with a full window of history. khat must share
/// dt with x and contain the lags 0..L. Throws InsufficientHistory or GridMismatch.
SampledSignal causal_convolve(const SampledSignal& khat, const SampledSignal& x, double horizon,
                              ConvolutionRule rule = ConvolutionRule::Trapezoid);

/// Y = K X and Y^ = V K X on the spectrum grid, y and y^ by inverse transform. Where X is exactly
/// zero Y^ is zero without evaluating V. Throws ClassMismatch if X has energy where V saturates.
PredictionResult spectral_predict(const SampledSpectrum& x, const RationalAnticausalKernel& kernel, double gamma,
                                  double t0);
PredictionResult spectral_predict(const SampledSpectrum& x, const RationalAnticausalKernel& kernel, double gamma);

/// Y, Y^ as frequency-domain arrays (no inverse transform); useful for Parseval checks.
std::pair<SampledSpectrum, SampledSpectrum> predicted_spectra(const SampledSpectrum& x,
                                                              const RationalAnticausalKernel& kernel, double gamma);

/// Atoms evaluated exactly, density terms by adaptive quadrature. Throws ClassMismatch when the
/// spectrum class disagrees with sign(gamma).
PredictionResult mixed_predict(const MixedSpectrum& ms, const RationalAnticausalKernel& kernel, double gamma,
                               const TimeGrid& grid);

/// Compact one-line description used as a kernel id in reports.
std::string kernel_id(const RationalAnticausalKernel& kernel);

}  // namespace predlab
