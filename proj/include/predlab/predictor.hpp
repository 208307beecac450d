#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "predlab/fourier.hpp"
#include "predlab/kernel.hpp"

namespace predlab {

/// Input class a predictor is tuned for: LOW (band-limited, gamma > 0) or HIGH
/// (high-frequency, gamma < 0).
enum class TargetClass { Low, High };

std::string_view to_string(TargetClass c) noexcept;
TargetClass target_class_from_string(std::string_view s);

/// D = [-omega, omega] (LOW) or |w| >= omega (HIGH) when epsilon = 0; with epsilon > 0 the
/// domain keeps a gap of epsilon from the band edge.
struct FrequencyDomain {
  TargetClass kind = TargetClass::Low;
  double epsilon = 0.0;

  bool contains(double w, double omega) const;
};

/// The compensated predictor K^ = V*K with V(p) = prod_m (1 - exp(gamma*phi_m(p)))^(mult_m),
/// phi_m(p) = (p - a_m + b_m*i)/(p + alpha_m - b_m*i). Immutable once built.
class PredictorTransfer {
 public:
  const RationalAnticausalKernel& kernel() const { return kernel_; }
  double gamma() const { return gamma_; }
  const std::vector<double>& alphas() const { return alphas_; }
  TargetClass target() const { return target_; }

 private:
  friend PredictorTransfer make_predictor(RationalAnticausalKernel, double, TargetClass);
  RationalAnticausalKernel kernel_;
  double gamma_ = 1.0;
  std::vector<double> alphas_;
  TargetClass target_ = TargetClass::Low;
};

/// Rejects gamma == 0 and a declared class that disagrees with sign(gamma) (InvalidArgument).
PredictorTransfer make_predictor(RationalAnticausalKernel kernel, double gamma, TargetClass declared);
/// Declares the class implied by sign(gamma).
PredictorTransfer make_predictor(RationalAnticausalKernel kernel, double gamma);

/// (omega^2 - b^2)/a; DomainError unless a > 0 and |b| < omega.
double alpha_coefficient(double a, double b, double omega);

/// Re phi(i*omega_val) in the closed form (omega_val^2 - omega^2)/((omega_val - b)^2 + alpha^2).
double eval_phi_real(double a, double b, double omega, double omega_val);

/// phi(p) = (p - a + b*i)/(p + alpha - b*i) by complex arithmetic.
Complex mobius_exponent(double a, double b, double omega, Complex p);

/// Value of V (or K^) that may exceed double range. When `saturated` is set, `value` is NaN
/// and the magnitude is carried as log_abs plus phase.
struct CompensatorValue {
  Complex value;
  double log_abs = 0.0;
  double phase = 0.0;
  bool saturated = false;
};

CompensatorValue eval_V(const PredictorTransfer& predictor, Complex p);

/// V(p) - 1 without cancellation. Throws Saturated when V is out of range.
Complex eval_V_minus_one(const PredictorTransfer& predictor, Complex p);

/// K^(i*omega_val) = V(i*omega_val)*K(i*omega_val).
CompensatorValue eval_predictor_transfer(const PredictorTransfer& predictor, double omega_val);

/// Frequency sampling for norms over a domain. Zero fields select defaults: spacing
/// min(a_m)/50; omega_max the first doubling of the bounded part where |K| < 1e-10.
struct GridSpec {
  double spacing = 0.0;
  double omega_max = 0.0;
};

/// Nodes and positive weights of a composite rule over a frequency set.
struct DomainQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite trapezoid rule over `domain`: uniform on the bounded part, log-spaced tail
/// for HIGH domains. Throws TruncationNotJustified if an explicit omega_max leaves |K| >= 1e-10.
DomainQuadrature domain_quadrature(const RationalAnticausalKernel& kernel, const FrequencyDomain& domain,
                                   const GridSpec& grid);

/// (sum w |f|^mu)^(1/mu), or max |f| for mu = inf.
double weighted_lp_norm(std::span<const double> values, std::span<const double> weights, double mu);

/// ||K^ - K||_{L_mu(domain)}; mu = inf gives the sup, refined around grid maxima. Returns
/// +inf when the HIGH-domain tail is not mu-integrable (mu * relative degree <= 1).
double deviation_norm(const PredictorTransfer& predictor, const FrequencyDomain& domain, double mu,
                      const GridSpec& grid = {});

/// Same norm with a caller-supplied rule (e.g. the nodes of a signal grid).
double deviation_norm(const PredictorTransfer& predictor, const DomainQuadrature& rule, double mu);

/// Time-domain samples of k^ = F^{-1} K^ on a centred grid.
struct TimePredictor {
  SampledSignal samples;
  /// energy on t < 0 over total energy of the samples
  double leakage = 0.0;
  /// K^(p) = sum_j tail[j-1] * (shift/(p+shift))^j + remainder; the first terms are
  /// inverted in closed form, the remainder by FFT.
  double shift = 1.0;
  std::vector<Complex> tail;
};

/// Throws SaturatedSpectrum when V overflows on the grid, SpectrumNotDecayed when the FFT
/// remainder at the grid ends is not below 1e-8 times max(1, max |K^|).
TimePredictor synthesize_time_predictor(const PredictorTransfer& predictor, const TimeGrid& grid);

struct HardyLine {
  double s = 0.0;
  double sup_v = 0.0;
  double sup_khat = 0.0;
  double khat_l2 = 0.0;
  /// |V| as |w| -> inf on the line; V itself is square integrable only if this is zero.
  double v_asymptote = 0.0;
  bool saturated = false;
};

struct HardyReport {
  std::vector<HardyLine> lines;
  bool finite = true;
  bool sup_nonincreasing = true;
  bool ok() const { return finite && sup_nonincreasing; }
};

/// Samples V and K^ on vertical lines Re p = s.
HardyReport hardy_boundary_check(const PredictorTransfer& predictor, std::span<const double> s_levels,
                                 const GridSpec& grid = {});

}  // namespace predlab
