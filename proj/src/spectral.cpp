#include "predlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "predlab/error.hpp"
#include "predlab/quadrature.hpp"

namespace predlab {
namespace {

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// int_U^inf u^(r-1)/(r-1)! exp(-a u) du
double gamma_tail(int r, double a, double u) {
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < r; ++j) {
    term *= a * u / j;
    sum += term;
  }
  return std::exp(-a * u) * sum / std::pow(a, r);
}

}  // namespace

ErrorNorms error_norms(const SampledSignal& y, const SampledSignal& yhat) {
  if (y.values.size() != yhat.values.size() || !same_step(y.dt, yhat.dt) ||
      std::abs(y.t0 - yhat.t0) > 1e-12 * std::max(1.0, std::abs(y.t0))) {
    throw Error(ErrorCode::GridMismatch, "error norms need signals on one grid");
  }
  ErrorNorms out;
  const std::size_t n = y.values.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::norm(yhat.values[i] - y.values[i]);
    acc += (i == 0 || i + 1 == n) ? 0.5 * e : e;
    out.linf = std::max(out.linf, std::sqrt(e));
  }
  out.l2 = n > 1 ? std::sqrt(acc * y.dt) : 0.0;
  return out;
}

SampledSignal anticausal_convolve_oracle(const RationalAnticausalKernel& kernel, const SignalFunction& x,
                                         const TimeGrid& grid, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const auto& terms = kernel.residues().terms;
  double mass = 0.0;
  for (const auto& term : terms) mass += std::abs(term.coefficient) / std::pow(term.pole.real(), term.order);
  const double a_min = kernel.min_decay();
  double upper = 1.0 / a_min;
  auto tail = [&](double u) {
    double t = 0.0;
    for (const auto& term : terms) t += std::abs(term.coefficient) * gamma_tail(term.order, term.pole.real(), u);
    return t;
  };
  while (mass > 0.0 && tail(upper) > tol * mass) upper += 1.0 / a_min;

  const double panel = 0.5 / a_min;
  const auto panels = static_cast<std::size_t>(std::ceil(upper / panel));
  SampledSignal out;
  out.t0 = grid.t0;
  out.dt = grid.dt;
  out.values.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.at(i);
    auto integrand = [&](double u) { return eval_time_kernel(kernel, -u) * x(t + u); };
    Complex acc{};
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = static_cast<double>(p) * panel;
      const double hi = std::min(upper, lo + panel);
      acc += integrate_adaptive(integrand, lo, hi, tol * 1e-2, 1e-300, 25).value;
    }
    out.values[i] = acc;
  }
  return out;
}

SampledSignal causal_convolve(const SampledSignal& khat, const SampledSignal& x, double horizon,
                              ConvolutionRule rule) {
  if (!same_step(khat.dt, x.dt)) throw Error(ErrorCode::GridMismatch, "kernel and signal must share dt");
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  const double dt = x.dt;
  const double zero_index = -khat.t0 / dt;
  const auto j0 = static_cast<long long>(std::llround(zero_index));
  if (j0 < 0 || std::abs(zero_index - static_cast<double>(j0)) > 1e-9) {
    throw Error(ErrorCode::GridMismatch, "kernel grid must contain t = 0");
  }
  const auto lags = static_cast<std::size_t>(std::llround(horizon / dt));
  if (static_cast<std::size_t>(j0) + lags >= khat.values.size()) {
    throw Error(ErrorCode::InsufficientHistory, "kernel samples do not cover the horizon");
  }
  if (lags >= x.values.size()) {
    std::ostringstream msg;
    msg << "horizon " << horizon << " needs " << lags + 1 << " samples of history, have " << x.values.size();
    throw Error(ErrorCode::InsufficientHistory, msg.str());
  }
  std::vector<double> weights(lags + 1, 1.0);
  if (rule == ConvolutionRule::Trapezoid) {
    weights.front() = 0.5;
    weights.back() = 0.5;
  } else {
    weights.back() = 0.0;
  }
  SampledSignal out;
  out.dt = dt;
  out.t0 = x.time(lags);
  out.values.resize(x.values.size() - lags);
  const Complex* k0 = khat.values.data() + j0;
  for (std::size_t n = lags; n < x.values.size(); ++n) {
    Complex acc{};
    for (std::size_t j = 0; j <= lags; ++j) acc += weights[j] * k0[j] * x.values[n - j];
    out.values[n - lags] = acc * dt;
  }
  return out;
}

std::pair<SampledSpectrum, SampledSpectrum> predicted_spectra(const SampledSpectrum& x,
                                                              const RationalAnticausalKernel& kernel, double gamma) {
  const PredictorTransfer predictor = make_predictor(kernel, gamma);
  SampledSpectrum y = x;
  SampledSpectrum yhat = x;
  for (std::size_t k = 0; k < x.values.size(); ++k) {
    const Complex xv = x.values[k];
    if (xv == Complex{}) {
      y.values[k] = Complex{};
      yhat.values[k] = Complex{};
      continue;
    }
    const double w = x.frequency(k);
    const Complex kv = eval_transfer(kernel, w);
    const CompensatorValue v = eval_V(predictor, Complex(0.0, w));
    if (v.saturated) {
      std::ostringstream msg;
      msg << "input has energy at omega=" << w << " where the gamma=" << gamma << " predictor saturates";
      throw Error(ErrorCode::ClassMismatch, msg.str());
    }
    y.values[k] = kv * xv;
    yhat.values[k] = v.value * kv * xv;
  }
  return {std::move(y), std::move(yhat)};
}

PredictionResult spectral_predict(const SampledSpectrum& x, const RationalAnticausalKernel& kernel, double gamma,
                                  double t0) {
  auto [y, yhat] = predicted_spectra(x, kernel, gamma);
  PredictionResult out;
  out.y = fourier_inverse(y, t0);
  out.yhat = fourier_inverse(yhat, t0);
  const ErrorNorms norms = error_norms(out.y, out.yhat);
  out.err_l2 = norms.l2;
  out.err_linf = norms.linf;
  out.gamma = gamma;
  out.kernel_id = kernel_id(kernel);
  return out;
}

PredictionResult spectral_predict(const SampledSpectrum& x, const RationalAnticausalKernel& kernel, double gamma) {
  const std::size_t n = x.values.size();
  const double dt = 2.0 * std::numbers::pi / (static_cast<double>(n) * x.domega);
  return spectral_predict(x, kernel, gamma, -static_cast<double>(n / 2) * dt);
}

PredictionResult mixed_predict(const MixedSpectrum& ms, const RationalAnticausalKernel& kernel, double gamma,
                               const TimeGrid& grid) {
  const TargetClass implied = gamma > 0.0 ? TargetClass::Low : TargetClass::High;
  if (gamma == 0.0 || ms.class_tag() != implied) {
    std::ostringstream msg;
    msg << "a " << to_string(ms.class_tag()) << " spectrum cannot be predicted with gamma=" << gamma;
    throw Error(ErrorCode::ClassMismatch, msg.str());
  }
  const PredictorTransfer predictor = make_predictor(kernel, gamma);
  auto khat = [&](double w) {
    const CompensatorValue v = eval_predictor_transfer(predictor, w);
    if (v.saturated) throw Error(ErrorCode::ClassMismatch, "predictor saturates inside the spectrum support");
    return v.value;
  };

  std::vector<Complex> atom_k;
  std::vector<Complex> atom_khat;
  for (const Atom& atom : ms.atoms()) {
    atom_k.push_back(eval_transfer(kernel, atom.omega) * atom.c);
    atom_khat.push_back(khat(atom.omega) * atom.c);
  }

  PredictionResult out;
  out.y = {grid.t0, grid.dt, std::vector<Complex>(grid.n)};
  out.yhat = out.y;
  const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.at(i);
    Complex y{};
    Complex yh{};
    for (std::size_t k = 0; k < ms.atoms().size(); ++k) {
      const Complex tone = std::exp(Complex(0.0, ms.atoms()[k].omega * t));
      y += atom_k[k] * tone;
      yh += atom_khat[k] * tone;
    }
    if (!ms.density().empty()) {
      y += ms.integrate_density([&](double w) { return std::exp(Complex(0.0, w * t)) * eval_transfer(kernel, w); });
      yh += ms.integrate_density([&](double w) { return std::exp(Complex(0.0, w * t)) * khat(w); });
    }
    out.y.values[i] = y * inv2pi;
    out.yhat.values[i] = yh * inv2pi;
  }
  const ErrorNorms norms = error_norms(out.y, out.yhat);
  out.err_l2 = norms.l2;
  out.err_linf = norms.linf;
  out.gamma = gamma;
  out.kernel_id = kernel_id(kernel);
  return out;
}

std::string kernel_id(const RationalAnticausalKernel& kernel) {
  std::ostringstream s;
  s.precision(17);
  s << "omega=" << kernel.omega() << ";poles=";
  for (std::size_t i = 0; i < kernel.poles().size(); ++i) {
    const Pole& p = kernel.poles()[i];
    s << (i ? "," : "") << "(" << p.a << "," << p.b << "," << p.multiplicity << ")";
  }
  s << ";num=[";
  for (std::size_t i = 0; i < kernel.numerator().size(); ++i) s << (i ? "," : "") << kernel.numerator()[i];
  s << "]";
  return s.str();
}

}  // namespace predlab
