#include "predlab/predictor.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "predlab/error.hpp"
#include "predlab/quadrature.hpp"

namespace predlab {
namespace {

constexpr double kSaturationExponent = 700.0;
constexpr double kTruncationLevel = 1e-10;

double wrap_phase(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

// |K| below the truncation level on both sides of the axis.
bool truncation_ok(const RationalAnticausalKernel& kernel, double w) {
  return std::abs(eval_transfer(kernel, w)) < kTruncationLevel &&
         std::abs(eval_transfer(kernel, -w)) < kTruncationLevel;
}

void append_trapezoid(DomainQuadrature& rule, const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = (i > 0) ? nodes[i] - nodes[i - 1] : 0.0;
    const double right = (i + 1 < n) ? nodes[i + 1] - nodes[i] : 0.0;
    rule.nodes.push_back(nodes[i]);
    rule.weights.push_back(0.5 * (left + right));
  }
}

std::vector<double> uniform_nodes(double lo, double hi, double h) {
  const auto segments = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / h)));
  std::vector<double> nodes(segments + 1);
  for (std::size_t i = 0; i <= segments; ++i) {
    nodes[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(segments);
  }
  nodes.back() = hi;
  return nodes;
}

double bounded_extent(const RationalAnticausalKernel& kernel, double lower) {
  return lower + 20.0 * (kernel.omega() + kernel.max_pole_modulus());
}

Complex v_at_infinity(const PredictorTransfer& predictor) {
  const Complex f = 1.0 - std::exp(Complex(predictor.gamma(), 0.0));
  Complex v{1.0, 0.0};
  for (const auto& pole : predictor.kernel().poles()) v *= std::pow(f, pole.multiplicity);
  return v;
}

double deviation_at(const PredictorTransfer& predictor, double w) {
  return std::abs(eval_V_minus_one(predictor, Complex(0.0, w)) * eval_transfer(predictor.kernel(), w));
}

}  // namespace

std::string_view to_string(TargetClass c) noexcept { return c == TargetClass::Low ? "LOW" : "HIGH"; }

TargetClass target_class_from_string(std::string_view s) {
  if (s == "LOW") return TargetClass::Low;
  if (s == "HIGH") return TargetClass::High;
  throw Error(ErrorCode::InvalidArgument, "class must be LOW or HIGH, got '" + std::string(s) + "'");
}

bool FrequencyDomain::contains(double w, double omega) const {
  if (kind == TargetClass::Low) return std::abs(w) <= omega - epsilon;
  return std::abs(w) >= omega + epsilon;
}

PredictorTransfer make_predictor(RationalAnticausalKernel kernel, double gamma, TargetClass declared) {
  if (!std::isfinite(gamma) || gamma == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be finite and nonzero");
  }
  const TargetClass implied = gamma > 0.0 ? TargetClass::Low : TargetClass::High;
  if (declared != implied) {
    std::ostringstream msg;
    msg << "gamma = " << gamma << " targets " << to_string(implied) << " inputs but " << to_string(declared)
        << " was declared";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  PredictorTransfer p;
  for (const auto& pole : kernel.poles()) p.alphas_.push_back(alpha_coefficient(pole.a, pole.b, kernel.omega()));
  p.kernel_ = std::move(kernel);
  p.gamma_ = gamma;
  p.target_ = declared;
  return p;
}

PredictorTransfer make_predictor(RationalAnticausalKernel kernel, double gamma) {
  return make_predictor(std::move(kernel), gamma, gamma > 0.0 ? TargetClass::Low : TargetClass::High);
}

double alpha_coefficient(double a, double b, double omega) {
  if (!(a > 0.0) || !(std::abs(b) < omega)) {
    std::ostringstream msg;
    msg << "alpha needs a > 0 and |b| < omega, got a=" << a << ", b=" << b << ", omega=" << omega;
    throw Error(ErrorCode::DomainError, msg.str());
  }
  return (omega * omega - b * b) / a;
}

double eval_phi_real(double a, double b, double omega, double omega_val) {
  const double alpha = alpha_coefficient(a, b, omega);
  const double shift = omega_val - b;
  return (omega_val * omega_val - omega * omega) / (shift * shift + alpha * alpha);
}

Complex mobius_exponent(double a, double b, double omega, Complex p) {
  const double alpha = alpha_coefficient(a, b, omega);
  return (p - a + Complex(0.0, b)) / (p + alpha - Complex(0.0, b));
}

CompensatorValue eval_V(const PredictorTransfer& predictor, Complex p) {
  const auto& poles = predictor.kernel().poles();
  CompensatorValue out;
  Complex product{1.0, 0.0};
  for (std::size_t m = 0; m < poles.size(); ++m) {
    const Complex phi = (p - poles[m].a + Complex(0.0, poles[m].b)) /
                        (p + predictor.alphas()[m] - Complex(0.0, poles[m].b));
    const Complex z = predictor.gamma() * phi;
    const double r = poles[m].multiplicity;
    double log_abs = 0.0;
    double phase = 0.0;
    if (z.real() > kSaturationExponent) {
      // 1 - e^z = -e^z (1 - e^-z)
      const Complex rest = 1.0 - std::exp(-z);
      log_abs = z.real() + std::log(std::abs(rest));
      phase = z.imag() + std::numbers::pi + std::arg(rest);
      out.saturated = true;
    } else {
      const Complex f = 1.0 - std::exp(z);
      log_abs = std::log(std::abs(f));
      phase = std::arg(f);
      product *= std::pow(f, poles[m].multiplicity);
    }
    out.log_abs += r * log_abs;
    out.phase += r * phase;
  }
  out.phase = wrap_phase(out.phase);
  if (!out.saturated && out.log_abs > kSaturationExponent) out.saturated = true;
  if (out.saturated) {
    out.value = Complex(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
  } else {
    out.value = product;
  }
  return out;
}

Complex eval_V_minus_one(const PredictorTransfer& predictor, Complex p) {
  const auto& poles = predictor.kernel().poles();
  Complex d{};
  for (std::size_t m = 0; m < poles.size(); ++m) {
    const Complex phi = (p - poles[m].a + Complex(0.0, poles[m].b)) /
                        (p + predictor.alphas()[m] - Complex(0.0, poles[m].b));
    const Complex z = predictor.gamma() * phi;
    if (z.real() > kSaturationExponent) {
      std::ostringstream msg;
      msg << "V overflows at p=" << p << " (gamma*Re phi = " << z.real() << ")";
      throw Error(ErrorCode::Saturated, msg.str());
    }
    const Complex e = std::exp(z);
    // prod (1 - e_m) - 1 accumulated as d <- d - e - d*e
    for (int k = 0; k < poles[m].multiplicity; ++k) d = d - e - d * e;
  }
  if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) {
    throw Error(ErrorCode::Saturated, "V - 1 is not representable");
  }
  return d;
}

CompensatorValue eval_predictor_transfer(const PredictorTransfer& predictor, double omega_val) {
  CompensatorValue v = eval_V(predictor, Complex(0.0, omega_val));
  const Complex k = eval_transfer(predictor.kernel(), omega_val);
  v.log_abs += std::log(std::abs(k));
  v.phase = wrap_phase(v.phase + std::arg(k));
  if (!v.saturated) v.value *= k;
  return v;
}

DomainQuadrature domain_quadrature(const RationalAnticausalKernel& kernel, const FrequencyDomain& domain,
                                   const GridSpec& grid) {
  const double omega = kernel.omega();
  if (!(domain.epsilon >= 0.0) || !(domain.epsilon < omega)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0, omega)");
  }
  const double h = grid.spacing > 0.0 ? grid.spacing : kernel.min_decay() / 50.0;
  DomainQuadrature rule;
  if (domain.kind == TargetClass::Low) {
    append_trapezoid(rule, uniform_nodes(-omega + domain.epsilon, omega - domain.epsilon, h));
    return rule;
  }

  const double lower = omega + domain.epsilon;
  double omega_max = grid.omega_max;
  if (omega_max > 0.0) {
    if (omega_max <= lower) throw Error(ErrorCode::InvalidArgument, "omega_max must exceed the band edge");
    if (!kernel.is_zero() && !truncation_ok(kernel, omega_max)) {
      std::ostringstream msg;
      msg << "|K| at omega_max=" << omega_max << " is " << std::abs(eval_transfer(kernel, omega_max))
          << ", not below " << kTruncationLevel;
      throw Error(ErrorCode::TruncationNotJustified, msg.str());
    }
  } else {
    omega_max = bounded_extent(kernel, lower);
    for (int i = 0; i < 400 && !kernel.is_zero() && !truncation_ok(kernel, omega_max); ++i) omega_max *= 2.0;
  }
  const double bounded = std::min(omega_max, bounded_extent(kernel, lower));
  std::vector<double> positive = uniform_nodes(lower, bounded, h);
  if (omega_max > bounded) {
    const double ratio = 1.01;
    double w = bounded;
    while (w * ratio < omega_max) {
      w *= ratio;
      positive.push_back(w);
    }
    positive.push_back(omega_max);
  }
  std::vector<double> negative(positive.rbegin(), positive.rend());
  for (double& w : negative) w = -w;
  append_trapezoid(rule, negative);
  append_trapezoid(rule, positive);
  return rule;
}

double weighted_lp_norm(std::span<const double> values, std::span<const double> weights, double mu) {
  if (values.size() != weights.size()) throw Error(ErrorCode::InvalidArgument, "values/weights size mismatch");
  if (!(mu >= 1.0)) throw Error(ErrorCode::InvalidArgument, "norm exponent must be >= 1");
  if (std::isinf(mu)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * std::pow(std::abs(values[i]), mu);
  return std::pow(acc, 1.0 / mu);
}

double deviation_norm(const PredictorTransfer& predictor, const DomainQuadrature& rule, double mu) {
  std::vector<double> values(rule.nodes.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = deviation_at(predictor, rule.nodes[i]);
  return weighted_lp_norm(values, rule.weights, mu);
}

double deviation_norm(const PredictorTransfer& predictor, const FrequencyDomain& domain, double mu,
                      const GridSpec& grid) {
  if (!(mu >= 1.0)) throw Error(ErrorCode::InvalidArgument, "norm exponent must be >= 1");
  const auto& kernel = predictor.kernel();
  if (kernel.is_zero()) return 0.0;
  if (domain.kind == TargetClass::High && std::isfinite(mu) &&
      mu * static_cast<double>(kernel.relative_degree()) <= 1.0 && std::abs(v_at_infinity(predictor) - 1.0) > 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const DomainQuadrature rule = domain_quadrature(kernel, domain, grid);
  std::vector<double> values(rule.nodes.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = deviation_at(predictor, rule.nodes[i]);
  if (std::isfinite(mu)) return weighted_lp_norm(values, rule.weights, mu);

  // Grid sup, then a bracketed maximisation around the largest local maxima.
  double best = 0.0;
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    best = std::max(best, values[i]);
    const bool left_ok = i == 0 || values[i] >= values[i - 1];
    const bool right_ok = i + 1 == values.size() || values[i] >= values[i + 1];
    if (left_ok && right_ok) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
  if (peaks.size() > 8) peaks.resize(8);
  for (std::size_t i : peaks) {
    // only brackets that stay inside the domain (the HIGH half-lines are separated by a gap)
    auto inside = [&](std::size_t x, std::size_t y) {
      return domain.contains(0.5 * (rule.nodes[x] + rule.nodes[y]), kernel.omega());
    };
    const bool has_left = i > 0 && inside(i - 1, i);
    const bool has_right = i + 1 < values.size() && inside(i, i + 1);
    const double lo = has_left ? rule.nodes[i - 1] : rule.nodes[i];
    const double hi = has_right ? rule.nodes[i + 1] : rule.nodes[i];
    if (!(hi > lo)) continue;
    auto neg = [&](double w) { return -deviation_at(predictor, w); };
    const auto found = boost::math::tools::brent_find_minima(neg, lo, hi, 40);
    best = std::max(best, -found.second);
  }
  return best;
}

HardyReport hardy_boundary_check(const PredictorTransfer& predictor, std::span<const double> s_levels,
                                 const GridSpec& grid) {
  const auto& kernel = predictor.kernel();
  const double h = grid.spacing > 0.0 ? grid.spacing : kernel.min_decay() / 50.0;
  double alpha_max = 0.0;
  for (double a : predictor.alphas()) alpha_max = std::max(alpha_max, a);
  const double width = 20.0 * (kernel.omega() + kernel.max_pole_modulus() + alpha_max);
  const std::vector<double> nodes = uniform_nodes(-width, width, h);
  const double v_inf = std::abs(v_at_infinity(predictor));

  HardyReport report;
  double max_a = 0.0;
  for (const auto& pole : kernel.poles()) max_a = std::max(max_a, pole.a);

  std::vector<double> levels(s_levels.begin(), s_levels.end());
  std::sort(levels.begin(), levels.end());
  for (double s : levels) {
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "s levels must be finite and positive");
    HardyLine line;
    line.s = s;
    line.v_asymptote = v_inf;
    line.sup_v = v_inf;
    for (double w : nodes) {
      const Complex p(s, w);
      const CompensatorValue v = eval_V(predictor, p);
      if (v.saturated) {
        line.saturated = true;
        break;
      }
      line.sup_v = std::max(line.sup_v, std::abs(v.value));
      line.sup_khat = std::max(line.sup_khat, std::abs(v.value * eval_transfer_at(kernel, p)));
    }
    if (!line.saturated) {
      auto f = [&](double w) {
        const Complex p(s, w);
        const CompensatorValue v = eval_V(predictor, p);
        if (v.saturated) throw Error(ErrorCode::Saturated, "V overflows on the vertical line");
        return Complex(std::norm(v.value * eval_transfer_at(kernel, p)), 0.0);
      };
      const double inf = std::numeric_limits<double>::infinity();
      try {
        double total = integrate_adaptive(f, -inf, -width, 1e-8).value.real();
        for (int panel = 0; panel < 16; ++panel) {
          const double lo = -width + panel * (width / 8.0);
          const double hi = panel == 15 ? width : lo + width / 8.0;
          total += integrate_adaptive(f, lo, hi, 1e-8).value.real();
        }
        total += integrate_adaptive(f, width, inf, 1e-8).value.real();
        line.khat_l2 = std::sqrt(total);
      } catch (const Error&) {
        line.saturated = true;
      }
    }
    if (line.saturated || !std::isfinite(line.sup_v) || !std::isfinite(line.khat_l2)) report.finite = false;
    if (!report.lines.empty()) {
      const HardyLine& prev = report.lines.back();
      if (prev.s > max_a && !line.saturated && !prev.saturated && line.sup_v > prev.sup_v * (1.0 + 1e-6)) {
        report.sup_nonincreasing = false;
      }
    }
    report.lines.push_back(line);
  }
  return report;
}

}  // namespace predlab
