#include "predlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "predlab/error.hpp"
#include "predlab/quadrature.hpp"

namespace predlab {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Complex horner(const std::vector<double>& coeffs, Complex p) {
  Complex acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * p + *it;
  return acc;
}

// Truncated series product, both inputs of length n.
std::vector<Complex> series_mul(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n, Complex{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += x[i] * y[j];
  }
  return out;
}

ResidueExpansion expand(const std::vector<Pole>& poles, const std::vector<double>& numerator) {
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      if (std::abs(poles[i].location() - poles[j].location()) < 1e-12) {
        std::ostringstream msg;
        msg << "poles " << i << " and " << j << " coincide at " << poles[i].location()
            << "; merge them into one entry with a multiplicity";
        throw Error(ErrorCode::NumericalDegeneracy, msg.str());
      }
    }
  }

  ResidueExpansion out;
  for (std::size_t m = 0; m < poles.size(); ++m) {
    const Complex lambda = poles[m].location();
    const int r = poles[m].multiplicity;
    const std::size_t len = static_cast<std::size_t>(r);

    // Taylor coefficients of d(lambda + z).
    std::vector<Complex> g(len, Complex{});
    for (std::size_t q = 0; q < len; ++q) {
      for (std::size_t k = q; k < numerator.size(); ++k) {
        g[q] += numerator[k] * binomial(static_cast<int>(k), static_cast<int>(q)) *
                std::pow(lambda, static_cast<int>(k - q));
      }
    }
    // Times prod over other poles of (lambda - lambda_o + z)^(-r_o).
    for (std::size_t o = 0; o < poles.size(); ++o) {
      if (o == m) continue;
      const Complex c = lambda - poles[o].location();
      const int ro = poles[o].multiplicity;
      std::vector<Complex> s(len);
      for (std::size_t q = 0; q < len; ++q) {
        const double sign = (q % 2 == 0) ? 1.0 : -1.0;
        s[q] = sign * binomial(ro + static_cast<int>(q) - 1, static_cast<int>(q)) *
               std::pow(c, -(ro + static_cast<int>(q)));
      }
      g = series_mul(g, s);
    }
    for (int order = r; order >= 1; --order) {
      out.terms.push_back({lambda, order, g[static_cast<std::size_t>(r - order)]});
    }
  }
  return out;
}

}  // namespace

Complex ResidueExpansion::eval(Complex p) const {
  Complex acc{};
  for (const auto& term : terms) acc += term.coefficient / std::pow(p - term.pole, term.order);
  return acc;
}

int RationalAnticausalKernel::denominator_degree() const {
  int deg = 0;
  for (const auto& pole : poles_) deg += pole.multiplicity;
  return deg;
}

int RationalAnticausalKernel::relative_degree() const {
  if (numerator_.empty()) return std::numeric_limits<int>::max() / 2;
  return denominator_degree() - numerator_degree();
}

double RationalAnticausalKernel::min_decay() const {
  double a = std::numeric_limits<double>::infinity();
  for (const auto& pole : poles_) a = std::min(a, pole.a);
  return a;
}

double RationalAnticausalKernel::max_pole_modulus() const {
  double r = 0.0;
  for (const auto& pole : poles_) r = std::max(r, std::abs(pole.location()));
  return r;
}

RationalAnticausalKernel build_kernel(std::vector<Pole> poles, std::vector<double> numerator, double omega) {
  if (!std::isfinite(omega) || !(omega > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "band constant omega must be finite and positive");
  }
  if (poles.empty()) throw Error(ErrorCode::DegreeViolation, "a kernel needs at least one pole");
  for (double c : numerator) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "numerator coefficients must be finite");
  }
  for (const auto& pole : poles) {
    if (!std::isfinite(pole.a) || !std::isfinite(pole.b)) {
      throw Error(ErrorCode::InvalidArgument, "pole coordinates must be finite");
    }
    if (pole.multiplicity < 1) throw Error(ErrorCode::InvalidArgument, "pole multiplicity must be >= 1");
    if (!(pole.a > 0.0) || !(std::abs(pole.b) < omega)) {
      std::ostringstream msg;
      msg << "pole (a=" << pole.a << ", b=" << pole.b << ") violates a > 0, |b| < " << omega;
      throw Error(ErrorCode::PoleOutOfRegion, msg.str());
    }
  }
  while (!numerator.empty() && numerator.back() == 0.0) numerator.pop_back();

  RationalAnticausalKernel k;
  k.omega_ = omega;
  k.poles_ = std::move(poles);
  k.numerator_ = std::move(numerator);
  if (k.numerator_degree() >= k.denominator_degree()) {
    std::ostringstream msg;
    msg << "deg d = " << k.numerator_degree() << " must be below deg delta = " << k.denominator_degree();
    throw Error(ErrorCode::DegreeViolation, msg.str());
  }
  for (const auto& pole : k.poles_) {
    if (pole.b == 0.0) continue;
    const bool paired = std::any_of(k.poles_.begin(), k.poles_.end(), [&](const Pole& q) {
      return std::abs(q.a - pole.a) <= 1e-12 && std::abs(q.b + pole.b) <= 1e-12 &&
             q.multiplicity == pole.multiplicity;
    });
    if (!paired) {
      std::ostringstream msg;
      msg << "pole (a=" << pole.a << ", b=" << pole.b << ", mult=" << pole.multiplicity
          << ") has no conjugate mate";
      throw Error(ErrorCode::NonConjugateSymmetric, msg.str());
    }
  }
  k.residues_ = expand(k.poles_, k.numerator_);
  return k;
}

RationalAnticausalKernel scale_kernel(const RationalAnticausalKernel& kernel, double factor) {
  std::vector<double> num = kernel.numerator();
  for (double& c : num) c *= factor;
  return build_kernel(kernel.poles(), std::move(num), kernel.omega());
}

Complex eval_transfer_at(const RationalAnticausalKernel& kernel, Complex p) {
  Complex den{1.0, 0.0};
  for (const auto& pole : kernel.poles()) den *= std::pow(p - pole.location(), pole.multiplicity);
  return horner(kernel.numerator(), p) / den;
}

Complex eval_transfer(const RationalAnticausalKernel& kernel, double omega_val) {
  return eval_transfer_at(kernel, Complex{0.0, omega_val});
}

ResidueExpansion partial_fraction_expand(const RationalAnticausalKernel& kernel) {
  return expand(kernel.poles(), kernel.numerator());
}

double eval_time_kernel(const RationalAnticausalKernel& kernel, double t) {
  if (t > 0.0) return 0.0;
  Complex acc{};
  double magnitude = 0.0;
  for (const auto& term : kernel.residues().terms) {
    double factorial = 1.0;
    for (int i = 2; i < term.order; ++i) factorial *= i;
    const Complex v = -term.coefficient * std::pow(t, term.order - 1) / factorial * std::exp(term.pole * t);
    acc += v;
    magnitude += std::abs(v);
  }
  if (std::abs(acc.imag()) > 1e-10 * magnitude + std::numeric_limits<double>::min()) {
    std::ostringstream msg;
    msg << "time kernel at t=" << t << " has imaginary part " << acc.imag();
    throw Error(ErrorCode::NonConjugateSymmetric, msg.str());
  }
  return acc.real();
}

double kernel_l2_norm(const RationalAnticausalKernel& kernel) {
  if (kernel.is_zero()) return 0.0;
  auto f = [&](double w) { return Complex(std::norm(eval_transfer(kernel, w)), 0.0); };
  std::vector<double> cuts;
  double width = 0.0;
  for (const auto& pole : kernel.poles()) {
    cuts.push_back(-pole.b);
    width = std::max(width, std::abs(pole.b) + 4.0 * pole.a);
  }
  cuts.push_back(-width);
  cuts.push_back(width);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  constexpr double tol = 1e-8;
  const double inf = std::numeric_limits<double>::infinity();
  double total = integrate_adaptive(f, -inf, cuts.front(), tol * 1e-2).value.real();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_adaptive(f, cuts[i], cuts[i + 1], tol * 1e-2).value.real();
  }
  total += integrate_adaptive(f, cuts.back(), inf, tol * 1e-2).value.real();
  return std::sqrt(total / (2.0 * std::numbers::pi));
}

}  // namespace predlab
