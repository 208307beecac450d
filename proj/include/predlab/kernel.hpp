#pragma once

#include <complex>
#include <vector>

#include "predlab/fourier.hpp"

namespace predlab {

/// One distinct denominator factor delta_m(p) = p - a + b*i raised to `multiplicity`.
/// Note the sign: the pole of 1/delta_m sits at p = a - b*i.
struct Pole {
  double a = 1.0;
  double b = 0.0;
  int multiplicity = 1;

  Complex location() const { return {a, -b}; }
};

struct ResidueTerm {
  Complex pole;
  int order = 1;
  Complex coefficient;
};

/// K(p) = sum coefficient / (p - pole)^order.
struct ResidueExpansion {
  std::vector<ResidueTerm> terms;

  Complex eval(Complex p) const;
};

/// Rational transfer function K = d/delta of an anticausal real kernel k (k(t) = 0 for t > 0).
/// Construct through build_kernel(); instances always satisfy the class constraints
/// a_m > 0, |b_m| < omega, deg d < deg delta, and a pole set closed under conjugation.
class RationalAnticausalKernel {
 public:
  const std::vector<Pole>& poles() const { return poles_; }
  /// Ascending-degree coefficients of d, trailing zeros removed.
  const std::vector<double>& numerator() const { return numerator_; }
  double omega() const { return omega_; }
  const ResidueExpansion& residues() const { return residues_; }

  int denominator_degree() const;
  int numerator_degree() const { return static_cast<int>(numerator_.size()) - 1; }
  /// deg delta - deg d; a zero numerator reports a large value.
  int relative_degree() const;
  double min_decay() const;
  double max_pole_modulus() const;
  bool is_zero() const { return numerator_.empty(); }

 private:
  friend RationalAnticausalKernel build_kernel(std::vector<Pole>, std::vector<double>, double);
  std::vector<Pole> poles_;
  std::vector<double> numerator_;
  double omega_ = 1.0;
  ResidueExpansion residues_;
};

/// Throws PoleOutOfRegion, DegreeViolation, NonConjugateSymmetric, NumericalDegeneracy or
/// InvalidArgument (non-finite input, omega <= 0, multiplicity < 1).
RationalAnticausalKernel build_kernel(std::vector<Pole> poles, std::vector<double> numerator, double omega);

/// Same kernel with the numerator multiplied by `factor`.
RationalAnticausalKernel scale_kernel(const RationalAnticausalKernel& kernel, double factor);

/// d(p)/delta(p) at an arbitrary complex point.
Complex eval_transfer_at(const RationalAnticausalKernel& kernel, Complex p);

/// K(i*omega_val) = d(i*omega_val)/delta(i*omega_val).
Complex eval_transfer(const RationalAnticausalKernel& kernel, double omega_val);

ResidueExpansion partial_fraction_expand(const RationalAnticausalKernel& kernel);

/// k(t): zero for t > 0, otherwise -sum coeff * t^(order-1)/(order-1)! * exp(pole*t), so that
/// int_{-inf}^0 exp(-i*omega*t) k(t) dt = K(i*omega).
double eval_time_kernel(const RationalAnticausalKernel& kernel, double t);

/// ||k||_{L2(R)} = sqrt((1/2pi) int |K(i*omega)|^2 domega), adaptive quadrature at 1e-8.
double kernel_l2_norm(const RationalAnticausalKernel& kernel);

}  // namespace predlab
