#pragma once

#include <complex>
#include <functional>

namespace predlab {

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (15-point) integration of a complex integrand over [a, b]; either
/// bound may be infinite. Throws QuadratureNotConverged when the error estimate exceeds
/// rel_tol relative to the integral of |f| (plus abs_floor).
QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                    double b, double rel_tol = 1e-10, double abs_floor = 0.0,
                                    unsigned max_depth = 15);

/// Real-valued convenience wrapper.
double integrate_real(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10,
                      double abs_floor = 0.0, unsigned max_depth = 15);

}  // namespace predlab
