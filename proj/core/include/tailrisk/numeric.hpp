#pragma once

#include <functional>

namespace tailrisk::numeric {

/// Adaptive Gauss-Kronrod quadrature; infinite limits are allowed.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13);

/// Bisection for an increasing function on [lo, hi] with f(lo) <= target <= f(hi).
/// Stops when the bracket is below abs_tol (or relative 1e-15).
double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double abs_tol = 1e-12);

/// Golden-section maximization of a unimodal function on [lo, hi].
struct Maximum {
  double x;
  double value;
};
Maximum golden_max(const std::function<double(double)>& f, double lo, double hi,
                   double x_tol = 1e-10, int max_iter = 200);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b) noexcept;

}  // namespace tailrisk::numeric
