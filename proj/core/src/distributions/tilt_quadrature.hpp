#pragma once

#include "tailrisk/distributions/distribution.hpp"

namespace tailrisk::detail {

/// Moments of the density proportional to exp(θx) f(x) on x <= upper, where f
/// is base.pdf. log_mass is log ∫_{x<=upper} exp(θx) f(x) dx.
struct QuadratureMoments {
  double log_mass;
  double mean;
  double variance;
};

QuadratureMoments tilted_moments(const Distribution& base, double theta, double upper);

/// Finite integration window [lo, hi] outside which exp(θx) f(x) is below
/// exp(-60) relative to its peak (clipped to the support and to upper).
struct Window {
  double lo;
  double hi;
  double log_peak;
};
Window tilted_window(const Distribution& base, double theta, double upper);

}  // namespace tailrisk::detail
