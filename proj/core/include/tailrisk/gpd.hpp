#pragma once

#include <cmath>
#include <limits>

namespace tailrisk {

/// Two-parameter generalized Pareto law for threshold excesses y >= 0:
/// sf(y) = (1 + ξy/σ)^(-1/ξ), with the exponential limit exp(-y/σ) at ξ = 0.
/// For ξ < 0 the support ends at -σ/ξ.
struct GpdParams {
  double shape;  // ξ
  double scale;  // σ > 0
};

inline constexpr double kGpdShapeZero = 1e-12;

inline double gpd_upper_endpoint(const GpdParams& g) noexcept {
  return g.shape < 0.0 ? -g.scale / g.shape : std::numeric_limits<double>::infinity();
}

inline double gpd_sf(const GpdParams& g, double y) noexcept {
  if (y <= 0.0) return 1.0;
  if (y >= gpd_upper_endpoint(g)) return 0.0;
  const double z = y / g.scale;
  if (std::abs(g.shape) < kGpdShapeZero) return std::exp(-z);
  return std::exp(-std::log1p(g.shape * z) / g.shape);
}

inline double gpd_cdf(const GpdParams& g, double y) noexcept {
  if (y <= 0.0) return 0.0;
  if (y >= gpd_upper_endpoint(g)) return 1.0;
  const double z = y / g.scale;
  if (std::abs(g.shape) < kGpdShapeZero) return -std::expm1(-z);
  return -std::expm1(-std::log1p(g.shape * z) / g.shape);
}

/// Log density; -inf outside the support.
inline double gpd_log_pdf(const GpdParams& g, double y) noexcept {
  if (y < 0.0 || y >= gpd_upper_endpoint(g)) return -std::numeric_limits<double>::infinity();
  const double z = y / g.scale;
  if (std::abs(g.shape) < kGpdShapeZero) return -std::log(g.scale) - z;
  return -std::log(g.scale) - (1.0 + 1.0 / g.shape) * std::log1p(g.shape * z);
}

/// y with sf(y) = p.
inline double gpd_isf(const GpdParams& g, double p) noexcept {
  if (std::abs(g.shape) < kGpdShapeZero) return -g.scale * std::log(p);
  return g.scale * std::expm1(-g.shape * std::log(p)) / g.shape;
}

}  // namespace tailrisk
