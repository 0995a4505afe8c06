#pragma once

#include <nlohmann/json.hpp>

#include "tailrisk/distributions/distribution.hpp"

namespace tailrisk {

/// Parses {"family": name, "params": {...}}. Families: generalized_pareto {xi},
/// half_student_t {nu}, exponential {rate}, normal {mean, variance},
/// half_normal {}, weibull {shape}, lognormal {log_mean, log_variance},
/// gamma {shape, rate}, finite_lattice {origin, spacing, masses},
/// empirical {data}, truncated {base, level}.
/// Unknown families or parameter keys raise a Config error.
DistributionPtr distribution_from_json(const nlohmann::json& spec);

/// Short label for tables and plots, e.g. "half_student_t(nu=2.5)".
std::string describe(const Distribution& dist);

}  // namespace tailrisk
