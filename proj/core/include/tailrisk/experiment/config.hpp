#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tailrisk/asymptotics.hpp"
#include "tailrisk/distributions/distribution.hpp"
#include "tailrisk/estimators.hpp"
#include "tailrisk/evt.hpp"

namespace tailrisk::experiment {

enum class Kind {
  TruncationStudy,
  EmpiricalStudy,
  BootstrapCoverage,
  GpdBootstrapCoverage,
  EvtDetection,
  Thresholds,
};

std::string_view to_string(Kind k) noexcept;
Kind kind_from_string(std::string_view name);

/// Which rarity parameter the config fixes. Probability targets are turned
/// into b with level_for_probability.
enum class TargetKind { Probability, Level, Gamma };

struct Target {
  TargetKind kind = TargetKind::Probability;
  double value = 0.0;

  std::string label() const;
};

struct Budgets {
  std::uint64_t estimator = 1000000;  // replicates per point estimate
  std::uint64_t oracle = 1000000;     // replicates for ground truth without closed form
  std::uint64_t inner = 100000;       // replicates per bootstrap resample
  std::size_t resamples = 100;        // bootstrap B

  nlohmann::json to_json() const;
};

struct NamedDistribution {
  nlohmann::json spec;
  DistributionPtr law;
  std::string label;  // describe(law)
};

struct ExperimentConfig {
  Kind kind = Kind::TruncationStudy;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::vector<NamedDistribution> distributions;
  std::vector<int> n;
  std::vector<Target> targets;
  std::vector<std::size_t> data_sizes;
  std::size_t replications = 20;
  Budgets budgets;
  EstimatorChoice estimator = EstimatorChoice::Auto;
  double truncation_tail_quantile = 0.001;  // 0 means no truncation (u = inf)
  double level = 0.95;
  std::vector<double> tail_quantiles;
  std::vector<GpdMethod> fit_methods;
  std::vector<SampleSizeRegime> regimes;
  std::vector<double> regime_means;  // mu per regime, same order
  std::optional<std::size_t> k_step;
  nlohmann::json raw;  // the validated input, echoed into reports

  /// Canonical JSON: raw with the seed as actually used.
  nlohmann::json to_json() const;
};

/// Validates every field (unknown keys, types, ranges, distribution specs)
/// before returning. Throws Error(Config) with the offending key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

}  // namespace tailrisk::experiment
