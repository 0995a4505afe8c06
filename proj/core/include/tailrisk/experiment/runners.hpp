#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tailrisk/experiment/config.hpp"

namespace tailrisk::experiment {

/// Everything one experiment writes. No timestamps or timings: equal configs
/// give equal reports whatever the worker count.
struct Report {
  std::string name;  // file stem
  nlohmann::json json;
  std::string csv;
  std::vector<std::pair<std::string, std::string>> files;  // extra (file name, content)
};

/// version, experiment kind, seed, echoed config and budgets.
nlohmann::json report_header(const ExperimentConfig& cfg);

/// Rarity parameters of one cell.
struct Level {
  double b = 0.0;
  double gamma = 0.0;
  double target_p = 0.0;  // 0 when the config fixed b or gamma
};
Level resolve_level(const Distribution& dist, int n, const Target& target);

Report run_truncation_study(const ExperimentConfig& cfg, unsigned threads = 0);
Report run_empirical_study(const ExperimentConfig& cfg, unsigned threads = 0);
Report run_bootstrap_coverage(const ExperimentConfig& cfg, unsigned threads = 0);
Report run_evt_detection(const ExperimentConfig& cfg, unsigned threads = 0);
Report run_thresholds(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

/// Writes <name>.json, <name>.csv and the extra files into dir (created if
/// needed). Throws Error(Io) when the directory is unwritable.
void write_report(const Report& report, const std::filesystem::path& dir);

}  // namespace tailrisk::experiment
