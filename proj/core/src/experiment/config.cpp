#include "tailrisk/experiment/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "tailrisk/distributions/serialization.hpp"
#include "tailrisk/errors.hpp"

namespace tailrisk::experiment {
namespace {
using json = nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::Config, "config: " + msg); }

double positive_number(const json& v, const std::string& key) {
  if (!v.is_number()) config_error(fmt::format("'{}' must be a number", key));
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) config_error(fmt::format("'{}' must be positive", key));
  return x;
}

std::uint64_t count(const json& v, const std::string& key, std::uint64_t min) {
  if (v.is_number_unsigned() || v.is_number_integer()) {
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
      config_error(fmt::format("'{}' must be non-negative", key));
    }
    const auto x = v.get<std::uint64_t>();
    if (x < min) config_error(fmt::format("'{}' must be >= {}", key, min));
    return x;
  }
  // Accept 1e6-style literals when they are exact integers.
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= static_cast<double>(min) && d < 1.8e19 && std::floor(d) == d) {
      return static_cast<std::uint64_t>(d);
    }
  }
  config_error(fmt::format("'{}' must be an integer >= {}", key, min));
}

template <class T, class F>
std::vector<T> list(const json& v, const std::string& key, F&& each) {
  if (!v.is_array() || v.empty()) config_error(fmt::format("'{}' must be a non-empty array", key));
  std::vector<T> out;
  for (const auto& e : v) out.push_back(each(e));
  return out;
}

SampleSizeRegime parse_regime(const json& r, double& mean) {
  if (!r.is_object() || !r.contains("regime") || !r.at("regime").is_string()) {
    config_error("each regime needs a 'regime' name");
  }
  const auto name = r.at("regime").get<std::string>();
  auto check = [&](std::set<std::string> allowed) {
    allowed.insert("regime");
    allowed.insert("mean");
    for (const auto& [k, _] : r.items()) {
      if (!allowed.count(k)) config_error(fmt::format("regime {}: unknown key '{}'", name, k));
    }
  };
  auto need = [&](const char* k) {
    if (!r.contains(k)) config_error(fmt::format("regime {}: missing '{}'", name, k));
    return positive_number(r.at(k), k);
  };
  mean = 0.0;
  if (r.contains("mean")) {
    if (!r.at("mean").is_number()) config_error("regime mean must be a number");
    mean = r.at("mean").get<double>();
  }
  if (name == "heavy_power_law") {
    check({"alpha", "beta"});
    return regime::HeavyPowerLaw{need("alpha"), r.contains("beta") ? need("beta") : 1.5};
  }
  if (name == "exponential_like") {
    check({"rate"});
    return regime::ExponentialLike{need("rate")};
  }
  if (name == "normal_like") {
    check({"variance", "c"});
    return regime::NormalLike{need("variance"), r.contains("c") ? need("c") : 1.0};
  }
  config_error(fmt::format("unknown regime '{}'", name));
}

const std::map<Kind, std::set<std::string>>& allowed_keys() {
  static const std::set<std::string> common = {"experiment", "seed", "output_dir"};
  static const std::map<Kind, std::set<std::string>> keys = [] {
    auto with = [](std::set<std::string> extra) {
      extra.insert(common.begin(), common.end());
      return extra;
    };
    const std::set<std::string> targets = {"target_p", "b", "gamma"};
    auto plus_targets = [&](std::set<std::string> s) {
      s.insert(targets.begin(), targets.end());
      return with(std::move(s));
    };
    return std::map<Kind, std::set<std::string>>{
        {Kind::TruncationStudy,
         plus_targets({"distributions", "n", "budgets", "estimator", "truncation_tail_quantile"})},
        {Kind::EmpiricalStudy,
         plus_targets({"distributions", "n", "data_sizes", "replications", "budgets", "estimator"})},
        {Kind::BootstrapCoverage, plus_targets({"distributions", "n", "data_sizes", "replications",
                                                "budgets", "estimator", "level"})},
        {Kind::GpdBootstrapCoverage,
         plus_targets({"distributions", "n", "data_sizes", "replications", "budgets", "estimator",
                       "level", "tail_quantiles", "fit_methods"})},
        {Kind::EvtDetection, with({"distributions", "data_sizes", "k_step"})},
        {Kind::Thresholds, plus_targets({"distributions", "n", "regimes"})},
    };
  }();
  return keys;
}

}  // namespace

std::string_view to_string(Kind k) noexcept {
  switch (k) {
    case Kind::TruncationStudy: return "truncation_study";
    case Kind::EmpiricalStudy: return "empirical_study";
    case Kind::BootstrapCoverage: return "bootstrap_coverage";
    case Kind::GpdBootstrapCoverage: return "gpd_bootstrap_coverage";
    case Kind::EvtDetection: return "evt_detection";
    case Kind::Thresholds: return "thresholds";
  }
  return "unknown";
}

Kind kind_from_string(std::string_view name) {
  for (Kind k : {Kind::TruncationStudy, Kind::EmpiricalStudy, Kind::BootstrapCoverage,
                 Kind::GpdBootstrapCoverage, Kind::EvtDetection, Kind::Thresholds}) {
    if (to_string(k) == name) return k;
  }
  config_error(fmt::format("unknown experiment kind '{}'", name));
}

std::string Target::label() const {
  switch (kind) {
    case TargetKind::Probability: return fmt::format("p={:g}", value);
    case TargetKind::Level: return fmt::format("b={:g}", value);
    case TargetKind::Gamma: return fmt::format("gamma={:g}", value);
  }
  return "";
}

nlohmann::json Budgets::to_json() const {
  return {{"estimator", estimator}, {"oracle", oracle}, {"inner", inner}, {"resamples", resamples}};
}

nlohmann::json ExperimentConfig::to_json() const {
  json j = raw;
  j["seed"] = seed;
  return j;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) config_error("top level must be an object");
  if (!j.contains("experiment") || !j.at("experiment").is_string()) {
    config_error("missing string key 'experiment'");
  }
  ExperimentConfig c;
  c.kind = kind_from_string(j.at("experiment").get<std::string>());
  const auto& allowed = allowed_keys().at(c.kind);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      config_error(fmt::format("unknown key '{}' for experiment {}", key, to_string(c.kind)));
    }
  }
  c.raw = j;

  if (j.contains("seed")) c.seed = count(j.at("seed"), "seed", 0);
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) config_error("'output_dir' must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }

  const bool needs_dists = c.kind != Kind::Thresholds;
  if (j.contains("distributions")) {
    c.distributions = list<NamedDistribution>(j.at("distributions"), "distributions", [](const json& s) {
      NamedDistribution d;
      d.spec = s;
      try {
        d.law = distribution_from_json(s);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Config) throw;
        config_error(fmt::format("distributions: {}", e.what()));
      }
      d.label = describe(*d.law);
      return d;
    });
  } else if (needs_dists) {
    config_error("missing 'distributions'");
  }

  if (allowed.count("n")) {
    if (!j.contains("n")) config_error("missing 'n'");
    c.n = list<int>(j.at("n"), "n", [](const json& v) {
      return static_cast<int>(count(v, "n", 1));
    });
  }

  if (allowed.count("target_p")) {
    int present = 0;
    for (const char* key : {"target_p", "b", "gamma"}) {
      if (!j.contains(key)) continue;
      ++present;
      const TargetKind tk = std::string(key) == "target_p" ? TargetKind::Probability
                            : std::string(key) == "b"       ? TargetKind::Level
                                                            : TargetKind::Gamma;
      c.targets = list<Target>(j.at(key), key, [&](const json& v) {
        if (!v.is_number()) config_error(fmt::format("'{}' entries must be numbers", key));
        const double x = v.get<double>();
        if (tk == TargetKind::Probability && !(x > 0.0 && x < 1.0)) {
          config_error("'target_p' entries must lie in (0, 1)");
        }
        if (!std::isfinite(x)) config_error(fmt::format("'{}' entries must be finite", key));
        return Target{tk, x};
      });
    }
    if (present != 1) config_error("exactly one of 'target_p', 'b', 'gamma' is required");
  }

  if (allowed.count("data_sizes")) {
    if (!j.contains("data_sizes")) config_error("missing 'data_sizes'");
    c.data_sizes = list<std::size_t>(j.at("data_sizes"), "data_sizes", [](const json& v) {
      return static_cast<std::size_t>(count(v, "data_sizes", 1));
    });
  }

  if (j.contains("replications")) c.replications = count(j.at("replications"), "replications", 1);
  if ((c.kind == Kind::BootstrapCoverage || c.kind == Kind::GpdBootstrapCoverage) &&
      c.replications < 10) {
    config_error("coverage studies need 'replications' >= 10");
  }

  if (j.contains("budgets")) {
    const json& b = j.at("budgets");
    if (!b.is_object()) config_error("'budgets' must be an object");
    for (const auto& [key, v] : b.items()) {
      if (key == "estimator") c.budgets.estimator = count(v, "budgets.estimator", 2);
      else if (key == "oracle") c.budgets.oracle = count(v, "budgets.oracle", 2);
      else if (key == "inner") c.budgets.inner = count(v, "budgets.inner", 2);
      else if (key == "resamples") c.budgets.resamples = count(v, "budgets.resamples", 2);
      else config_error(fmt::format("unknown key 'budgets.{}'", key));
    }
  }

  if (j.contains("estimator")) {
    if (!j.at("estimator").is_string()) config_error("'estimator' must be a string");
    try {
      c.estimator = estimator_choice_from_string(j.at("estimator").get<std::string>());
    } catch (const Error& e) {
      config_error(e.what());
    }
  }

  if (j.contains("truncation_tail_quantile")) {
    const json& v = j.at("truncation_tail_quantile");
    if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() >= 1.0) {
      config_error("'truncation_tail_quantile' must lie in [0, 1)");
    }
    c.truncation_tail_quantile = v.get<double>();
  }

  if (j.contains("level")) {
    const json& v = j.at("level");
    if (!v.is_number() || !(v.get<double>() > 0.0 && v.get<double>() < 1.0)) {
      config_error("'level' must lie in (0, 1)");
    }
    c.level = v.get<double>();
  }

  if (c.kind == Kind::GpdBootstrapCoverage) {
    if (!j.contains("tail_quantiles")) config_error("missing 'tail_quantiles'");
    c.tail_quantiles = list<double>(j.at("tail_quantiles"), "tail_quantiles", [](const json& v) {
      if (!v.is_number() || !(v.get<double>() > 0.0 && v.get<double>() < 0.5)) {
        config_error("'tail_quantiles' entries must lie in (0, 0.5)");
      }
      return v.get<double>();
    });
    c.fit_methods = {GpdMethod::Mle};
    if (j.contains("fit_methods")) {
      c.fit_methods = list<GpdMethod>(j.at("fit_methods"), "fit_methods", [](const json& v) {
        if (!v.is_string()) config_error("'fit_methods' entries must be strings");
        try {
          return gpd_method_from_string(v.get<std::string>());
        } catch (const Error& e) {
          config_error(e.what());
        }
      });
    }
  }

  if (c.kind == Kind::Thresholds) {
    if (j.contains("regimes")) {
      c.regimes = list<SampleSizeRegime>(j.at("regimes"), "regimes", [&](const json& r) {
        double mean = 0.0;
        auto reg = parse_regime(r, mean);
        c.regime_means.push_back(mean);
        return reg;
      });
    }
    if (c.regimes.empty() && c.distributions.empty()) {
      config_error("thresholds needs 'regimes' and/or 'distributions'");
    }
  }

  if (j.contains("k_step")) c.k_step = count(j.at("k_step"), "k_step", 1);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
  return parse_config(j);
}

}  // namespace tailrisk::experiment
