#include "tailrisk/distributions/serialization.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/distributions/parametric.hpp"
#include "tailrisk/distributions/transformed.hpp"
#include "tailrisk/errors.hpp"

namespace tailrisk {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(ErrorCode::Config, where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail(ErrorCode::Config, where + ": unknown key '" + key + "'");
  }
}

double number(const json& params, const std::string& key, const std::string& family,
              std::optional<double> fallback = std::nullopt) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    fail(ErrorCode::Config, family + ": missing parameter '" + key + "'");
  }
  const json& v = params.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(ErrorCode::Config, family + ": parameter '" + key + "' must be a number");
}

std::vector<double> numbers(const json& params, const std::string& key, const std::string& family) {
  if (!params.contains(key) || !params.at(key).is_array()) {
    fail(ErrorCode::Config, family + ": parameter '" + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : params.at(key)) {
    if (!v.is_number()) fail(ErrorCode::Config, family + ": '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

DistributionPtr distribution_from_json(const json& spec) {
  check_keys(spec, {"family", "params"}, "distribution");
  if (!spec.contains("family") || !spec.at("family").is_string()) {
    fail(ErrorCode::Config, "distribution: 'family' must be a string");
  }
  const auto name = spec.at("family").get<std::string>();
  const json params = spec.value("params", json::object());

  if (name == "generalized_pareto") {
    check_keys(params, {"xi"}, name);
    return make_family(family::GeneralizedPareto{number(params, "xi", name)});
  }
  if (name == "half_student_t") {
    check_keys(params, {"nu"}, name);
    return make_family(family::HalfStudentT{number(params, "nu", name)});
  }
  if (name == "exponential") {
    check_keys(params, {"rate"}, name);
    return make_family(family::Exponential{number(params, "rate", name, 1.0)});
  }
  if (name == "normal") {
    check_keys(params, {"mean", "variance"}, name);
    return make_family(
        family::Normal{number(params, "mean", name, 0.0), number(params, "variance", name, 1.0)});
  }
  if (name == "half_normal") {
    check_keys(params, {"location"}, name);
    return std::make_shared<HalfNormalDistribution>(number(params, "location", name, 0.0));
  }
  if (name == "weibull") {
    check_keys(params, {"shape"}, name);
    return make_family(family::Weibull{number(params, "shape", name)});
  }
  if (name == "lognormal") {
    check_keys(params, {"log_mean", "log_variance"}, name);
    return make_family(family::LogNormal{number(params, "log_mean", name, 0.0),
                                         number(params, "log_variance", name, 1.0)});
  }
  if (name == "gamma") {
    check_keys(params, {"shape", "rate"}, name);
    return make_family(family::Gamma{number(params, "shape", name), number(params, "rate", name)});
  }
  if (name == "finite_lattice") {
    check_keys(params, {"origin", "spacing", "masses"}, name);
    return make_family(family::FiniteLattice{number(params, "origin", name, 0.0),
                                             number(params, "spacing", name, 1.0),
                                             numbers(params, "masses", name)});
  }
  if (name == "discrete") {
    check_keys(params, {"points", "weights"}, name);
    return std::make_shared<DiscreteDistribution>(numbers(params, "points", name),
                                                  numbers(params, "weights", name));
  }
  if (name == "empirical") {
    check_keys(params, {"data"}, name);
    return empirical_from(numbers(params, "data", name));
  }
  if (name == "truncated") {
    check_keys(params, {"base", "level"}, name);
    if (!params.contains("base")) fail(ErrorCode::Config, "truncated: missing parameter 'base'");
    return truncate(distribution_from_json(params.at("base")), number(params, "level", name));
  }
  fail(ErrorCode::Config, "unknown distribution family '" + name + "'");
}

std::string describe(const Distribution& dist) {
  const json spec = dist.spec();
  const json& params = spec.at("params");
  std::string out = spec.at("family").get<std::string>() + "(";
  bool first = true;
  for (const auto& [key, value] : params.items()) {
    if (!value.is_number()) continue;
    if (!first) out += ",";
    out += fmt::format("{}={:g}", key, value.get<double>());
    first = false;
  }
  return out + ")";
}

}  // namespace tailrisk
