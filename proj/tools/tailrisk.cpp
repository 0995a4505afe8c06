// tailrisk command-line front end.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tailrisk/asymptotics.hpp"
#include "tailrisk/bootstrap.hpp"
#include "tailrisk/distributions/serialization.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/estimators.hpp"
#include "tailrisk/evt.hpp"
#include "tailrisk/experiment/config.hpp"
#include "tailrisk/experiment/runners.hpp"

namespace {
using json = nlohmann::json;
using namespace tailrisk;
namespace ex = tailrisk::experiment;

constexpr int kExitError = 2;

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  f << text;
  f.close();
  if (!f) fail(ErrorCode::Io, "cannot write '" + out + "'");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// "family", "family:k=v,k=v", a JSON object, or "@file.json".
json dist_spec(const std::string& text) {
  if (text.empty()) fail(ErrorCode::Config, "empty distribution");
  if (text[0] == '@') return json::parse(slurp(text.substr(1)));
  if (text[0] == '{') return json::parse(text);
  json spec;
  const auto colon = text.find(':');
  spec["family"] = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  json params = json::object();
  std::stringstream rest(text.substr(colon + 1));
  std::string kv;
  while (std::getline(rest, kv, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) fail(ErrorCode::Config, "expected key=value in '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      params[key] = v;
    } catch (const std::exception&) {
      params[key] = value;  // e.g. level=inf
    }
  }
  spec["params"] = params;
  return spec;
}

std::vector<double> read_data(const std::string& path) {
  std::stringstream in(slurp(path));
  std::vector<double> data;
  std::string line;
  while (std::getline(in, line, '\n')) {
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        data.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorCode::Config, "non-numeric data value '" + cell + "' in " + path);
      }
    }
  }
  require(!data.empty(), ErrorCode::EmptyData, "no data in " + path);
  return data;
}

struct Rarity {
  std::optional<double> b;
  std::optional<double> gamma;
  std::optional<double> target_p;

  void add(CLI::App* app) {
    auto* ob = app->add_option("--b", b, "per-summand level; the event is S_n > n b");
    auto* og = app->add_option("--gamma", gamma, "absolute level; the event is S_n > gamma");
    auto* op = app->add_option("--target-p", target_p, "solve b so the asymptotic equals p");
    ob->excludes(og)->excludes(op);
    og->excludes(op);
  }
  ex::Target target() const {
    if (b) return {ex::TargetKind::Level, *b};
    if (gamma) return {ex::TargetKind::Gamma, *gamma};
    if (target_p) return {ex::TargetKind::Probability, *target_p};
    fail(ErrorCode::Config, "one of --b, --gamma, --target-p is required");
  }
  /// For building configs: {"b": [..]} etc.
  void into(json& cfg) const {
    if (b) cfg["b"] = {*b};
    if (gamma) cfg["gamma"] = {*gamma};
    if (target_p) cfg["target_p"] = {*target_p};
  }
};

json level_json(const ex::Level& lv) {
  json j = {{"b", lv.b}, {"gamma", lv.gamma}};
  if (lv.target_p > 0.0) j["target_p"] = lv.target_p;
  return j;
}

/// Shared by the study subcommands: either --config or inline flags.
struct StudyArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> dists;
  std::vector<int> n;
  Rarity rarity;
  std::vector<std::size_t> data_sizes;
  std::optional<std::size_t> reps;
  std::optional<double> budget;
  std::string estimator;

  void add_common(CLI::App* app) {
    app->add_option("--config", config_path, "experiment config JSON");
    app->add_option("--out", out_dir, "output directory (overrides output_dir)");
    app->add_option("--seed", seed, "master seed (overrides the config)");
    app->add_option("--dist", dists, "distribution: family[:k=v,...], JSON, or @file");
  }
};

json base_config(const StudyArgs& a, const char* kind) {
  if (!a.config_path.empty()) {
    json j = json::parse(slurp(a.config_path));
    if (!j.is_object() || j.value("experiment", std::string()) != kind) {
      // Both bootstrap kinds are served by one subcommand.
      const std::string k = j.is_object() ? j.value("experiment", std::string()) : "";
      const bool boot = std::string(kind) == "bootstrap_coverage" && k == "gpd_bootstrap_coverage";
      if (!boot) fail(ErrorCode::Config, fmt::format("config is not a {} experiment", kind));
    }
    return j;
  }
  json j = {{"experiment", kind}};
  json dists = json::array();
  for (const auto& d : a.dists) dists.push_back(dist_spec(d));
  if (!dists.empty()) j["distributions"] = dists;
  if (!a.n.empty()) j["n"] = a.n;
  a.rarity.into(j);
  if (!a.data_sizes.empty()) j["data_sizes"] = a.data_sizes;
  if (a.reps) j["replications"] = *a.reps;
  if (!a.estimator.empty()) j["estimator"] = a.estimator;
  return j;
}

int run_config(json j, const StudyArgs& a, unsigned threads = 0) {
  if (a.seed) j["seed"] = *a.seed;
  const ex::ExperimentConfig cfg = ex::parse_config(j);
  std::string dir = a.out_dir.empty() ? cfg.output_dir : a.out_dir;
  if (dir.empty()) dir = fmt::format("results/{}", ex::to_string(cfg.kind));
  const ex::Report rep = ex::run_experiment(cfg, threads);
  ex::write_report(rep, dir);
  json files = {rep.name + ".json", rep.name + ".csv"};
  for (const auto& f : rep.files) files.push_back(f.first);
  std::cout << json{{"experiment", std::string(ex::to_string(cfg.kind))},
                    {"output_dir", dir},
                    {"files", files}}
                   .dump(2)
            << "\n";
  return 0;
}

void error_exit_json(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-event tail probabilities for i.i.d. sums"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(TAILRISK_CLI_VERSION));

  // estimate ---------------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "Monte Carlo estimate of P(S_n > gamma)");
  std::string est_dist, est_choice = "auto", est_out;
  int est_n = 0;
  double est_reps = 1e5;
  std::uint64_t est_seed = 0;
  Rarity est_rarity;
  est->add_option("--dist", est_dist, "distribution")->required();
  est->add_option("--n", est_n, "number of summands")->required()->check(CLI::PositiveNumber);
  est_rarity.add(est);
  est->add_option("--estimator", est_choice, "auto, crude, conditional_mc, tilted_is");
  est->add_option("--reps", est_reps, "replications")->check(CLI::PositiveNumber);
  est->add_option("--seed", est_seed, "seed");
  est->add_option("--out", est_out, "write JSON here instead of stdout");

  // asymptotic -------------------------------------------------------------
  auto* asy = app.add_subcommand("asymptotic", "closed-form asymptotics and tilt solution");
  std::string asy_dist, asy_out, asy_ineq = "strict";
  int asy_n = 0;
  Rarity asy_rarity;
  asy->add_option("--dist", asy_dist, "distribution")->required();
  asy->add_option("--n", asy_n, "number of summands")->required()->check(CLI::PositiveNumber);
  asy_rarity.add(asy);
  asy->add_option("--inequality", asy_ineq, "strict (S_n > gamma) or non_strict (S_n >= gamma)")
      ->check(CLI::IsMember({"strict", "non_strict"}));
  asy->add_option("--out", asy_out, "write JSON here instead of stdout");

  // thresholds -------------------------------------------------------------
  auto* thr = app.add_subcommand("thresholds", "reliable truncation levels and minimum data sizes");
  StudyArgs thr_a;
  std::vector<std::string> thr_regimes;
  thr_a.add_common(thr);
  thr->add_option("--n", thr_a.n, "number of summands");
  thr_a.rarity.add(thr);
  thr->add_option("--regime", thr_regimes, "regime JSON, e.g. {\"regime\":\"exponential_like\",\"rate\":1}");

  // truncation-study -------------------------------------------------------
  auto* trs = app.add_subcommand("truncation-study", "relative error caused by truncating the input");
  StudyArgs trs_a;
  std::optional<double> trs_q;
  trs_a.add_common(trs);
  trs->add_option("--n", trs_a.n, "number of summands");
  trs_a.rarity.add(trs);
  trs->add_option("--tail-quantile", trs_q, "truncate at this upper tail quantile (0 = none)");
  trs->add_option("--budget", trs_a.budget, "replicates per estimate");
  trs->add_option("--estimator", trs_a.estimator, "estimator choice");

  // empirical-study --------------------------------------------------------
  auto* emp = app.add_subcommand("empirical-study", "relative error of empirical input models");
  StudyArgs emp_a;
  emp_a.add_common(emp);
  emp->add_option("--n", emp_a.n, "number of summands");
  emp_a.rarity.add(emp);
  emp->add_option("--data-sizes", emp_a.data_sizes, "training sample sizes N");
  emp->add_option("--reps", emp_a.reps, "replications per cell");
  emp->add_option("--budget", emp_a.budget, "replicates per estimate");
  emp->add_option("--estimator", emp_a.estimator, "estimator choice");

  // bootstrap --------------------------------------------------------------
  auto* boot = app.add_subcommand("bootstrap", "bootstrap CI on data, or a coverage study");
  StudyArgs boot_a;
  std::string boot_data;
  int boot_n_single = 0;
  std::vector<double> boot_tail_q;
  std::vector<std::string> boot_fits;
  std::optional<std::size_t> boot_b;
  std::optional<double> boot_inner, boot_level;
  boot_a.add_common(boot);
  boot->add_option("--data", boot_data, "data file: one CI for this sample");
  boot->add_option("--n", boot_a.n, "number of summands");
  boot_a.rarity.add(boot);
  boot->add_option("--data-sizes", boot_a.data_sizes, "coverage study sample sizes N");
  boot->add_option("--reps", boot_a.reps, "coverage replications");
  boot->add_option("--resamples", boot_b, "bootstrap resamples B");
  boot->add_option("--inner", boot_inner, "inner estimator replicates per resample");
  boot->add_option("--level", boot_level, "confidence level");
  boot->add_option("--tail-quantiles", boot_tail_q, "GPD-spliced bootstrap at these tail quantiles");
  boot->add_option("--fit-methods", boot_fits, "mle, mom, pwm");
  boot->add_option("--estimator", boot_a.estimator, "inner estimator choice");

  // evt --------------------------------------------------------------------
  auto* evt = app.add_subcommand("evt", "extreme value index series and tail classification");
  StudyArgs evt_a;
  std::string evt_data;
  std::optional<std::size_t> evt_step;
  evt_a.add_common(evt);
  evt->add_option("--data", evt_data, "data file: classify this sample");
  evt->add_option("--data-sizes", evt_a.data_sizes, "simulated sample sizes N");
  evt->add_option("--k-step", evt_step, "spacing of k values");

  // experiment run ---------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "config-driven experiments");
  exp->require_subcommand(1);
  auto* exp_run = exp->add_subcommand("run", "run one experiment config");
  StudyArgs exp_a;
  exp_run->add_option("config", exp_a.config_path, "config JSON")->required();
  exp_run->add_option("--out", exp_a.out_dir, "output directory (overrides output_dir)");
  exp_run->add_option("--seed", exp_a.seed, "master seed (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_exit_json("usage", e.what());
    return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
  }

  try {
    if (est->parsed()) {
      const auto d = distribution_from_json(dist_spec(est_dist));
      const ex::Level lv = ex::resolve_level(*d, est_n, est_rarity.target());
      McOptions mc;
      mc.replications = static_cast<std::uint64_t>(std::llround(est_reps));
      mc.seed = est_seed;
      const auto r = estimate_tail(*d, est_n, lv.gamma, estimator_choice_from_string(est_choice), mc);
      json j = {{"distribution", describe(*d)}, {"n", est_n}, {"level", level_json(lv)},
                {"result", r.to_json()}};
      emit(j, est_out);
      return 0;
    }
    if (asy->parsed()) {
      const auto d = distribution_from_json(dist_spec(asy_dist));
      const ex::Level lv = ex::resolve_level(*d, asy_n, asy_rarity.target());
      const Inequality ineq = asy_ineq == "strict" ? Inequality::Strict : Inequality::NonStrict;
      json j = {{"distribution", describe(*d)},
                {"n", asy_n},
                {"level", level_json(lv)},
                {"tail_class", d->tail_class() == TailClass::Light ? "light" : "heavy"},
                {"inequality", asy_ineq}};
      if (d->tail_class() == TailClass::Light) {
        const TiltSolution t = solve_tilt(*d, lv.b);
        j["tilt"] = {{"theta_star", t.theta_star}, {"rate", t.rate}, {"psi", t.psi_at},
                     {"psi2", t.psi2}, {"iterations", t.iterations}};
        LatticeOption lat;
        lat.lattice = d->lattice_span().has_value();
        j["lattice"] = lat.lattice;
        j["asymptotic"] = light_asymptotic(*d, asy_n, lv.b, ineq, lat);
      } else {
        j["asymptotic"] = heavy_asymptotic(*d, asy_n, lv.gamma);
        j["one_big_jump"] = one_big_jump(*d, asy_n, lv.gamma);
      }
      if (ineq == Inequality::Strict) {
        const auto exact = exact_tail(*d, asy_n, lv.gamma);
        j["exact"] = exact ? json(*exact) : json(nullptr);
      }
      emit(j, asy_out);
      return 0;
    }
    if (thr->parsed()) {
      json j = base_config(thr_a, "thresholds");
      if (thr_a.config_path.empty() && !thr_regimes.empty()) {
        j["regimes"] = json::array();
        for (const auto& r : thr_regimes) j["regimes"].push_back(json::parse(r));
      }
      return run_config(j, thr_a);
    }
    if (trs->parsed()) {
      json j = base_config(trs_a, "truncation_study");
      if (trs_a.config_path.empty()) {
        if (trs_q) j["truncation_tail_quantile"] = *trs_q;
        if (trs_a.budget) j["budgets"] = {{"estimator", *trs_a.budget}};
      }
      return run_config(j, trs_a);
    }
    if (emp->parsed()) {
      json j = base_config(emp_a, "empirical_study");
      if (emp_a.config_path.empty() && emp_a.budget) {
        j["budgets"] = {{"estimator", *emp_a.budget}, {"oracle", *emp_a.budget}};
      }
      return run_config(j, emp_a);
    }
    if (boot->parsed()) {
      if (!boot_data.empty()) {
        // One interval for the supplied sample.
        require(boot_a.dists.empty() && boot_a.config_path.empty(), ErrorCode::Config,
                "--data cannot be combined with --dist or --config");
        require(boot_a.n.size() == 1, ErrorCode::Config, "--data needs exactly one --n");
        boot_n_single = boot_a.n[0];
        const auto data = read_data(boot_data);
        double gamma = 0.0;
        if (boot_a.rarity.b) gamma = *boot_a.rarity.b * boot_n_single;
        else if (boot_a.rarity.gamma) gamma = *boot_a.rarity.gamma;
        else fail(ErrorCode::Config, "--data needs --b or --gamma");
        BootstrapOptions bo;
        if (boot_b) bo.resamples = *boot_b;
        if (boot_level) bo.level = *boot_level;
        if (boot_inner) bo.inner.replications = static_cast<std::uint64_t>(std::llround(*boot_inner));
        if (!boot_a.estimator.empty()) bo.inner.choice = estimator_choice_from_string(boot_a.estimator);
        bo.seed = boot_a.seed.value_or(0);
        json out = json::array();
        if (boot_tail_q.empty()) {
          out.push_back(nonparam_bootstrap_ci(data, boot_n_single, gamma, bo).to_json());
        } else {
          std::vector<std::string> fits = boot_fits.empty() ? std::vector<std::string>{"mle"} : boot_fits;
          for (double q : boot_tail_q) {
            for (const auto& f : fits) {
              out.push_back(
                  gpd_bootstrap_ci(data, boot_n_single, gamma, q, gpd_method_from_string(f), bo).to_json());
            }
          }
        }
        json j = {{"n", boot_n_single}, {"gamma", gamma}, {"data_size", data.size()},
                  {"seed", bo.seed}, {"intervals", out}};
        if (boot_a.out_dir.empty()) {
          emit(j, "");
        } else {
          std::filesystem::create_directories(boot_a.out_dir);
          emit(j, (std::filesystem::path(boot_a.out_dir) / "bootstrap_ci.json").string());
        }
        return 0;
      }
      const bool gpd = !boot_tail_q.empty();
      json j = base_config(boot_a, gpd ? "gpd_bootstrap_coverage" : "bootstrap_coverage");
      if (boot_a.config_path.empty()) {
        json budgets = json::object();
        if (boot_b) budgets["resamples"] = *boot_b;
        if (boot_inner) budgets["inner"] = *boot_inner;
        if (!budgets.empty()) j["budgets"] = budgets;
        if (boot_level) j["level"] = *boot_level;
        if (gpd) {
          j["tail_quantiles"] = boot_tail_q;
          if (!boot_fits.empty()) j["fit_methods"] = boot_fits;
        }
      }
      return run_config(j, boot_a);
    }
    if (evt->parsed()) {
      if (!evt_data.empty()) {
        const auto data = read_data(evt_data);
        const std::size_t big_n = data.size();
        const std::size_t step = evt_step.value_or(std::max<std::size_t>(1, big_n / 1000));
        const auto ks = k_range(std::max<std::size_t>(2, big_n / 1000), big_n / 5, step);
        json j = {{"data_size", big_n}};
        std::string csv = "estimator,k,xi_hat\n";
        for (const auto& s : {pickands_series(data, ks), moment_series(data, ks)}) {
          csv += s.to_csv(false);
          json e;
          try {
            const auto c = classify_tail(s);
            e = {{"verdict", std::string(to_string(c.verdict))},
                 {"fraction_above", c.fraction_above},
                 {"defined_points", c.defined_points},
                 {"window", {c.window.lo, c.window.hi}}};
          } catch (const Error& err) {
            e = {{"verdict", "inconclusive"}, {"error", err.what()}};
          }
          j[std::string(to_string(s.estimator))] = e;
        }
        if (!evt_a.out_dir.empty()) {
          std::filesystem::create_directories(evt_a.out_dir);
          emit(j, (std::filesystem::path(evt_a.out_dir) / "evt.json").string());
          std::ofstream((std::filesystem::path(evt_a.out_dir) / "evt_series.csv").string(),
                        std::ios::binary)
              << csv;
        } else {
          emit(j, "");
        }
        return 0;
      }
      json j = base_config(evt_a, "evt_detection");
      if (evt_a.config_path.empty() && evt_step) j["k_step"] = *evt_step;
      return run_config(j, evt_a);
    }
    if (exp_run->parsed()) {
      return run_config(json::parse(slurp(exp_a.config_path)), exp_a);
    }
  } catch (const Error& e) {
    error_exit_json(std::string(to_string(e.code())), e.what());
    return kExitError;
  } catch (const json::exception& e) {
    error_exit_json("config", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    error_exit_json("internal", e.what());
    return kExitError;
  }
  return 0;
}
