#include "tailrisk/experiment/runners.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "tailrisk/bootstrap.hpp"
#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/experiment/box_stats.hpp"
#include "tailrisk/experiment/svg.hpp"
#include "tailrisk/parallel.hpp"
#include "tailrisk/rng.hpp"

#ifndef TAILRISK_VERSION
#define TAILRISK_VERSION "unknown"
#endif

namespace tailrisk::experiment {
namespace {
using json = nlohmann::json;

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json error_json(const Error& e) {
  return {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
}

struct Truth {
  double value = 0.0;
  double std_error = 0.0;
  std::string source;
};

Truth ground_truth(const Distribution& d, int n, double gamma, std::uint64_t budget,
                   std::uint64_t seed, unsigned threads) {
  if (auto exact = exact_tail(d, n, gamma)) return {*exact, 0.0, "closed_form"};
  McOptions mc{budget, seed, threads};
  const auto r = estimate_tail(d, n, gamma, EstimatorChoice::Auto, mc);
  return {r.estimate, r.std_error, std::string("oracle_") + std::string(to_string(r.estimator))};
}

json level_json(const Level& lv) {
  json j = {{"b", lv.b}, {"gamma", lv.gamma}};
  j["target_p"] = lv.target_p > 0.0 ? json(lv.target_p) : json(nullptr);
  return j;
}

}  // namespace

json report_header(const ExperimentConfig& cfg) {
  return {{"tool", "tailrisk"},
          {"version", TAILRISK_VERSION},
          {"experiment", std::string(to_string(cfg.kind))},
          {"seed", cfg.seed},
          {"config", cfg.to_json()},
          {"budgets", cfg.budgets.to_json()}};
}

Level resolve_level(const Distribution& dist, int n, const Target& target) {
  Level lv;
  const double nn = static_cast<double>(n);
  switch (target.kind) {
    case TargetKind::Probability:
      lv.target_p = target.value;
      lv.b = level_for_probability(dist, n, target.value);
      lv.gamma = nn * lv.b;
      break;
    case TargetKind::Level:
      lv.b = target.value;
      lv.gamma = nn * lv.b;
      break;
    case TargetKind::Gamma:
      lv.gamma = target.value;
      lv.b = lv.gamma / nn;
      break;
  }
  return lv;
}

// ---------------------------------------------------------------------------

Report run_truncation_study(const ExperimentConfig& cfg, unsigned threads) {
  Report rep{"truncation_study", report_header(cfg), {}, {}};
  rep.csv =
      "distribution,n,target,b,gamma,truncation_level,p,p_std_error,p_estimator,p_u,p_u_std_error,"
      "p_u_estimator,relative_error,relative_error_std_error,status\n";
  json cells = json::array();
  std::vector<Bar> bars;
  for (std::size_t di = 0; di < cfg.distributions.size(); ++di) {
    const auto& nd = cfg.distributions[di];
    const double u = cfg.truncation_tail_quantile > 0.0 ? nd.law->isf(cfg.truncation_tail_quantile)
                                                        : std::numeric_limits<double>::infinity();
    for (std::size_t ni = 0; ni < cfg.n.size(); ++ni) {
      for (std::size_t ti = 0; ti < cfg.targets.size(); ++ti) {
        const int n = cfg.n[ni];
        json cell = {{"distribution", nd.label},
                     {"distribution_spec", nd.spec},
                     {"n", n},
                     {"target", cfg.targets[ti].label()},
                     {"truncation_level", std::isfinite(u) ? json(u) : json("inf")},
                     {"budget", cfg.budgets.estimator}};
        const std::uint64_t s_full = derive_seed(cfg.seed, {1, di, ni, ti, 0});
        const std::uint64_t s_trunc = derive_seed(cfg.seed, {1, di, ni, ti, 1});
        cell["seeds"] = {{"p", s_full}, {"p_u", s_trunc}};
        std::string row_prefix = fmt::format("{},{},{}", csv_field(nd.label), n,
                                             cfg.targets[ti].label());
        try {
          const Level lv = resolve_level(*nd.law, n, cfg.targets[ti]);
          cell["level"] = level_json(lv);
          const auto p = estimate_tail(*nd.law, n, lv.gamma, cfg.estimator,
                                       {cfg.budgets.estimator, s_full, threads});
          const auto pu = estimate_tail(*truncate(nd.law, u), n, lv.gamma, cfg.estimator,
                                        {cfg.budgets.estimator, s_trunc, threads});
          require(p.estimate > 0.0, ErrorCode::Convergence,
                  "untruncated estimate is zero; raise the budget");
          const double rel = std::abs(p.estimate - pu.estimate) / p.estimate;
          const double rel_se = std::hypot(pu.std_error / p.estimate,
                                           pu.estimate * p.std_error / (p.estimate * p.estimate));
          cell["p"] = p.to_json();
          cell["p_u"] = pu.to_json();
          cell["relative_error"] = rel;
          cell["relative_error_std_error"] = rel_se;
          cell["status"] = "ok";
          rep.csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},ok\n", row_prefix, num(lv.b),
                                 num(lv.gamma), std::isfinite(u) ? num(u) : "inf", num(p.estimate),
                                 num(p.std_error), to_string(p.estimator), num(pu.estimate),
                                 num(pu.std_error), to_string(pu.estimator), num(rel), num(rel_se));
          bars.push_back({fmt::format("{} n={}", nd.label, n), rel, 2.0 * rel_se});
        } catch (const Error& e) {
          cell["status"] = "failed";
          cell["error"] = error_json(e);
          rep.csv += row_prefix + ",,,,,,,,,,,,failed\n";
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  rep.json["cells"] = std::move(cells);
  rep.files.emplace_back("truncation_study.svg",
                         bar_chart_svg("Relative error |p - p_u| / p under truncation", bars,
                                       "relative error"));
  return rep;
}

// ---------------------------------------------------------------------------

Report run_empirical_study(const ExperimentConfig& cfg, unsigned threads) {
  Report rep{"empirical_study", report_header(cfg), {}, {}};
  rep.csv =
      "distribution,n,target,b,gamma,truth,truth_source,N,replications,failed,median,q25,q75,"
      "whisker_low,whisker_high,outliers,status\n";
  json cells = json::array();
  for (std::size_t di = 0; di < cfg.distributions.size(); ++di) {
    const auto& nd = cfg.distributions[di];
    for (std::size_t ni = 0; ni < cfg.n.size(); ++ni) {
      for (std::size_t ti = 0; ti < cfg.targets.size(); ++ti) {
        const int n = cfg.n[ni];
        std::vector<BoxEntry> boxes;
        const std::string prefix =
            fmt::format("{},{},{}", csv_field(nd.label), n, cfg.targets[ti].label());
        Level lv;
        Truth truth;
        try {
          lv = resolve_level(*nd.law, n, cfg.targets[ti]);
          truth = ground_truth(*nd.law, n, lv.gamma, cfg.budgets.oracle,
                               derive_seed(cfg.seed, {2, di, ni, ti}), threads);
          require(truth.value > 0.0, ErrorCode::Convergence, "ground truth is zero");
        } catch (const Error& e) {
          cells.push_back({{"distribution", nd.label}, {"n", n}, {"target", cfg.targets[ti].label()},
                           {"status", "failed"}, {"error", error_json(e)}});
          rep.csv += prefix + ",,,,,,,,,,,,,,failed\n";
          continue;
        }
        for (std::size_t si = 0; si < cfg.data_sizes.size(); ++si) {
          const std::size_t big_n = cfg.data_sizes[si];
          const std::uint64_t cell_seed = derive_seed(cfg.seed, {3, di, ni, ti, si});
          std::vector<double> rel(cfg.replications, 0.0);
          std::vector<char> ok(cfg.replications, 0);
          std::vector<std::string> errors(cfg.replications);
          parallel_for(cfg.replications, threads, [&](std::uint64_t r) {
            Rng rng(cell_seed, {1, r});
            std::vector<double> data(big_n);
            for (double& x : data) x = nd.law->sample(rng);
            try {
              const auto emp = empirical_from(std::move(data));
              const auto est = estimate_tail(*emp, n, lv.gamma, cfg.estimator,
                                             {cfg.budgets.estimator, derive_seed(cell_seed, {2, r}), 1});
              rel[r] = (est.estimate - truth.value) / truth.value;
              ok[r] = 1;
            } catch (const Error& e) {
              errors[r] = std::string(to_string(e.code()));
            }
          });
          std::vector<double> good;
          json per_rep = json::array();
          for (std::size_t r = 0; r < cfg.replications; ++r) {
            per_rep.push_back(ok[r] ? json(rel[r]) : json(nullptr));
            if (ok[r]) good.push_back(rel[r]);
          }
          json cell = {{"distribution", nd.label},
                       {"distribution_spec", nd.spec},
                       {"n", n},
                       {"target", cfg.targets[ti].label()},
                       {"level", level_json(lv)},
                       {"truth", truth.value},
                       {"truth_std_error", truth.std_error},
                       {"truth_source", truth.source},
                       {"N", big_n},
                       {"seed", cell_seed},
                       {"budget", cfg.budgets.estimator},
                       {"relative_errors", per_rep},
                       {"failed", cfg.replications - good.size()}};
          const std::string row = fmt::format("{},{},{},{},{},{},{},{}", prefix, num(lv.b),
                                              num(lv.gamma), num(truth.value), truth.source, big_n,
                                              cfg.replications, cfg.replications - good.size());
          if (good.empty()) {
            cell["status"] = "failed";
            rep.csv += row + ",,,,,,,failed\n";
          } else {
            const BoxStats bs = box_stats(good);
            cell["box"] = bs.to_json();
            cell["status"] = "ok";
            rep.csv += fmt::format("{},{},{},{},{},{},{},ok\n", row, num(bs.median), num(bs.q25),
                                   num(bs.q75), num(bs.whisker_low), num(bs.whisker_high),
                                   bs.outliers.size());
            boxes.push_back({fmt::format("N={}", big_n), bs});
          }
          cells.push_back(std::move(cell));
        }
        rep.files.emplace_back(
            fmt::format("empirical_study_{}_n{}_{}.svg", di, n, ti),
            box_plot_svg(fmt::format("{} n={} {}", nd.label, n, cfg.targets[ti].label()), boxes,
                         "relative error", 0.0));
      }
    }
  }
  rep.json["cells"] = std::move(cells);
  return rep;
}

// ---------------------------------------------------------------------------

Report run_bootstrap_coverage(const ExperimentConfig& cfg, unsigned threads) {
  const bool gpd = cfg.kind == Kind::GpdBootstrapCoverage;
  Report rep{std::string(to_string(cfg.kind)), report_header(cfg), {}, {}};
  rep.csv =
      "distribution,n,target,b,true_p,truth_source,tail_qtl,method,sample_size,coverage,ci_width,"
      "replications,failed,status\n";
  json cells = json::array();

  std::vector<CiMethod> methods;
  if (gpd) {
    for (double q : cfg.tail_quantiles) {
      for (GpdMethod m : cfg.fit_methods) methods.push_back({CiMethod::Kind::GpdSpliced, m, q});
    }
  } else {
    methods.push_back({});
  }

  for (std::size_t di = 0; di < cfg.distributions.size(); ++di) {
    const auto& nd = cfg.distributions[di];
    for (std::size_t ni = 0; ni < cfg.n.size(); ++ni) {
      for (std::size_t ti = 0; ti < cfg.targets.size(); ++ti) {
        const int n = cfg.n[ni];
        const std::string prefix =
            fmt::format("{},{},{}", csv_field(nd.label), n, cfg.targets[ti].label());
        Level lv;
        Truth truth;
        try {
          lv = resolve_level(*nd.law, n, cfg.targets[ti]);
          truth = ground_truth(*nd.law, n, lv.gamma, cfg.budgets.oracle,
                               derive_seed(cfg.seed, {4, di, ni, ti}), threads);
        } catch (const Error& e) {
          cells.push_back({{"distribution", nd.label}, {"n", n}, {"target", cfg.targets[ti].label()},
                           {"status", "failed"}, {"error", error_json(e)}});
          rep.csv += prefix + ",,,,,,,,,,,failed\n";
          continue;
        }
        std::vector<LineSeries> curves;
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
          const CiMethod& method = methods[mi];
          LineSeries curve{method.tail_quantile > 0.0
                               ? fmt::format("{} q={:g}", method.label(), method.tail_quantile)
                               : method.label(),
                           {},
                           {}};
          for (std::size_t si = 0; si < cfg.data_sizes.size(); ++si) {
            const std::size_t big_n = cfg.data_sizes[si];
            const std::uint64_t cell_seed = derive_seed(cfg.seed, {5, di, ni, ti, mi, si});
            BootstrapOptions bo;
            bo.resamples = cfg.budgets.resamples;
            bo.level = cfg.level;
            bo.inner = {cfg.estimator, cfg.budgets.inner};
            bo.threads = 1;
            // Called concurrently: the options are copied per call, never mutated in place.
            CiProcedure proc = [&, bo](std::span<const double> data, std::uint64_t seed) {
              BootstrapOptions local = bo;
              local.seed = seed;
              if (method.kind == CiMethod::Kind::Nonparametric) {
                return nonparam_bootstrap_ci(data, n, lv.gamma, local);
              }
              return gpd_bootstrap_ci(data, n, lv.gamma, method.tail_quantile, method.fit, local);
            };
            const json cell_cfg = {{"distribution", nd.label},
                                   {"distribution_spec", nd.spec},
                                   {"n", n},
                                   {"target", cfg.targets[ti].label()},
                                   {"level", level_json(lv)},
                                   {"true_p", truth.value},
                                   {"truth_std_error", truth.std_error},
                                   {"truth_source", truth.source},
                                   {"N", big_n},
                                   {"method", method.to_json()},
                                   {"confidence_level", cfg.level},
                                   {"resamples", cfg.budgets.resamples},
                                   {"inner_budget", cfg.budgets.inner},
                                   {"inner_estimator", std::string(to_string(cfg.estimator))},
                                   {"replications", cfg.replications},
                                   {"seed", cell_seed}};
            const CoverageReport cr =
                coverage_study(*nd.law, truth.value, {big_n, cfg.replications, cell_seed, threads},
                               proc, cell_cfg);
            json cell = cr.to_json();
            cell["status"] = cr.replications > 0 ? "ok" : "failed";
            cells.push_back(std::move(cell));
            const std::string q = gpd ? fmt::format("{:g}", method.tail_quantile) : "none";
            rep.csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", prefix, num(lv.b),
                                   num(truth.value), truth.source, q, method.label(), big_n,
                                   num(cr.coverage), num(cr.mean_width), cr.replications,
                                   cr.failed_replications, cr.replications > 0 ? "ok" : "failed");
            curve.x.push_back(std::log10(static_cast<double>(big_n)));
            curve.y.push_back(cr.replications > 0 ? cr.coverage : std::nan(""));
          }
          curves.push_back(std::move(curve));
        }
        rep.files.emplace_back(
            fmt::format("{}_{}_n{}_{}.svg", rep.name, di, n, ti),
            line_plot_svg(fmt::format("Coverage, {} n={} {}", nd.label, n, cfg.targets[ti].label()),
                          curves, "log10 N", "coverage", cfg.level));
      }
    }
  }
  rep.json["cells"] = std::move(cells);
  return rep;
}

// ---------------------------------------------------------------------------

Report run_evt_detection(const ExperimentConfig& cfg, unsigned threads) {
  Report rep{"evt_detection", report_header(cfg), {}, {}};
  rep.csv =
      "distribution,N,estimator,verdict,defined_points,fraction_above,window_lo,window_hi,"
      "median_xi_in_window,estimators_agree\n";
  std::string series_csv = "distribution,N,estimator,k,xi_hat\n";
  json cells = json::array();

  struct Job {
    std::size_t di, si;
  };
  std::vector<Job> jobs;
  for (std::size_t di = 0; di < cfg.distributions.size(); ++di) {
    for (std::size_t si = 0; si < cfg.data_sizes.size(); ++si) jobs.push_back({di, si});
  }
  std::vector<std::pair<IndexSeries, IndexSeries>> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::uint64_t j) {
    const auto& nd = cfg.distributions[jobs[j].di];
    const std::size_t big_n = cfg.data_sizes[jobs[j].si];
    Rng rng(cfg.seed, {6, jobs[j].di, jobs[j].si});
    std::vector<double> data(big_n);
    for (double& x : data) x = nd.law->sample(rng);
    const std::size_t step = cfg.k_step.value_or(std::max<std::size_t>(1, big_n / 1000));
    const auto ks = k_range(std::max<std::size_t>(2, big_n / 1000), big_n / 5, step);
    try {
      results[j] = {pickands_series(data, ks), moment_series(data, ks)};
    } catch (const Error& e) {
      errors[j] = e.what();
    }
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& nd = cfg.distributions[jobs[j].di];
    const std::size_t big_n = cfg.data_sizes[jobs[j].si];
    json cell = {{"distribution", nd.label},
                 {"distribution_spec", nd.spec},
                 {"N", big_n},
                 {"seed_stream", {6, jobs[j].di, jobs[j].si}}};
    if (!errors[j].empty()) {
      cell["status"] = "failed";
      cell["error"] = errors[j];
      cells.push_back(std::move(cell));
      continue;
    }
    const KWindow window = default_k_window(big_n);
    std::vector<std::string> verdicts;
    std::vector<LineSeries> lines;
    json per = json::object();
    std::vector<std::string> rows;
    for (const IndexSeries* s : {&results[j].first, &results[j].second}) {
      const std::string est(to_string(s->estimator));
      LineSeries line{est, {}, {}};
      std::vector<double> in_window;
      for (const auto& p : s->points) {
        line.x.push_back(static_cast<double>(p.k));
        line.y.push_back(p.defined ? p.xi_hat : std::nan(""));
        series_csv += fmt::format("{},{},{},{},{}\n", csv_field(nd.label), big_n, est, p.k,
                                  p.defined ? num(p.xi_hat) : "nan");
        if (p.defined && p.k >= window.lo && p.k <= window.hi) in_window.push_back(p.xi_hat);
      }
      lines.push_back(std::move(line));
      std::sort(in_window.begin(), in_window.end());
      const double med = in_window.empty() ? std::nan("") : sorted_quantile(in_window, 0.5);
      json e = {{"window", {window.lo, window.hi}}};
      e["median_xi_in_window"] = std::isfinite(med) ? json(med) : json(nullptr);
      std::string verdict;
      std::string row_tail;
      try {
        const auto cls = classify_tail(*s, window);
        verdict = std::string(to_string(cls.verdict));
        e["verdict"] = verdict;
        e["defined_points"] = cls.defined_points;
        e["fraction_above"] = cls.fraction_above;
        e["margin"] = cls.margin;
        row_tail = fmt::format("{},{}", cls.defined_points, num(cls.fraction_above));
      } catch (const Error& err) {
        verdict = "inconclusive";
        e["verdict"] = verdict;
        e["error"] = error_json(err);
        row_tail = fmt::format("{},", in_window.size());
      }
      verdicts.push_back(verdict);
      per[est] = std::move(e);
      rows.push_back(fmt::format("{},{},{},{},{},{},{},{}", csv_field(nd.label), big_n, est,
                                 verdict, row_tail, window.lo, window.hi,
                                 std::isfinite(med) ? num(med) : "nan"));
    }
    const bool agree = verdicts[0] == verdicts[1];
    for (const auto& r : rows) rep.csv += r + (agree ? ",true\n" : ",false\n");
    cell["estimators"] = std::move(per);
    cell["estimators_agree"] = agree;
    cell["status"] = "ok";
    cells.push_back(std::move(cell));
    rep.files.emplace_back(
        fmt::format("evt_{}_N{}.svg", jobs[j].di, big_n),
        line_plot_svg(fmt::format("Extreme value index, {} N={}", nd.label, big_n), lines, "k",
                      "xi_hat", 0.0));
  }
  rep.json["cells"] = std::move(cells);
  rep.files.emplace_back("evt_series.csv", std::move(series_csv));
  return rep;
}

// ---------------------------------------------------------------------------

Report run_thresholds(const ExperimentConfig& cfg) {
  Report rep{"thresholds", report_header(cfg), {}, {}};
  rep.csv = "kind,subject,n,target,b,formula,value,log10_value,status\n";
  json cells = json::array();
  for (std::size_t ri = 0; ri < cfg.regimes.size(); ++ri) {
    const auto& reg = cfg.regimes[ri];
    const double mean = cfg.regime_means[ri];
    for (int n : cfg.n) {
      for (const auto& t : cfg.targets) {
        json cell = {{"kind", "min_sample_size"}, {"regime", regime_name(reg)}, {"mean", mean},
                     {"n", n}, {"target", t.label()}};
        const std::string prefix = fmt::format("min_sample_size,{},{},{}", regime_name(reg), n, t.label());
        try {
          const double nn = static_cast<double>(n);
          std::optional<double> p;
          double b = 0.0;
          if (t.kind == TargetKind::Probability) {
            p = t.value;
          } else {
            b = t.kind == TargetKind::Level ? t.value : t.value / nn;
          }
          const SampleSize s = min_sample_size(reg, n, b, mean, p);
          cell["b"] = p ? json(nullptr) : json(b);
          cell["formula"] = s.formula;
          cell["value"] = std::isfinite(s.value) ? json(s.value) : json("inf");
          cell["log10_value"] = s.log10_value;
          cell["status"] = "ok";
          rep.csv += fmt::format("{},{},{},{},{},ok\n", prefix, p ? "" : num(b), csv_field(s.formula),
                                 std::isfinite(s.value) ? num(s.value) : "inf", num(s.log10_value));
        } catch (const Error& e) {
          cell["status"] = "failed";
          cell["error"] = error_json(e);
          rep.csv += prefix + ",,,,,failed\n";
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  for (const auto& nd : cfg.distributions) {
    for (int n : cfg.n) {
      for (const auto& t : cfg.targets) {
        json cell = {{"kind", "reliable_truncation_level"}, {"distribution", nd.label},
                     {"n", n}, {"target", t.label()}};
        const std::string prefix =
            fmt::format("reliable_truncation_level,{},{},{}", csv_field(nd.label), n, t.label());
        try {
          const Level lv = resolve_level(*nd.law, n, t);
          const auto rule = truncation_rule_for(*nd.law);
          const double u = reliable_truncation_level(rule, *nd.law, n, lv.b);
          cell["level"] = level_json(lv);
          cell["rule"] = rule_name(rule);
          cell["value"] = u;
          cell["unreliable_bound"] = unreliable_truncation_bound(nd.law->mean(), n, lv.b);
          cell["status"] = "ok";
          rep.csv += fmt::format("{},{},{},{},{},ok\n", prefix, num(lv.b), rule_name(rule), num(u),
                                 num(std::log10(u)));
        } catch (const Error& e) {
          cell["status"] = "failed";
          cell["error"] = error_json(e);
          rep.csv += prefix + ",,,,,failed\n";
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  rep.json["cells"] = std::move(cells);
  return rep;
}

Report run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  switch (cfg.kind) {
    case Kind::TruncationStudy: return run_truncation_study(cfg, threads);
    case Kind::EmpiricalStudy: return run_empirical_study(cfg, threads);
    case Kind::BootstrapCoverage:
    case Kind::GpdBootstrapCoverage: return run_bootstrap_coverage(cfg, threads);
    case Kind::EvtDetection: return run_evt_detection(cfg, threads);
    case Kind::Thresholds: return run_thresholds(cfg);
  }
  fail(ErrorCode::Config, "unknown experiment kind");
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  auto put = [&](const std::string& name, const std::string& content) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) fail(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
  };
  put(report.name + ".json", report.json.dump(2) + "\n");
  put(report.name + ".csv", report.csv);
  for (const auto& [name, content] : report.files) put(name, content);
}

}  // namespace tailrisk::experiment
