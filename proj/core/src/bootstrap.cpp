#include "tailrisk/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/distributions/spliced.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/parallel.hpp"

namespace tailrisk {
namespace {
constexpr std::uint64_t kResampleStream = 1;
constexpr std::uint64_t kInnerStream = 2;
constexpr std::uint64_t kDataStream = 3;
constexpr std::uint64_t kCiStream = 4;

std::size_t percentile_position(double x, std::size_t count) {
  const double r = std::round(x);
  const double c = std::abs(x - r) <= 1e-9 ? r : std::ceil(x);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(c, 1.0)), 1, count);
}

template <class MakeLaw>
ConfidenceInterval run_bootstrap(std::span<const double> data, int n, double gamma,
                                 const BootstrapOptions& opts, const CiMethod& method,
                                 MakeLaw&& make_law) {
  require(!data.empty(), ErrorCode::EmptyData, "bootstrap: empty data");
  require(opts.resamples >= 2, ErrorCode::ParameterDomain, "bootstrap: need B >= 2");
  require(opts.level > 0.0 && opts.level < 1.0, ErrorCode::ParameterDomain,
          "bootstrap: level must lie in (0, 1)");
  const std::size_t size = data.size();
  std::vector<double> estimates(opts.resamples, 0.0);
  std::vector<char> ok(opts.resamples, 0);
  parallel_for(opts.resamples, opts.threads, [&](std::uint64_t r) {
    Rng rng(opts.seed, {kResampleStream, r});
    std::vector<double> resample(size);
    for (double& x : resample) x = data[rng.index(size)];
    try {
      const DistributionPtr law = make_law(std::move(resample));
      McOptions mc;
      mc.replications = opts.inner.replications;
      mc.seed = derive_seed(opts.seed, {kInnerStream, r});
      mc.threads = 1;
      estimates[r] = estimate_tail(*law, n, gamma, opts.inner.choice, mc).estimate;
      ok[r] = 1;
    } catch (const Error&) {
      ok[r] = 0;
    }
  });
  std::vector<double> good;
  for (std::size_t r = 0; r < opts.resamples; ++r) {
    if (ok[r]) good.push_back(estimates[r]);
  }
  const std::size_t failures = opts.resamples - good.size();
  if (static_cast<double>(failures) > kMaxBootstrapFailureRate * static_cast<double>(opts.resamples) ||
      good.empty()) {
    fail(ErrorCode::BootstrapFailure,
         fmt::format("bootstrap: {} of {} resamples failed", failures, opts.resamples));
  }
  ConfidenceInterval ci = percentile_interval(std::move(good), opts.level);
  ci.failures = failures;
  ci.method = method;
  return ci;
}
}  // namespace

std::string CiMethod::label() const {
  if (kind == Kind::Nonparametric) return "nonparametric";
  return fmt::format("gpd_{}", to_string(fit));
}

nlohmann::json CiMethod::to_json() const {
  nlohmann::json j = {{"kind", kind == Kind::Nonparametric ? "nonparametric" : "gpd_spliced"}};
  if (kind == Kind::GpdSpliced) {
    j["fit"] = std::string(to_string(fit));
    j["tail_quantile"] = tail_quantile;
  }
  return j;
}

nlohmann::json ConfidenceInterval::to_json() const {
  return {{"lower", lower},
          {"upper", upper},
          {"level", level},
          {"failures", failures},
          {"method", method.to_json()},
          {"resample_estimates", resample_estimates}};
}

ConfidenceInterval percentile_interval(std::vector<double> estimates, double level) {
  require(!estimates.empty(), ErrorCode::EmptyData, "percentile_interval: no estimates");
  require(level > 0.0 && level < 1.0, ErrorCode::ParameterDomain,
          "percentile_interval: level must lie in (0, 1)");
  ConfidenceInterval ci;
  ci.level = level;
  std::vector<double> sorted = estimates;
  std::sort(sorted.begin(), sorted.end());
  const double alpha = 1.0 - level;
  const double b = static_cast<double>(sorted.size());
  ci.lower = sorted[percentile_position(b * alpha / 2.0, sorted.size()) - 1];
  ci.upper = sorted[percentile_position(b * (1.0 - alpha / 2.0), sorted.size()) - 1];
  ci.resample_estimates = std::move(estimates);
  return ci;
}

ConfidenceInterval nonparam_bootstrap_ci(std::span<const double> data, int n, double gamma,
                                         const BootstrapOptions& opts) {
  return run_bootstrap(data, n, gamma, opts, CiMethod{}, [](std::vector<double> resample) {
    return DistributionPtr(empirical_from(std::move(resample)));
  });
}

ConfidenceInterval gpd_bootstrap_ci(std::span<const double> data, int n, double gamma,
                                    double tail_quantile, GpdMethod fit,
                                    const BootstrapOptions& opts) {
  require(tail_quantile > 0.0 && tail_quantile < 0.5, ErrorCode::ParameterDomain,
          "gpd_bootstrap_ci: tail quantile must lie in (0, 0.5)");
  const CiMethod method{CiMethod::Kind::GpdSpliced, fit, tail_quantile};
  return run_bootstrap(data, n, gamma, opts, method, [&](std::vector<double> resample) {
    const auto emp = empirical_from(std::move(resample));
    const auto excess = tail_excesses(*emp, tail_quantile);
    GpdFit g;
    try {
      g = gpd_fit(excess, fit, tail_threshold(*emp, tail_quantile));
    } catch (const GpdConvergenceError& e) {
      g = e.best();
    }
    return DistributionPtr(splice(*emp, tail_quantile, g.params()));
  });
}

// ---------------------------------------------------------------------------

nlohmann::json CoverageReport::to_json() const {
  nlohmann::json cis = nlohmann::json::array();
  for (const auto& ci : intervals) {
    cis.push_back({{"lower", ci.lower}, {"upper", ci.upper}, {"failures", ci.failures}});
  }
  return {{"replications", replications},
          {"failed_replications", failed_replications},
          {"coverage", coverage},
          {"mean_width", mean_width},
          {"true_p", true_p},
          {"width_over_p", width_over_p},
          {"intervals", cis},
          {"config", config}};
}

std::string CoverageReport::csv_header() {
  return "tail_qtl,method,sample_size,coverage,ci_width\n";
}

std::string CoverageReport::csv_row(const CiMethod& method, std::size_t sample_size) const {
  const std::string q = method.kind == CiMethod::Kind::GpdSpliced
                            ? fmt::format("{:g}", method.tail_quantile)
                            : std::string("none");
  return fmt::format("{},{},{},{:.17g},{:.17g}\n", q, method.label(), sample_size, coverage,
                     mean_width);
}

CoverageReport coverage_study(const Distribution& truth, double true_p,
                              const CoverageOptions& opts, const CiProcedure& procedure,
                              nlohmann::json config) {
  require(opts.replications >= 1, ErrorCode::ParameterDomain, "coverage_study: need replications");
  require(opts.data_size >= 1, ErrorCode::ParameterDomain, "coverage_study: data size must be >= 1");
  std::vector<ConfidenceInterval> cis(opts.replications);
  std::vector<char> ok(opts.replications, 0);
  parallel_for(opts.replications, opts.threads, [&](std::uint64_t i) {
    Rng rng(opts.seed, {kDataStream, i});
    std::vector<double> data(opts.data_size);
    for (double& x : data) x = truth.sample(rng);
    try {
      cis[i] = procedure(data, derive_seed(opts.seed, {kCiStream, i}));
      ok[i] = 1;
    } catch (const Error&) {
      ok[i] = 0;
    }
  });
  CoverageReport rep;
  rep.true_p = true_p;
  rep.config = std::move(config);
  std::size_t covered = 0;
  double width_sum = 0.0;
  for (std::size_t i = 0; i < opts.replications; ++i) {
    if (!ok[i]) {
      ++rep.failed_replications;
      continue;
    }
    ++rep.replications;
    if (cis[i].contains(true_p)) ++covered;
    width_sum += cis[i].width();
    rep.width_over_p.push_back(true_p > 0.0 ? cis[i].width() / true_p : 0.0);
    rep.intervals.push_back(std::move(cis[i]));
  }
  if (rep.replications > 0) {
    rep.coverage = static_cast<double>(covered) / static_cast<double>(rep.replications);
    rep.mean_width = width_sum / static_cast<double>(rep.replications);
  }
  return rep;
}

}  // namespace tailrisk
