#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "tailrisk/bootstrap.hpp"
#include "tailrisk/distributions/parametric.hpp"
#include "tailrisk/errors.hpp"

using namespace tailrisk;
namespace fam = tailrisk::family;

namespace {
std::vector<double> draw(const Distribution& d, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = d.sample(rng);
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Config;
}

ConfidenceInterval fixed_interval(double lo, double hi) {
  ConfidenceInterval ci;
  ci.lower = lo;
  ci.upper = hi;
  return ci;
}
}  // namespace

TEST(Percentile, TwoResamples) {
  const auto ci = percentile_interval({0.3, 0.1}, 0.95);
  EXPECT_EQ(ci.lower, 0.1);
  EXPECT_EQ(ci.upper, 0.3);
  EXPECT_EQ(ci.resample_estimates, (std::vector<double>{0.3, 0.1}));
}

TEST(Percentile, OrderStatisticPositions) {
  std::vector<double> v(100);
  Rng rng(3);
  for (auto& x : v) x = rng.uniform();
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  // (level, lower position, upper position), 1-based.
  struct Case {
    double level;
    std::size_t lo, hi;
  };
  for (Case c : {Case{0.95, 3, 98}, Case{0.90, 5, 95}, Case{0.99, 1, 100}, Case{0.5, 25, 75},
                 Case{0.8, 10, 90}}) {
    const auto ci = percentile_interval(v, c.level);
    EXPECT_EQ(ci.lower, sorted[c.lo - 1]) << c.level;
    EXPECT_EQ(ci.upper, sorted[c.hi - 1]) << c.level;
  }
  // B = 37: ceil(0.925) = 1, ceil(36.075) = 37.
  v.resize(37);
  sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const auto ci = percentile_interval(v, 0.95);
  EXPECT_EQ(ci.lower, sorted[0]);
  EXPECT_EQ(ci.upper, sorted[36]);
}

TEST(Percentile, NestedInLevel) {
  Rng rng(4);
  for (std::size_t b : {2u, 7u, 50u, 100u, 1000u}) {
    std::vector<double> v(b);
    for (auto& x : v) x = std::exp(3.0 * rng.uniform());
    double lo = -INFINITY, hi = INFINITY;
    for (double level : {0.99, 0.95, 0.9, 0.8, 0.5}) {
      const auto ci = percentile_interval(v, level);
      EXPECT_GE(ci.lower, lo);
      EXPECT_LE(ci.upper, hi);
      EXPECT_LE(ci.lower, ci.upper);
      lo = ci.lower;
      hi = ci.upper;
    }
  }
}

TEST(Percentile, Errors) {
  EXPECT_THROW(percentile_interval({}, 0.95), Error);
  EXPECT_THROW(percentile_interval({1.0, 2.0}, 1.5), Error);
}

// ---------------------------------------------------------------------------

TEST(Nonparametric, SingleAtomIsDegenerate) {
  const std::vector<double> data(40, 2.0);
  BootstrapOptions opts;
  opts.resamples = 20;
  opts.inner.replications = 500;
  const auto ci = nonparam_bootstrap_ci(data, 3, 5.0, opts);
  EXPECT_EQ(ci.lower, 1.0);
  EXPECT_EQ(ci.upper, 1.0);
  EXPECT_EQ(ci.resample_estimates.size(), 20u);
  EXPECT_EQ(ci.failures, 0u);
  EXPECT_EQ(ci.method.label(), "nonparametric");
}

TEST(Nonparametric, DeterministicAcrossWorkers) {
  const auto data = draw(*make_family(fam::HalfStudentT{4}), 500, 12);
  BootstrapOptions opts;
  opts.resamples = 30;
  opts.inner.replications = 2000;
  opts.seed = 77;
  opts.threads = 1;
  const auto a = nonparam_bootstrap_ci(data, 10, 40.0, opts);
  opts.threads = 4;
  const auto b = nonparam_bootstrap_ci(data, 10, 40.0, opts);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  opts.seed = 78;
  const auto c = nonparam_bootstrap_ci(data, 10, 40.0, opts);
  EXPECT_NE(a.resample_estimates, c.resample_estimates);
}

TEST(Nonparametric, ResampleEstimatesVaryAndBracketTheFullData) {
  const auto data = draw(*make_family(fam::Exponential{1.0}), 200, 5);
  BootstrapOptions opts;
  opts.resamples = 50;
  opts.inner.replications = 5000;
  const auto ci = nonparam_bootstrap_ci(data, 10, 25.0, opts);
  EXPECT_LT(ci.lower, ci.upper);
  EXPECT_GT(ci.lower, 0.0);
}

TEST(GpdSpliced, FitsEachResample) {
  const auto data = draw(*make_family(fam::GeneralizedPareto{0.25}), 2000, 8);
  BootstrapOptions opts;
  opts.resamples = 20;
  opts.inner.replications = 2000;
  opts.seed = 1;
  opts.threads = 1;
  const auto a = gpd_bootstrap_ci(data, 10, 200.0, 0.05, GpdMethod::Pwm, opts);
  EXPECT_EQ(a.method.label(), "gpd_pwm");
  EXPECT_EQ(a.resample_estimates.size(), 20u);
  EXPECT_GT(a.lower, 0.0);
  opts.threads = 3;
  const auto b = gpd_bootstrap_ci(data, 10, 200.0, 0.05, GpdMethod::Pwm, opts);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(GpdSpliced, TooFewExcessesFailsTheBootstrap) {
  const auto data = draw(*make_family(fam::Exponential{1.0}), 100, 2);
  BootstrapOptions opts;
  opts.resamples = 10;
  opts.inner.replications = 100;
  // 5% of 100 points leaves 5 excesses, below the fitting minimum.
  EXPECT_EQ(code_of([&] { gpd_bootstrap_ci(data, 5, 20.0, 0.05, GpdMethod::Mle, opts); }),
            ErrorCode::BootstrapFailure);
}

// ---------------------------------------------------------------------------

TEST(Coverage, VacuousIntervals) {
  auto truth = make_family(fam::Exponential{1.0});
  CoverageOptions opts;
  opts.data_size = 10;
  opts.replications = 20;
  const auto all = coverage_study(*truth, 0.3, opts, [](auto, auto) { return fixed_interval(0, 1); });
  EXPECT_EQ(all.coverage, 1.0);
  EXPECT_EQ(all.mean_width, 1.0);
  const auto none = coverage_study(*truth, 0.3, opts, [](auto, auto) { return fixed_interval(0, 0); });
  EXPECT_EQ(none.coverage, 0.0);
  EXPECT_EQ(none.mean_width, 0.0);
  EXPECT_EQ(none.width_over_p.size(), 20u);
}

TEST(Coverage, CalibratedNormalTheoryInterval) {
  // X̄ ± z σ/√N around a Normal(μ, 1) mean covers μ with probability exactly `level`.
  const double mu = 0.3;
  auto truth = make_family(fam::Normal{mu, 1.0});
  CoverageOptions opts;
  opts.data_size = 50;
  opts.replications = 400;
  opts.seed = 2024;
  for (const auto& [level, z] : {std::pair{0.95, 1.959963984540054}, std::pair{0.8, 1.2815515655446004}}) {
    const auto report = coverage_study(*truth, mu, opts, [z = z](std::span<const double> x, auto) {
      double s = 0.0;
      for (double v : x) s += v;
      const double m = s / x.size();
      const double h = z / std::sqrt(static_cast<double>(x.size()));
      return fixed_interval(m - h, m + h);
    });
    EXPECT_NEAR(report.coverage, level, 3.0 * std::sqrt(level * (1 - level) / opts.replications));
  }
}

TEST(Coverage, FailedReplicationsAreExcluded) {
  auto truth = make_family(fam::Normal{0.0, 1.0});
  CoverageOptions opts;
  opts.data_size = 5;
  opts.replications = 200;
  const auto r = coverage_study(*truth, 0.5, opts, [](std::span<const double> x, auto) {
    if (x[0] > 0.0) throw Error(ErrorCode::BootstrapFailure, "synthetic");
    return fixed_interval(0, 1);
  });
  EXPECT_GT(r.failed_replications, 50u);
  EXPECT_LT(r.failed_replications, 150u);
  EXPECT_EQ(r.coverage, 1.0);
  EXPECT_EQ(r.intervals.size() + r.failed_replications, 200u);
}

TEST(Coverage, DeterministicAcrossWorkers) {
  auto truth = make_family(fam::HalfStudentT{4});
  CoverageOptions opts;
  opts.data_size = 300;
  opts.replications = 10;
  opts.seed = 9;
  auto procedure = [](std::span<const double> x, std::uint64_t seed) {
    BootstrapOptions b;
    b.resamples = 10;
    b.inner.replications = 1000;
    b.seed = seed;
    return nonparam_bootstrap_ci(x, 10, 40.0, b);
  };
  opts.threads = 1;
  const auto a = coverage_study(*truth, 1e-3, opts, procedure);
  opts.threads = 4;
  const auto b = coverage_study(*truth, 1e-3, opts, procedure);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(Coverage, CsvRow) {
  CoverageReport r;
  r.coverage = 0.9;
  r.mean_width = 2.5e-5;
  CiMethod m;
  EXPECT_EQ(CoverageReport::csv_header(), "tail_qtl,method,sample_size,coverage,ci_width\n");
  EXPECT_EQ(r.csv_row(m, 100), "none,nonparametric,100,0.90000000000000002,2.5000000000000001e-05\n");
  m.kind = CiMethod::Kind::GpdSpliced;
  m.fit = GpdMethod::Mle;
  m.tail_quantile = 0.005;
  EXPECT_EQ(r.csv_row(m, 10000).substr(0, 21), "0.005,gpd_mle,10000,0");
}
