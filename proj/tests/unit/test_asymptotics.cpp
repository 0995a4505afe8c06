#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tailrisk/asymptotics.hpp"
#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/distributions/parametric.hpp"
#include "tailrisk/distributions/serialization.hpp"
#include "tailrisk/distributions/transformed.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/estimators.hpp"

using namespace tailrisk;
namespace fam = tailrisk::family;

namespace {
ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Config;
}

DistributionPtr bernoulli(double p) { return make_family(fam::FiniteLattice{0.0, 1.0, {1.0 - p, p}}); }
}  // namespace

TEST(Tilt, ExponentialClosedFormGrid) {
  for (int i = 0; i < 100; ++i) {
    const double rate = 0.2 + 0.05 * i;
    const double b = (1.0 + 0.07 * (i + 1)) / rate;
    const auto s = solve_tilt(*make_family(fam::Exponential{rate}), b);
    ASSERT_TRUE(s.converged);
    EXPECT_NEAR(s.theta_star, rate - 1.0 / b, 1e-10) << rate << " " << b;
  }
}

TEST(Tilt, NormalClosedFormGrid) {
  for (int i = 0; i < 100; ++i) {
    const double mu = -2.0 + 0.04 * i;
    const double var = 0.3 + 0.03 * i;
    const double b = mu + 0.05 + 0.06 * (i % 37);
    const auto s = solve_tilt(*make_family(fam::Normal{mu, var}), b);
    EXPECT_NEAR(s.theta_star, (b - mu) / var, 1e-10);
  }
}

TEST(Tilt, GammaClosedFormGrid) {
  for (int i = 0; i < 100; ++i) {
    const double shape = 0.5 + 0.05 * i;
    const double rate = 0.5 + 0.03 * (i % 50);
    const double b = shape / rate * (1.05 + 0.04 * (i % 23));
    const auto s = solve_tilt(*make_family(fam::Gamma{shape, rate}), b);
    EXPECT_NEAR(s.theta_star, rate - shape / b, 1e-10);
  }
}

TEST(Tilt, WorkedExamples) {
  EXPECT_NEAR(solve_tilt(*make_family(fam::Exponential{1.0}), 2.0).theta_star, 0.5, 1e-10);
  EXPECT_NEAR(solve_tilt(*make_family(fam::Normal{0.0, 1.0}), 1.0).theta_star, 1.0, 1e-10);
  EXPECT_NEAR(solve_tilt(*make_family(fam::Gamma{2.0, 3.0}), 2.0).theta_star, 2.0, 1e-10);
}

TEST(Tilt, ResidualAcrossLightFamilies) {
  std::vector<std::pair<DistributionPtr, double>> cases = {
      {make_family(fam::Weibull{2.5}), 1.6},
      {std::make_shared<HalfNormalDistribution>(), 2.5},
      {make_family(fam::FiniteLattice{0.0, 1.0, {0.5, 0.2, 0.2, 0.1}}), 2.2},
      {bernoulli(0.3), 0.6},
      {truncate(make_family(fam::HalfStudentT{2.5}), 18.0), 3.0},
      {make_family(fam::Gamma{0.7, 2.0}), 3.0},
  };
  for (const auto& [d, b] : cases) {
    const auto s = solve_tilt(*d, b);
    EXPECT_TRUE(s.converged) << describe(*d);
    EXPECT_LE(std::abs(d->log_mgf_d1(s.theta_star) - b), 1e-10) << describe(*d);
    EXPECT_NEAR(s.rate, b * s.theta_star - d->log_mgf(s.theta_star), 1e-12);
    EXPECT_GT(s.rate, 0.0);
  }
}

TEST(Tilt, Errors) {
  EXPECT_EQ(code_of([] { solve_tilt(*make_family(fam::HalfStudentT{4}), 3.0); }), ErrorCode::NoMgf);
  EXPECT_EQ(code_of([] { solve_tilt(*make_family(fam::Exponential{1.0}), 1.0); }), ErrorCode::NotRare);
  EXPECT_EQ(code_of([] { solve_tilt(*make_family(fam::Exponential{1.0}), 0.5); }), ErrorCode::NotRare);
  // Tilted means of a law on {0, 1} never reach 1.
  EXPECT_EQ(code_of([] { solve_tilt(*bernoulli(0.3), 1.0); }), ErrorCode::UnattainableLevel);
  EXPECT_EQ(code_of([] { solve_tilt(*bernoulli(0.3), 1.5); }), ErrorCode::UnattainableLevel);
}

// ---------------------------------------------------------------------------

TEST(LightAsymptotic, ExponentialClosedFormAtTen) {
  const double expected =
      std::exp(-10.0 * (2.0 - std::log(3.0))) / ((2.0 / 3.0) * std::sqrt(180.0 * std::numbers::pi));
  EXPECT_NEAR(light_asymptotic(*make_family(fam::Exponential{1.0}), 10, 3.0) / expected, 1.0, 1e-12);
}

TEST(LightAsymptotic, ExponentialAgainstErlangTail) {
  auto d = make_family(fam::Exponential{1.0});
  double previous = INFINITY;
  for (int n : {10, 20, 50, 100}) {
    const double exact = oracle::erlang_sf(n, 3.0 * n);
    const double ratio = light_asymptotic(*d, n, 3.0) / exact;
    if (n == 10) EXPECT_NEAR(ratio, 1.0, 0.25);
    if (n == 50) EXPECT_NEAR(ratio, 1.0, 0.10);
    EXPECT_LT(std::abs(ratio - 1.0), std::abs(previous - 1.0)) << n;
    previous = ratio;
  }
  // Frozen from the Poisson-sum oracle.
  EXPECT_NEAR(oracle::erlang_sf(10, 30.0), 7.121750862815593e-06, 1e-18);
  EXPECT_NEAR(light_asymptotic(*d, 10, 3.0) / oracle::erlang_sf(10, 30.0), 1.0779936, 1e-7);
  EXPECT_NEAR(light_asymptotic(*d, 100, 3.0) / oracle::erlang_sf(100, 300.0), 1.0082669, 1e-7);
}

TEST(LightAsymptotic, BernoulliLatticeAgainstBinomial) {
  auto d = bernoulli(0.3);
  const LatticeOption lattice{true, std::nullopt};
  const double strict = light_asymptotic(*d, 50, 0.6, Inequality::Strict, lattice);
  const double nonstrict = light_asymptotic(*d, 50, 0.6, Inequality::NonStrict, lattice);
  const double exact_gt = oracle::binomial_sf_ge(50, 0.3, 31);
  const double exact_ge = oracle::binomial_sf_ge(50, 0.3, 30);
  EXPECT_NEAR(strict / exact_gt, 1.0, 0.20);
  EXPECT_NEAR(nonstrict / exact_ge, 1.0, 0.20);

  const double theta = std::log(3.5);  // p(1-p')/(p'(1-p)) with p' = 0.6
  EXPECT_NEAR(solve_tilt(*d, 0.6).theta_star, theta, 1e-12);
  EXPECT_NEAR(strict / nonstrict, std::exp(-theta), 1e-12);
}

TEST(LightAsymptotic, LatticeRatioIsExpMinusThetaH) {
  auto d = make_family(fam::FiniteLattice{0.0, 0.5, {0.4, 0.3, 0.2, 0.1}});
  for (int n : {5, 20, 80}) {
    for (double b : {0.7, 0.9, 1.2}) {
      const double theta = solve_tilt(*d, b).theta_star;
      const LatticeOption lattice{true, std::nullopt};
      const double r = light_asymptotic(*d, n, b, Inequality::Strict, lattice) /
                       light_asymptotic(*d, n, b, Inequality::NonStrict, lattice);
      EXPECT_NEAR(r, std::exp(-theta * 0.5), 1e-12);
    }
  }
}

TEST(LightAsymptotic, LatticePrefactorsTendToOne) {
  double prev_strict = 0.0, prev_nonstrict = 2.0;
  for (double h : {1.0, 0.1, 1e-2, 1e-4, 1e-7}) {
    const double s = lattice_prefactor(1.3, h, Inequality::Strict);
    const double ns = lattice_prefactor(1.3, h, Inequality::NonStrict);
    EXPECT_GT(s, prev_strict);
    EXPECT_LT(ns, prev_nonstrict);
    prev_strict = s;
    prev_nonstrict = ns;
  }
  EXPECT_NEAR(prev_strict, 1.0, 1e-6);
  EXPECT_NEAR(prev_nonstrict, 1.0, 1e-6);
}

TEST(LightAsymptotic, MissingSpan) {
  EXPECT_EQ(code_of([] {
              light_asymptotic(*make_family(fam::Exponential{1.0}), 10, 2.0, Inequality::Strict,
                               LatticeOption{true, std::nullopt});
            }),
            ErrorCode::MissingSpan);
  // An explicit span is accepted for any law.
  EXPECT_GT(light_asymptotic(*make_family(fam::Exponential{1.0}), 10, 2.0, Inequality::Strict,
                             LatticeOption{true, 0.5}),
            0.0);
}

TEST(LightAsymptotic, DecayRateIdentity) {
  // -(1/n) log of the asymptotic is I plus log(θ sqrt(2πnψ''))/n.
  std::vector<std::pair<DistributionPtr, double>> cases = {
      {make_family(fam::Exponential{1.0}), 3.0},
      {make_family(fam::Normal{0.0, 1.0}), 1.0},
      {make_family(fam::Gamma{2.0, 3.0}), 2.0},
  };
  for (const auto& [d, b] : cases) {
    const auto s = solve_tilt(*d, b);
    for (int n : {10, 50, 100, 500}) {
      const double decay = -log_light_asymptotic(*d, n, b) / n;
      const double correction =
          std::log(s.theta_star * std::sqrt(2.0 * std::numbers::pi * n * s.psi2)) / n;
      EXPECT_NEAR(decay, s.rate + correction, 1e-12);
    }
  }
}

TEST(LightAsymptotic, DecayRateConvergesMonotonically) {
  // The gap is |log(θ sqrt(2πnψ''))|/n, so the 1e-3 target at n = 500 needs a
  // prefactor close to 1; b = 0.028 gives θ sqrt(2π·500) ≈ 1.57.
  auto d = make_family(fam::Normal{0.0, 1.0});
  const double b = 0.028;
  const double rate = solve_tilt(*d, b).rate;
  double previous = INFINITY;
  for (int n : {10, 50, 100, 500}) {
    const double gap = std::abs(-log_light_asymptotic(*d, n, b) / n - rate);
    EXPECT_LT(gap, previous) << n;
    previous = gap;
  }
  EXPECT_LE(previous, 1e-3);

  // For other levels the gap still decreases, at the O(log n / n) rate.
  for (const auto& [dd, bb] : std::vector<std::pair<DistributionPtr, double>>{
           {make_family(fam::Exponential{1.0}), 3.0}, {bernoulli(0.3), 0.6}}) {
    const double r = solve_tilt(*dd, bb).rate;
    double prev = INFINITY;
    for (int n : {10, 50, 100, 500}) {
      const double gap = std::abs(-log_light_asymptotic(*dd, n, bb) / n - r);
      EXPECT_LT(gap, prev);
      prev = gap;
    }
  }
}

// ---------------------------------------------------------------------------

TEST(HeavyAsymptotic, SingleSummandIsSurvival) {
  auto d = make_family(fam::GeneralizedPareto{0.4});
  for (double g : {10.0, 100.0, 1e3}) EXPECT_DOUBLE_EQ(heavy_asymptotic(*d, 1, g), d->sf(g));
}

TEST(HeavyAsymptotic, FormulaAndDoubling) {
  auto d = make_family(fam::GeneralizedPareto{0.4});
  const double mu = d->mean();
  EXPECT_DOUBLE_EQ(heavy_asymptotic(*d, 10, 500.0), 10.0 * d->sf(500.0 - 9.0 * mu));
  // Doubling γ - nμ multiplies the tail by about 2^{-α} once the shift μ is negligible.
  const int n = 10;
  const double excess = 1e6;
  const double r = heavy_asymptotic(*d, n, n * mu + 2 * excess) / heavy_asymptotic(*d, n, n * mu + excess);
  EXPECT_NEAR(r, std::pow(2.0, -2.5), 1e-5);
}

TEST(HeavyAsymptotic, HalfStudentTAgainstConditionalMc) {
  auto d = make_family(fam::HalfStudentT{4});
  const int n = 10;
  const double b = level_for_probability(*d, n, 1e-5);
  const double gamma = n * b;
  const double asym = heavy_asymptotic(*d, n, gamma);
  EXPECT_NEAR(asym, 1e-5, 1e-12);
  McOptions opts;
  opts.replications = 1000000;
  opts.seed = 17;
  const auto mc = cond_mc_ak(*d, n, gamma, opts);
  EXPECT_NEAR(asym / mc.estimate, 1.0, 0.30);
}

TEST(HeavyAsymptotic, OneBigJumpMatchesConvolution) {
  // Five atoms with a far atom of mass 0.01 at 100.
  auto d = std::make_shared<FiniteLatticeDistribution>(
      0.0, 1.0, [] {
        std::vector<double> m(101, 0.0);
        m[0] = 0.3, m[1] = 0.3, m[2] = 0.2, m[3] = 0.19, m[100] = 0.01;
        return m;
      }());
  struct Case {
    int n;
    double gamma;
  };
  for (Case c : {Case{2, 60.0}, Case{3, 50.0}, Case{4, 60.0}}) {
    const double exact = exact_convolution(*d, c.n, c.gamma, Inequality::Strict);
    EXPECT_NEAR(one_big_jump(*d, c.n, c.gamma) / exact, 1.0, 0.15) << c.n;
  }
  EXPECT_NEAR(exact_convolution(*d, 3, 50.0, Inequality::Strict), 0.029701, 1e-12);
}

TEST(HeavyAsymptotic, Errors) {
  EXPECT_EQ(code_of([] { heavy_asymptotic(*make_family(fam::Exponential{1.0}), 10, 50.0); }),
            ErrorCode::WrongRegime);
  EXPECT_EQ(code_of([] { heavy_asymptotic(*make_family(fam::GeneralizedPareto{1.5}), 10, 50.0); }),
            ErrorCode::WrongRegime);
  EXPECT_EQ(code_of([] { heavy_asymptotic(*make_family(fam::GeneralizedPareto{0.4}), 10, 1.0); }),
            ErrorCode::NotRare);
}

TEST(LevelForProbability, InvertsTheAsymptotics) {
  for (const auto& d : {make_family(fam::Exponential{1.0}), make_family(fam::Normal{0.0, 1.0}),
                        DistributionPtr(std::make_shared<HalfNormalDistribution>())}) {
    for (double p : {1e-3, 1e-5, 1e-7}) {
      const double b = level_for_probability(*d, 10, p);
      EXPECT_NEAR(std::log(light_asymptotic(*d, 10, b)), std::log(p), 1e-8) << describe(*d);
    }
  }
  auto g = make_family(fam::GeneralizedPareto{0.4});
  const double b = level_for_probability(*g, 10, 1e-5);
  EXPECT_NEAR(heavy_asymptotic(*g, 10, 10 * b), 1e-5, 1e-15);
}

// ---------------------------------------------------------------------------

TEST(TruncationLevel, Examples) {
  EXPECT_NEAR(reliable_truncation_level(*make_family(fam::Exponential{1.0}), 100, 2.0),
              1.1 * 2.0 * std::log(100.0), 1e-12);
  EXPECT_NEAR(reliable_truncation_level(*make_family(fam::Normal{0.0, 1.0}), 10, 1.0),
              1.1 * 1.0 * std::log(10.0), 1e-12);
  auto g = make_family(fam::GeneralizedPareto{0.4});
  EXPECT_NEAR(reliable_truncation_level(*g, 10, 5.0), std::pow(10.0 * (5.0 - g->mean()), 1.5), 1e-9);
  EXPECT_NEAR(reliable_truncation_level(*make_family(fam::Gamma{2.0, 3.0}), 50, 2.0),
              1.1 * (2.0 / 2.0) * std::log(50.0), 1e-12);
  EXPECT_EQ(rule_name(truncation_rule_for(*make_family(fam::HalfStudentT{4}))), "power_law");
  EXPECT_EQ(rule_name(truncation_rule_for(*make_family(fam::Weibull{2.5}))), "normal");
}

TEST(TruncationLevel, ExponentialDecayRule) {
  auto d = make_family(fam::Exponential{1.0});
  const double level = reliable_truncation_level(rule::ExponentialDecay{1.0}, *d, 100, 2.0);
  EXPECT_NEAR(level, 1.1 * std::log(100.0) / (1.0 - 0.5), 1e-10);
}

TEST(TruncationLevel, SafetyAndBetaAreParameters) {
  auto d = make_family(fam::Exponential{1.0});
  EXPECT_NEAR(reliable_truncation_level(*d, 100, 2.0, {2.0}), 2.0 * 2.0 * std::log(100.0), 1e-12);
  auto g = make_family(fam::GeneralizedPareto{0.4});
  EXPECT_NEAR(reliable_truncation_level(rule::PowerLaw{2.0}, *g, 10, 5.0),
              std::pow(10.0 * (5.0 - g->mean()), 2.0), 1e-9);
}

TEST(TruncationLevel, Errors) {
  EXPECT_EQ(code_of([] { reliable_truncation_level(*make_family(fam::LogNormal{0, 1}), 10, 5.0); }),
            ErrorCode::UnsupportedClass);
  EXPECT_EQ(code_of([] { reliable_truncation_level(*make_family(fam::Exponential{1.0}), 10, 0.5); }),
            ErrorCode::NotRare);
  EXPECT_EQ(code_of([] { reliable_truncation_level(*make_family(fam::Exponential{1.0}), 1, 2.0); }),
            ErrorCode::ParameterDomain);
}

TEST(TruncationLevel, UnreliableBound) {
  EXPECT_NEAR(unreliable_truncation_bound(1.0, 100, 3.0), 1.0 + 100.0 * 2.0 / std::sqrt(std::log(100.0)),
              1e-12);
  EXPECT_NEAR(unreliable_truncation_bound(1.0, 100, 3.0, 2.0),
              1.0 + 2.0 * 100.0 * 2.0 / std::sqrt(std::log(100.0)), 1e-12);
}

// ---------------------------------------------------------------------------

TEST(SampleSize, Examples) {
  auto e = min_sample_size(regime::ExponentialLike{1.0}, 100, 2.0, 1.0);
  EXPECT_NEAR(e.value, 1e4, 1e-8);
  EXPECT_NEAR(e.log10_value, 4.0, 1e-12);

  auto h = min_sample_size(regime::HeavyPowerLaw{2.5, 1.5}, 10, 0.0, 0.0, 1e-5);
  EXPECT_NEAR(h.log10_value, 9.0, 1e-12);
  EXPECT_NEAR(h.value / 1e9, 1.0, 1e-12);

  auto g = min_sample_size(regime::NormalLike{1.0, 1.0}, 10, 1.0, 0.0);
  EXPECT_NEAR(g.log10_value, 0.5 * std::log(10.0), 1e-12);
}

TEST(SampleSize, OtherRows) {
  auto h = min_sample_size(regime::HeavyPowerLaw{2.5, 1.5}, 10, 5.0, 1.0);
  EXPECT_NEAR(h.log10_value, 2.5 * 1.5 * std::log10(40.0), 1e-12);

  auto e = min_sample_size(regime::ExponentialLike{1.0}, 10, 0.0, 1.0, 1e-5);
  EXPECT_NEAR(e.log10_value, 1.0 + std::sqrt(-2.0 * std::log(1e-5) / 10.0), 1e-12);

  auto g = min_sample_size(regime::NormalLike{1.0, 1.0}, 10, 1.0, 0.0, 1e-5);
  EXPECT_NEAR(g.log10_value, -std::log(1e-5) * std::log(10.0) / 10.0, 1e-12);

  auto big = min_sample_size(regime::NormalLike{0.01, 1.0}, 1000, 1.0, 0.0);
  EXPECT_TRUE(std::isinf(big.value));
  EXPECT_NEAR(big.log10_value, 50.0 * std::log(1000.0) * 3.0, 1e-9);
}

TEST(SampleSize, Errors) {
  EXPECT_EQ(code_of([] { min_sample_size(regime::HeavyPowerLaw{2.5, 1.5}, 10, 1.0, 0.0, 1.5); }),
            ErrorCode::ParameterDomain);
  EXPECT_EQ(code_of([] { min_sample_size(regime::ExponentialLike{-1.0}, 10, 1.0, 0.0); }),
            ErrorCode::ParameterDomain);
}
