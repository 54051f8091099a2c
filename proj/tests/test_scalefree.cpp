#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fln/scalefree.hpp"
#include "helpers/stats_oracle.hpp"

using namespace fln;

TEST_CASE("hurwitz_zeta against direct summation") {
  for (double s : {1.05, 1.41, 1.58, 2.0, 2.5, 3.7, 5.5}) {
    for (double a : {1.0, 2.0, 5.0, 30.0, 866.0}) {
      double expected = testing::zeta_direct(s, a);
      CHECK(hurwitz_zeta(s, a) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
  // riemann zeta(2) = pi^2/6
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-10));
}

TEST_CASE("the rank exponent follows from the size exponent") {
  double alpha = 1.0 / (1.41 - 1.0);
  CHECK(alpha == doctest::Approx(2.44).epsilon(0.005 / 2.44));
}

TEST_CASE("fit recovers gamma from synthetic power-law samples") {
  std::mt19937_64 rng(416);
  testing::PowerLawSampler sampler(2.5, 1);
  auto samples = sampler.sample(rng, 50'000);

  FitResult fit = fit_power_law(samples);
  CHECK(fit.gamma == doctest::Approx(2.5).epsilon(0.05 / 2.5));
  CHECK(fit.xmin <= 3);
  CHECK(fit.alpha * (fit.gamma - 1.0) == 1.0);
  CHECK(fit.ks_distance >= 0.0);
  CHECK(fit.ks_distance <= 1.0);
  CHECK(fit.n_tail >= 50);

  // chosen xmin minimizes KS over the scan
  for (const auto& [candidate, ks] : fit.xmin_scan) CHECK(fit.ks_distance <= ks);
}

TEST_CASE("estimator error shrinks with sample size") {
  std::mt19937_64 rng(417);
  testing::PowerLawSampler sampler(2.2, 1);
  double previous_error = 1e9;
  for (std::size_t n : {1'000ul, 10'000ul, 100'000ul}) {
    auto samples = sampler.sample(rng, n);
    FitResult fit = fit_power_law(samples);
    double error = std::abs(fit.gamma - 2.2);
    // expected error ~ (gamma-1)/sqrt(n_tail); allow generous slack
    CHECK(error < 5.0 * (fit.gamma - 1.0) / std::sqrt(static_cast<double>(fit.n_tail)));
    previous_error = std::min(previous_error, error);
  }
  CHECK(previous_error < 0.02);
}

TEST_CASE("fit refuses degenerate input") {
  CHECK_THROWS_AS(fit_power_law(std::vector<std::uint64_t>(30, 5)), InputError);
  CHECK_THROWS_AS(fit_power_law(std::vector<std::uint64_t>(200, 5)), InputError);
  std::vector<std::uint64_t> zeros(100, 0);
  CHECK_THROWS_AS(fit_power_law(zeros), InputError);
}

TEST_CASE("xmin scan limits narrow the candidates") {
  std::mt19937_64 rng(418);
  testing::PowerLawSampler sampler(2.5, 1);
  auto samples = sampler.sample(rng, 20'000);
  FitOptions options;
  options.xmin_min = 4;
  FitResult fit = fit_power_law(samples, options);
  CHECK(fit.xmin >= 4);
}

TEST_CASE("power-law data favors the power law over the exponential") {
  std::mt19937_64 rng(419);
  testing::PowerLawSampler sampler(2.5, 1);
  auto samples = sampler.sample(rng, 50'000);
  FitResult fit = fit_power_law(samples);
  ComparisonResult cmp = compare_distributions(samples, fit, Alternative::kExponential);
  CHECK(cmp.conclusive);
  CHECK(cmp.R > 0.0);
  CHECK(cmp.p < 0.01);
}

TEST_CASE("exponential data disfavors the power law") {
  std::mt19937_64 rng(420);
  auto samples = testing::sample_geometric(rng, 0.08, 50'000);
  // An uncapped KS scan retreats into the far tail where a steep power law
  // tracks the exponential over a narrow window; cap the scan to compare the
  // models over the bulk.
  FitOptions options;
  options.xmin_max = 20;
  FitResult fit = fit_power_law(samples, options);
  ComparisonResult cmp = compare_distributions(samples, fit, Alternative::kExponential);
  CHECK(cmp.conclusive);
  CHECK(cmp.R < 0.0);
  CHECK(cmp.p < 0.01);
}

TEST_CASE("numerical MLE alternatives run on power-law data") {
  std::mt19937_64 rng(421);
  testing::PowerLawSampler sampler(2.5, 1);
  auto samples = sampler.sample(rng, 8'000);
  FitResult fit = fit_power_law(samples);

  ComparisonResult stretched =
      compare_distributions(samples, fit, Alternative::kStretchedExponential);
  CHECK(stretched.conclusive);
  CHECK(stretched.R > 0.0);  // power law ahead of a stretched exponential here

  // The truncated power law nests the pure one, so the comparison must come
  // out a statistical tie: a near-zero statistic, nowhere near significance.
  ComparisonResult truncated =
      compare_distributions(samples, fit, Alternative::kTruncatedPowerLaw);
  CHECK(truncated.conclusive);
  CHECK(std::abs(truncated.R) < 1.0);
  CHECK(truncated.p > 0.05);

  ComparisonResult lognormal = compare_distributions(samples, fit, Alternative::kLognormal);
  CHECK(lognormal.conclusive);
}

TEST_CASE("identical per-point likelihoods force R=0, p=1") {
  auto [r, p] = vuong_statistic({0.0, 0.0, 0.0}, {10, 20, 30});
  CHECK(r == 0.0);
  CHECK(p == 1.0);
}

TEST_CASE("constant nonzero likelihood gap saturates the statistic") {
  auto [r, p] = vuong_statistic({0.5, 0.5}, {40, 60});
  CHECK(r == std::numeric_limits<double>::infinity());
  CHECK(p == 0.0);
  auto [r2, p2] = vuong_statistic({-0.5, -0.5}, {40, 60});
  CHECK(r2 == -std::numeric_limits<double>::infinity());
  CHECK(p2 == 0.0);
}

TEST_CASE("rank_frequency_series sorts descending with 1-based ranks") {
  auto series = rank_frequency_series({5, 3, 3, 1});
  REQUIRE(series.size() == 4);
  CHECK(series[0] == std::pair<std::size_t, std::uint64_t>{1, 5});
  CHECK(series[1] == std::pair<std::size_t, std::uint64_t>{2, 3});
  CHECK(series[2] == std::pair<std::size_t, std::uint64_t>{3, 3});
  CHECK(series[3] == std::pair<std::size_t, std::uint64_t>{4, 1});

  auto constant = rank_frequency_series({2, 2, 2});
  for (auto& [rank, value] : constant) CHECK(value == 2);

  // fixture in-degrees: the two 2s lead, zeros trail
  auto fixture = rank_frequency_series({2, 1, 1, 2, 1, 0, 0});
  CHECK(fixture.front().second == 2);
  CHECK(fixture.back().second == 0);
}

TEST_CASE("ccdf fractions start at 1 and decrease") {
  auto points = ccdf({1, 2, 3});
  REQUIRE(points.size() == 3);
  CHECK(points[0].second == doctest::Approx(1.0));
  CHECK(points[1].second == doctest::Approx(2.0 / 3.0));
  CHECK(points[2].second == doctest::Approx(1.0 / 3.0));

  auto single = ccdf({7});
  REQUIRE(single.size() == 1);
  CHECK(single[0].first == 7);
  CHECK(single[0].second == doctest::Approx(1.0));
}

TEST_CASE("ccdf slope of power-law samples is about -(gamma-1)") {
  std::mt19937_64 rng(422);
  testing::PowerLawSampler sampler(2.5, 1);
  auto samples = sampler.sample(rng, 50'000);
  auto points = ccdf(samples);

  // least squares on log10-log10 over the stable part of the tail
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (auto& [value, fraction] : points) {
    if (fraction * static_cast<double>(samples.size()) < 50) break;  // noisy sparse tail
    double x = std::log10(static_cast<double>(value));
    double y = std::log10(fraction);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  double slope = (static_cast<double>(m) * sxy - sx * sy) /
                 (static_cast<double>(m) * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-1.5).epsilon(0.08));
}
