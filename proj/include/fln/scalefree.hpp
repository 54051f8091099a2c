#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fln/ids.hpp"

namespace fln {

// Discrete power-law fit over the tail x >= xmin. gamma is the fitted density
// exponent, alpha = 1/(gamma - 1) the rank exponent derived from it.
struct FitResult {
  std::uint64_t xmin = 1;
  double gamma = 0.0;
  double alpha = 0.0;
  double ks_distance = 1.0;
  std::size_t n_tail = 0;
  // KS distance per candidate xmin, in scan order (ascending candidate).
  std::vector<std::pair<std::uint64_t, double>> xmin_scan;
};

enum class Alternative {
  kExponential,
  kStretchedExponential,
  kLognormal,
  kTruncatedPowerLaw,
};

const char* alternative_name(Alternative alt);

// Normalized log-likelihood ratio test of the power-law fit against one
// alternative fitted on the same tail. R > 0 favors the power law; the sign is
// meaningful only when p is below the chosen significance level.
struct ComparisonResult {
  Alternative alternative = Alternative::kExponential;
  double R = 0.0;
  double p = 1.0;
  bool conclusive = true;  // false when the alternative MLE did not converge
  std::string note;
};

// Hurwitz zeta: sum over k >= 0 of (k + a)^(-s), for s > 1, a > 0. Direct
// series with an Euler-Maclaurin tail, relative error below 1e-10.
double hurwitz_zeta(double s, double a);

// Limits on the xmin scan; 0 for xmin_max means unbounded.
struct FitOptions {
  std::uint64_t xmin_min = 1;
  std::uint64_t xmin_max = 0;
};

// MLE fit with xmin chosen to minimize the Kolmogorov-Smirnov distance
// between empirical and fitted tail CDFs. Needs at least 50 samples >= 1 and
// at least two distinct values; zeros must be filtered out by the caller.
FitResult fit_power_law(const std::vector<std::uint64_t>& samples,
                        const FitOptions& options = {});

ComparisonResult compare_distributions(const std::vector<std::uint64_t>& samples,
                                       const FitResult& fit, Alternative alternative);

// (R, p) from per-point log-likelihood differences with multiplicities:
// R = sum(d) / (sigma * sqrt(n)), p two-sided normal. Identical likelihoods
// give R = 0, p = 1 by construction.
std::pair<double, double> vuong_statistic(const std::vector<double>& diffs,
                                          const std::vector<std::uint64_t>& counts);

// Values sorted descending, paired with 1-based rank.
std::vector<std::pair<std::size_t, std::uint64_t>> rank_frequency_series(
    const std::vector<std::uint64_t>& samples);

// (value, fraction of samples >= value) per unique value, ascending.
std::vector<std::pair<std::uint64_t, double>> ccdf(
    const std::vector<std::uint64_t>& samples);

}  // namespace fln
