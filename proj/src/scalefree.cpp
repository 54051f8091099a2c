#include "fln/scalefree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace fln {
namespace {

constexpr double kGammaLo = 1.01;
constexpr double kGammaHi = 6.0;
constexpr double kGoldenTol = 1e-6;
constexpr std::size_t kMinTail = 50;

// Tail sample multiset collapsed to (value, count) pairs, ascending.
struct Tail {
  std::vector<std::uint64_t> values;
  std::vector<std::uint64_t> counts;
  std::uint64_t xmin = 1;
  std::size_t n = 0;
  double sum_log = 0.0;  // sum of ln(x) over the multiset
};

Tail make_tail(const std::vector<std::uint64_t>& sorted, std::size_t first_index) {
  Tail t;
  t.xmin = sorted[first_index];
  t.n = sorted.size() - first_index;
  for (std::size_t i = first_index; i < sorted.size(); ++i) {
    if (t.values.empty() || t.values.back() != sorted[i]) {
      t.values.push_back(sorted[i]);
      t.counts.push_back(0);
    }
    ++t.counts.back();
    t.sum_log += std::log(static_cast<double>(sorted[i]));
  }
  return t;
}

// Maximizes a unimodal function on [lo, hi] by golden-section search.
double golden_max(double lo, double hi, double tol,
                  const std::function<double(double)>& f) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return (fc > fd) ? c : d;
}

double power_law_loglik(const Tail& tail, double gamma) {
  return -static_cast<double>(tail.n) * std::log(hurwitz_zeta(gamma, static_cast<double>(tail.xmin))) -
         gamma * tail.sum_log;
}

// Sup distance between the empirical tail CDF and the fitted discrete
// power-law CDF, evaluated at the observed tail values.
double ks_distance(const Tail& tail, double gamma) {
  const double z_xmin = hurwitz_zeta(gamma, static_cast<double>(tail.xmin));
  double seen = 0.0;
  double dist = 0.0;
  for (std::size_t i = 0; i < tail.values.size(); ++i) {
    seen += static_cast<double>(tail.counts[i]);
    double empirical = seen / static_cast<double>(tail.n);
    double fitted = 1.0 - hurwitz_zeta(gamma, static_cast<double>(tail.values[i]) + 1.0) / z_xmin;
    dist = std::max(dist, std::abs(empirical - fitted));
  }
  return dist;
}

// alpha such that alpha * (gamma - 1) rounds to exactly 1.0 when a
// representable neighbor allows it.
double derive_alpha(double gamma) {
  const double x = gamma - 1.0;
  double alpha = 1.0 / x;
  if (alpha * x == 1.0) return alpha;
  double up = alpha, down = alpha;
  for (int i = 0; i < 4; ++i) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    if (up * x == 1.0) return up;
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (down * x == 1.0) return down;
  }
  return alpha;
}

double normal_two_sided_p(double r) {
  return std::erfc(std::abs(r) / std::sqrt(2.0));
}

// ---- alternative-distribution machinery ------------------------------------

// Log of the unnormalized weight at integer x for each alternative family.
// theta layout: stretched (ln lambda, ln beta), lognormal (mu, ln sigma),
// truncated power law (g, ln lambda).
double log_weight(Alternative alt, const std::array<double, 2>& theta, double x) {
  switch (alt) {
    case Alternative::kExponential: {
      return -std::exp(theta[0]) * x;  // handled closed-form elsewhere
    }
    case Alternative::kStretchedExponential: {
      double lambda = std::exp(theta[0]);
      double beta = std::exp(theta[1]);
      return (beta - 1.0) * std::log(x) - lambda * std::pow(x, beta);
    }
    case Alternative::kLognormal: {
      double mu = theta[0];
      double sigma = std::exp(theta[1]);
      double d = std::log(x) - mu;
      return -std::log(x) - d * d / (2.0 * sigma * sigma);
    }
    case Alternative::kTruncatedPowerLaw: {
      double g = theta[0];
      double lambda = std::exp(theta[1]);
      return -g * std::log(x) - lambda * x;
    }
  }
  return -std::numeric_limits<double>::infinity();
}

// Keeps the simplex away from corners where the normalizer would need
// millions of terms (or none exists).
bool theta_in_box(Alternative alt, const std::array<double, 2>& theta) {
  switch (alt) {
    case Alternative::kExponential:
      return theta[0] > -16.0 && theta[0] < 6.0;
    case Alternative::kStretchedExponential:
      return theta[0] > -25.0 && theta[0] < 6.0 && theta[1] > std::log(0.05) &&
             theta[1] < std::log(3.0);
    case Alternative::kLognormal:
      return theta[0] > -25.0 && theta[0] < 35.0 && theta[1] > std::log(0.05) &&
             theta[1] < std::log(12.0);
    case Alternative::kTruncatedPowerLaw:
      return theta[0] > -3.0 && theta[0] < 9.0 && theta[1] > -25.0 && theta[1] < 6.0;
  }
  return false;
}

// Discrete log-normalizer ln sum_{x >= xmin} w(x). Terms up to just past the
// largest sample are summed exactly (log-sum-exp); the remaining tail is the
// Euler-Maclaurin integral approximation sum_{x>X} w(x) ~ int_{X+1/2} w dx,
// evaluated by Simpson on doubling blocks in log space.
double log_normalizer(Alternative alt, const std::array<double, 2>& theta,
                      std::uint64_t xmin, std::uint64_t max_sample) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double log_z = kNegInf;
  auto accumulate = [&log_z](double term) {
    if (std::isnan(term)) return false;
    if (term == kNegInf) return true;
    if (term > log_z) {
      log_z = term + std::log1p(log_z == kNegInf ? 0.0 : std::exp(log_z - term));
    } else {
      log_z += std::log1p(std::exp(term - log_z));
    }
    return true;
  };

  const std::uint64_t exact_end = std::min(max_sample + 8, xmin + 400'000);
  for (std::uint64_t x = xmin; x <= exact_end; ++x)
    if (!accumulate(log_weight(alt, theta, static_cast<double>(x)))) return kNegInf;
  if (log_z == kNegInf) return kNegInf;

  // Tail integral over [exact_end + 1/2, inf), one doubling block at a time.
  double block_lo = static_cast<double>(exact_end) + 0.5;
  for (int block = 0; block < 400; ++block) {
    double block_hi = block_lo * 2.0;
    constexpr int kSteps = 32;  // Simpson panels per block, in u = ln x
    const double u_lo = std::log(block_lo), u_hi = std::log(block_hi);
    const double h = (u_hi - u_lo) / kSteps;
    double integral = 0.0;
    for (int i = 0; i <= kSteps; ++i) {
      double u = u_lo + h * i;
      double fx = std::exp(log_weight(alt, theta, std::exp(u)) + u);  // w(x) dx = w(e^u) e^u du
      double coeff = (i == 0 || i == kSteps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      integral += coeff * fx;
    }
    integral *= h / 3.0;
    if (integral > 0.0 && !accumulate(std::log(integral))) return kNegInf;
    if (std::log(std::max(integral, 1e-300)) < log_z + std::log(1e-14)) return log_z;
    block_lo = block_hi;
  }
  return kNegInf;  // tail failed to become negligible
}

// Tail log-likelihood of an alternative with parameters theta.
double alternative_loglik(Alternative alt, const std::array<double, 2>& theta,
                          const Tail& tail, std::uint64_t max_sample) {
  if (!theta_in_box(alt, theta)) return -std::numeric_limits<double>::infinity();
  double log_z = log_normalizer(alt, theta, tail.xmin, max_sample);
  if (!std::isfinite(log_z)) return -std::numeric_limits<double>::infinity();
  double ll = -static_cast<double>(tail.n) * log_z;
  for (std::size_t i = 0; i < tail.values.size(); ++i)
    ll += static_cast<double>(tail.counts[i]) *
          log_weight(alt, theta, static_cast<double>(tail.values[i]));
  return std::isnan(ll) ? -std::numeric_limits<double>::infinity() : ll;
}

// Plain Nelder-Mead maximizer in two dimensions, deterministic.
struct SimplexResult {
  std::array<double, 2> theta{};
  double value = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

SimplexResult nelder_mead_max(const std::function<double(const std::array<double, 2>&)>& f,
                              std::array<double, 2> start, double scale) {
  using Point = std::array<double, 2>;
  struct Vertex {
    Point x;
    double neg;  // minimizing -f
  };
  auto eval = [&](const Point& p) { return -f(p); };

  std::array<Vertex, 3> s;
  s[0] = {start, eval(start)};
  s[1] = {{start[0] + scale, start[1]}, 0.0};
  s[1].neg = eval(s[1].x);
  s[2] = {{start[0], start[1] + scale}, 0.0};
  s[2].neg = eval(s[2].x);

  SimplexResult result;
  for (int iter = 0; iter < 600; ++iter) {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.neg < b.neg; });
    double spread = std::abs(s[2].neg - s[0].neg);
    double width = std::max(std::abs(s[2].x[0] - s[0].x[0]), std::abs(s[2].x[1] - s[0].x[1]));
    if (std::isfinite(s[0].neg) && spread < 1e-9 && width < 1e-7) {
      result.converged = true;
      break;
    }
    Point centroid{(s[0].x[0] + s[1].x[0]) / 2.0, (s[0].x[1] + s[1].x[1]) / 2.0};
    auto blend = [&](double t) {
      return Point{centroid[0] + t * (centroid[0] - s[2].x[0]),
                   centroid[1] + t * (centroid[1] - s[2].x[1])};
    };
    Point refl = blend(1.0);
    double refl_neg = eval(refl);
    if (refl_neg < s[0].neg) {
      Point exp_pt = blend(2.0);
      double exp_neg = eval(exp_pt);
      s[2] = (exp_neg < refl_neg) ? Vertex{exp_pt, exp_neg} : Vertex{refl, refl_neg};
    } else if (refl_neg < s[1].neg) {
      s[2] = {refl, refl_neg};
    } else {
      Point con = blend(refl_neg < s[2].neg ? 0.5 : -0.5);
      double con_neg = eval(con);
      if (con_neg < std::min(refl_neg, s[2].neg)) {
        s[2] = {con, con_neg};
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x = {(s[i].x[0] + s[0].x[0]) / 2.0, (s[i].x[1] + s[0].x[1]) / 2.0};
          s[i].neg = eval(s[i].x);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.neg < b.neg; });
  result.theta = s[0].x;
  result.value = -s[0].neg;
  return result;
}

// Per-point log-likelihoods for the fitted alternative, aligned with
// tail.values. gamma_hint seeds the truncated power law near the pure fit.
// Returns false when no start converges.
bool fit_alternative(Alternative alt, const Tail& tail, std::uint64_t max_sample,
                     double gamma_hint, std::vector<double>& point_logliks,
                     std::string& note) {
  // Exponential has a closed-form MLE on the shifted support.
  if (alt == Alternative::kExponential) {
    double mean_excess = 0.0;
    for (std::size_t i = 0; i < tail.values.size(); ++i)
      mean_excess += static_cast<double>(tail.counts[i]) *
                     static_cast<double>(tail.values[i] - tail.xmin);
    mean_excess /= static_cast<double>(tail.n);
    if (mean_excess <= 0.0) {
      note = "exponential MLE degenerate: all tail samples equal xmin";
      return false;
    }
    double lambda = std::log1p(1.0 / mean_excess);
    double log_norm = std::log1p(-std::exp(-lambda));
    point_logliks.resize(tail.values.size());
    for (std::size_t i = 0; i < tail.values.size(); ++i)
      point_logliks[i] = log_norm - lambda * static_cast<double>(tail.values[i] - tail.xmin);
    return true;
  }

  double mean = 0.0, mean_log = 0.0;
  for (std::size_t i = 0; i < tail.values.size(); ++i) {
    mean += static_cast<double>(tail.counts[i]) * static_cast<double>(tail.values[i]);
    mean_log += static_cast<double>(tail.counts[i]) * std::log(static_cast<double>(tail.values[i]));
  }
  mean /= static_cast<double>(tail.n);
  mean_log /= static_cast<double>(tail.n);
  double var_log = 0.0;
  for (std::size_t i = 0; i < tail.values.size(); ++i) {
    double d = std::log(static_cast<double>(tail.values[i])) - mean_log;
    var_log += static_cast<double>(tail.counts[i]) * d * d;
  }
  var_log /= static_cast<double>(tail.n);

  std::vector<std::array<double, 2>> starts;
  switch (alt) {
    case Alternative::kStretchedExponential:
      for (double beta : {0.3, 0.6, 1.0})
        starts.push_back({std::log(1.0 / std::pow(mean, beta)), std::log(beta)});
      break;
    case Alternative::kLognormal:
      starts.push_back({mean_log, 0.5 * std::log(std::max(var_log, 1e-4))});
      starts.push_back({mean_log - 1.0, 0.5 * std::log(std::max(var_log, 1e-4)) + 0.5});
      break;
    case Alternative::kTruncatedPowerLaw:
      starts.push_back({gamma_hint, -15.0});  // near the pure power law
      starts.push_back({1.5, std::log(1.0 / mean)});
      starts.push_back({2.5, std::log(0.1 / mean)});
      break;
    default:
      break;
  }

  auto objective = [&](const std::array<double, 2>& theta) {
    return alternative_loglik(alt, theta, tail, max_sample);
  };
  SimplexResult best;
  for (const auto& start : starts) {
    SimplexResult r = nelder_mead_max(objective, start, 0.5);
    if (r.converged && r.value > best.value) best = r;
  }
  if (!best.converged || !std::isfinite(best.value)) {
    note = std::string(alternative_name(alt)) + " MLE did not converge";
    return false;
  }
  double log_z = log_normalizer(alt, best.theta, tail.xmin, max_sample);
  point_logliks.resize(tail.values.size());
  for (std::size_t i = 0; i < tail.values.size(); ++i)
    point_logliks[i] =
        log_weight(alt, best.theta, static_cast<double>(tail.values[i])) - log_z;
  return true;
}

}  // namespace

const char* alternative_name(Alternative alt) {
  switch (alt) {
    case Alternative::kExponential:
      return "exponential";
    case Alternative::kStretchedExponential:
      return "stretched-exponential";
    case Alternative::kLognormal:
      return "lognormal";
    case Alternative::kTruncatedPowerLaw:
      return "truncated-power-law";
  }
  return "unknown";
}

double hurwitz_zeta(double s, double a) {
  // Direct series plus Euler-Maclaurin tail from b = a + N.
  constexpr int kDirectTerms = 30;
  double sum = 0.0;
  for (int k = 0; k < kDirectTerms; ++k) sum += std::pow(a + k, -s);
  const double b = a + kDirectTerms;
  sum += std::pow(b, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(b, -s);
  sum += s * std::pow(b, -s - 1.0) / 12.0;
  sum -= s * (s + 1.0) * (s + 2.0) * std::pow(b, -s - 3.0) / 720.0;
  sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * std::pow(b, -s - 5.0) / 30240.0;
  return sum;
}

FitResult fit_power_law(const std::vector<std::uint64_t>& samples,
                        const FitOptions& options) {
  std::vector<std::uint64_t> sorted;
  sorted.reserve(samples.size());
  for (std::uint64_t v : samples)
    if (v >= 1) sorted.push_back(v);
  if (sorted.size() < kMinTail)
    throw InputError("power-law fit refused: " + std::to_string(sorted.size()) +
                     " positive samples, need at least " + std::to_string(kMinTail));
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw InputError("power-law fit refused: all samples equal (degenerate)");

  FitResult best;
  best.ks_distance = std::numeric_limits<double>::infinity();

  std::size_t index = 0;
  while (index < sorted.size()) {
    std::uint64_t candidate = sorted[index];
    if (sorted.size() - index < kMinTail) break;        // tail too small
    if (sorted[index] == sorted.back()) break;          // single-value tail
    if (options.xmin_max != 0 && candidate > options.xmin_max) break;
    if (candidate < options.xmin_min) {
      while (index < sorted.size() && sorted[index] == candidate) ++index;
      continue;
    }
    Tail tail = make_tail(sorted, index);
    double gamma = golden_max(kGammaLo, kGammaHi, kGoldenTol,
                              [&](double g) { return power_law_loglik(tail, g); });
    double ks = ks_distance(tail, gamma);
    best.xmin_scan.emplace_back(candidate, ks);
    if (ks < best.ks_distance) {
      best.xmin = candidate;
      best.gamma = gamma;
      best.ks_distance = ks;
      best.n_tail = tail.n;
    }
    while (index < sorted.size() && sorted[index] == candidate) ++index;
  }
  if (!std::isfinite(best.ks_distance))
    throw InputError("power-law fit refused: no viable xmin candidate");
  best.alpha = derive_alpha(best.gamma);
  return best;
}

ComparisonResult compare_distributions(const std::vector<std::uint64_t>& samples,
                                       const FitResult& fit, Alternative alternative) {
  std::vector<std::uint64_t> sorted;
  for (std::uint64_t v : samples)
    if (v >= fit.xmin) sorted.push_back(v);
  std::sort(sorted.begin(), sorted.end());

  ComparisonResult result;
  result.alternative = alternative;
  if (sorted.size() < 2) {
    result.conclusive = false;
    result.note = "tail too small for comparison";
    return result;
  }
  Tail tail = make_tail(sorted, 0);
  tail.xmin = fit.xmin;

  std::vector<double> alt_logliks;
  if (!fit_alternative(alternative, tail, sorted.back(), fit.gamma, alt_logliks,
                       result.note)) {
    result.conclusive = false;
    return result;
  }

  const double log_z_pl = std::log(hurwitz_zeta(fit.gamma, static_cast<double>(fit.xmin)));
  std::vector<double> diffs(tail.values.size());
  for (std::size_t i = 0; i < tail.values.size(); ++i) {
    double pl = -fit.gamma * std::log(static_cast<double>(tail.values[i])) - log_z_pl;
    diffs[i] = pl - alt_logliks[i];
  }
  std::tie(result.R, result.p) = vuong_statistic(diffs, tail.counts);
  return result;
}

std::pair<double, double> vuong_statistic(const std::vector<double>& diffs,
                                          const std::vector<std::uint64_t>& counts) {
  double sum_d = 0.0, sum_d2 = 0.0, n = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    double w = static_cast<double>(counts[i]);
    sum_d += w * diffs[i];
    sum_d2 += w * diffs[i] * diffs[i];
    n += w;
  }
  double variance = n > 1.0 ? (sum_d2 - sum_d * sum_d / n) / (n - 1.0) : 0.0;
  double sigma = std::sqrt(std::max(variance, 0.0));
  if (sigma == 0.0) {
    if (sum_d == 0.0) return {0.0, 1.0};
    return {sum_d > 0.0 ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity(),
            0.0};
  }
  double r = sum_d / (sigma * std::sqrt(n));
  return {r, normal_two_sided_p(r)};
}

std::vector<std::pair<std::size_t, std::uint64_t>> rank_frequency_series(
    const std::vector<std::uint64_t>& samples) {
  if (samples.empty()) throw InputError("rank-frequency series of empty input");
  std::vector<std::uint64_t> sorted = samples;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::pair<std::size_t, std::uint64_t>> series;
  series.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) series.emplace_back(i + 1, sorted[i]);
  return series;
}

std::vector<std::pair<std::uint64_t, double>> ccdf(const std::vector<std::uint64_t>& samples) {
  if (samples.empty()) throw InputError("ccdf of empty input");
  std::vector<std::uint64_t> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<std::uint64_t, double>> out;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1])
      out.emplace_back(sorted[i], static_cast<double>(sorted.size() - i) / n);
  }
  return out;
}

}  // namespace fln
