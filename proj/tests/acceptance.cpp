// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expected runtime is a few minutes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fln/centrality.hpp"
#include "fln/pipeline.hpp"
#include "fln/scalefree.hpp"
#include "fln/traversal.hpp"
#include "fln/visit_matrix.hpp"
#include "fln/wikiparse.hpp"
#include "helpers/fixtures.hpp"
#include "helpers/markup_gen.hpp"
#include "helpers/parser_corpus.hpp"
#include "helpers/parser_oracle.hpp"
#include "helpers/stats_oracle.hpp"

namespace fs = std::filesystem;
using namespace fln;

namespace {

int failures = 0;

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
  double seconds = 0.0;

  void require(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
};

void run(const std::string& name, double time_limit_s,
         const std::function<void(Check&)>& body) {
  Check check;
  check.name = name;
  auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  check.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0 && check.seconds > time_limit_s)
    check.require(false, "runtime " + std::to_string(check.seconds) + "s over limit " +
                             std::to_string(time_limit_s) + "s");
  std::printf("[%s] %-28s (%.2fs)%s%s\n", check.ok ? "PASS" : "FAIL", check.name.c_str(),
              check.seconds, check.ok ? "" : " -- ", check.ok ? "" : check.detail.c_str());
  std::fflush(stdout);
  if (!check.ok) ++failures;
}

std::string xml_escape(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- criteria ---------------------------------------------------------------

void fixture_exactness(Check& c) {
  auto [graph, table] = testing::sample_network();
  CycleSet cycles = detect_cycles(graph);
  auto visits = compute_visits(graph, cycles);
  FunnelCounts funnels = compute_funnels(graph, cycles);
  c.require(visits[table.find("A")] == 7, "visits(A) != 7");
  c.require(funnels.counts[table.find("E")] == 2, "funnels(E) != 2");
  c.require(funnels.counts[table.find("C")] == 4, "funnels(C) != 4");
  c.require(funnels.counts[table.find("A")] == 0, "funnels(A) != 0");
  c.require(funnels.counts[table.find("B")] == 0, "funnels(B) != 0");
}

void oracle_equivalence_and_plateau(Check& c, bool plateau_only) {
  std::mt19937_64 rng(20141101);
  std::uint64_t law_violations = 0, matrix_mismatches = 0, plateau_violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(rng() % 499);
    FirstLinkGraph graph = testing::random_functional_graph(
        rng, n, trial % 3 == 0 ? 0.0 : 0.15);
    CycleSet cycles = detect_cycles(graph);
    auto visits = compute_visits(graph, cycles);
    FunnelCounts funnels = compute_funnels(graph, cycles);

    if (!plateau_only) {
      VisitMatrix matrix(graph, 500);
      auto rows = matrix.row_sums();
      const auto& succ = graph.raw_successors();
      std::vector<std::uint64_t> pred_visits(n, 0), pred_funnels(n, 0);
      for (ArticleId u = 0; u < n; ++u) {
        if (succ[u] == kNoSuccessor) continue;
        pred_visits[succ[u]] += visits[u];
        pred_funnels[succ[u]] += funnels.counts[u];
      }
      for (ArticleId v = 0; v < n; ++v) {
        if (visits[v] != rows[v]) ++matrix_mismatches;
        if (cycles.on_cycle(v)) {
          if (funnels.counts[v] != 0) ++law_violations;
        } else {
          if (visits[v] != pred_visits[v] + 1) ++law_violations;
          if (funnels.counts[v] != pred_funnels[v] + 1) ++law_violations;
        }
      }
    } else {
      // independent basin count: walk every start to its terminal cycle
      std::vector<std::uint64_t> basin(cycles.cycles.size(), 0);
      for (ArticleId start = 0; start < n; ++start) {
        ArticleId cur = start;
        while (!cycles.on_cycle(cur)) {
          auto next = graph.successor(cur);
          if (!next) break;
          cur = *next;
        }
        if (cycles.on_cycle(cur)) ++basin[cycles.cycle_id[cur]];
      }
      for (std::size_t k = 0; k < cycles.cycles.size(); ++k)
        for (ArticleId m : cycles.cycles[k])
          if (visits[m] != basin[k]) ++plateau_violations;
    }
  }
  if (plateau_only) {
    c.require(plateau_violations == 0,
              std::to_string(plateau_violations) + " plateau violations");
  } else {
    c.require(matrix_mismatches == 0,
              std::to_string(matrix_mismatches) + " matrix mismatches");
    c.require(law_violations == 0, std::to_string(law_violations) + " law violations");
  }
}

void ring_365(Check& c) {
  FirstLinkGraph ring = testing::ring_graph(365);
  CycleSet cycles = detect_cycles(ring);
  c.require(cycles.cycles.size() == 1, "expected exactly one cycle");
  c.require(cycles.cycles[0].size() == 365, "cycle length != 365");
  auto lengths = compute_path_lengths(ring, cycles);
  for (ArticleId v = 0; v < ring.size(); ++v)
    c.require(lengths[v] == 365, "path length != 365 at node " + std::to_string(v));
}

void power_law_recovery(Check& c) {
  std::mt19937_64 rng(25);
  testing::PowerLawSampler sampler(2.5, 1);
  auto samples = sampler.sample(rng, 50'000);
  FitResult fit = fit_power_law(samples);
  c.require(std::abs(fit.gamma - 2.5) <= 0.05,
            "gamma " + std::to_string(fit.gamma) + " outside 2.5 +/- 0.05");
  c.require(fit.xmin <= 3, "xmin " + std::to_string(fit.xmin) + " > 3");
  c.require(fit.alpha * (fit.gamma - 1.0) == 1.0, "alpha*(gamma-1) != 1 exactly");
  ComparisonResult cmp = compare_distributions(samples, fit, Alternative::kExponential);
  c.require(cmp.conclusive, "comparison inconclusive: " + cmp.note);
  c.require(cmp.R > 0.0, "R <= 0 against exponential");
  c.require(cmp.p < 0.01, "p " + std::to_string(cmp.p) + " >= 0.01");
}

void exponent_relation(Check& c) {
  double alpha = 1.0 / (1.41 - 1.0);
  c.require(std::abs(alpha - 2.44) <= 0.005,
            "alpha " + std::to_string(alpha) + " not within 0.005 of 2.44");
}

void parser_corpus_criterion(Check& c) {
  std::size_t cases = 0;
  for (const auto& entry : testing::parser_corpus()) {
    ++cases;
    auto got = extract_first_link(entry.markup);
    bool match = entry.expected ? (got && *got == *entry.expected) : !got.has_value();
    c.require(match, std::string("corpus case failed: ") + entry.markup);
  }
  c.require(cases >= 30, "corpus smaller than 30 cases");

  const LinkBlocklist blocklist = LinkBlocklist::defaults();
  std::uint64_t disagreements = 0;
  std::string first_seed;
  for (std::uint64_t seed = 0; seed < 10'000; ++seed) {
    testing::MarkupGenerator gen(seed);
    std::string markup = gen.generate();
    auto scanner = extract_first_link(markup, blocklist);
    auto oracle = testing::RegionOracle(markup).first_link(blocklist);
    if (scanner != oracle) {
      if (disagreements == 0) first_seed = std::to_string(seed);
      ++disagreements;
    }
  }
  c.require(disagreements == 0, std::to_string(disagreements) +
                                    " scanner/oracle disagreements, first at seed " +
                                    first_seed);
}

void funnel_isolation(Check& c) {
  auto [graph, table] = testing::sample_network();
  CycleSet cycles = detect_cycles(graph);
  FunnelCounts funnels = compute_funnels(graph, cycles);
  for (ArticleId v = 0; v < graph.size(); ++v)
    if (cycles.on_cycle(v))
      c.require(funnels.counts[v] == 0, "cycle member has nonzero funnels");

  CentralityScores ring_scores = eigenvector_centrality(testing::ring_graph(3));
  for (int v = 0; v < 3; ++v)
    c.require(std::abs(ring_scores.scores[v] - 0.577) <= 0.001,
              "3-cycle eigenvector score " + std::to_string(ring_scores.scores[v]) +
                  " not 0.577 +/- 0.001");

  auto ranked = rank_nodes(funnels.counts);
  c.require(!cycles.on_cycle(ranked[0].first), "top-funnels node is a cycle member");
  c.require(ranked[0].first == table.find("C"), "top-funnels node is not C");

  CentralityScores bc = betweenness(graph);
  CentralityScores ec = eigenvector_centrality(graph);
  bool cycle_member_scores = false;
  for (ArticleId v = 0; v < graph.size(); ++v)
    if (cycles.on_cycle(v) && bc.scores[v] > 0.0 && ec.scores[v] > 0.0)
      cycle_member_scores = true;
  c.require(cycle_member_scores, "no cycle member carries centrality");
}

void determinism(Check& c) {
  fs::path tmp = fs::temp_directory_path() / "fln_acceptance_determinism";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  {
    std::ofstream dump(tmp / "dump.xml", std::ios::binary);
    dump << "<mediawiki>\n";
    for (int i = 0; i < 10'000; ++i) {
      testing::MarkupGenerator gen(i + 31000);
      std::string markup = gen.generate() + " end [[Node " +
                           std::to_string((i * 37 + 11) % 10'000) + "]]";
      dump << "  <page>\n    <title>Node " << i << "</title>\n    <ns>0</ns>\n"
           << "    <revision><text>" << xml_escape(markup)
           << "</text></revision>\n  </page>\n";
    }
    dump << "</mediawiki>\n";
  }

  std::string baseline_edges, baseline_metrics, baseline_funnels;
  for (unsigned workers : {1u, 2u, 8u}) {
    RunConfig extract_config;
    extract_config.input_path = (tmp / "dump.xml").string();
    extract_config.out_path = (tmp / ("edges_" + std::to_string(workers) + ".tsv")).string();
    extract_config.workers = workers;
    run_extract(extract_config);

    RunConfig analyze_config;
    analyze_config.input_path = extract_config.out_path;
    analyze_config.out_path = (tmp / ("out_" + std::to_string(workers))).string();
    analyze_config.workers = workers;
    run_analyze(analyze_config);

    std::string edges = slurp(extract_config.out_path);
    std::string metrics = slurp(analyze_config.out_path + "/metrics.tsv");
    std::string funnels = slurp(analyze_config.out_path + "/funnels_ranked.tsv");
    if (workers == 1) {
      baseline_edges = edges;
      baseline_metrics = metrics;
      baseline_funnels = funnels;
      c.require(!edges.empty() && !metrics.empty(), "empty outputs");
    } else {
      c.require(edges == baseline_edges,
                "edges differ at workers=" + std::to_string(workers));
      c.require(metrics == baseline_metrics,
                "metrics differ at workers=" + std::to_string(workers));
      c.require(funnels == baseline_funnels,
                "funnel ranks differ at workers=" + std::to_string(workers));
    }
  }
  fs::remove_all(tmp);
}

void linear_runtime(Check& c) {
  std::vector<double> ns, steps;
  for (std::size_t n : {10'000ul, 100'000ul, 1'000'000ul}) {
    FirstLinkGraph graph = testing::fixed_depth_family(n);
    CycleSet cycles = detect_cycles(graph);
    FunnelCounts funnels = compute_funnels(graph, cycles);
    ns.push_back(static_cast<double>(graph.size()));
    steps.push_back(static_cast<double>(funnels.successor_steps));
    c.require(funnels.successor_steps <= graph.size() * (1 + 10),
              "step count above n * (1 + max depth)");
  }
  // R^2 of the least-squares line through (n, steps)
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sx += ns[i];
    sy += steps[i];
    sxx += ns[i] * ns[i];
    sxy += ns[i] * steps[i];
  }
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double intercept = (sy - slope * sx) / m;
  double ss_res = 0, ss_tot = 0, mean_y = sy / m;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double fit = slope * ns[i] + intercept;
    ss_res += (steps[i] - fit) * (steps[i] - fit);
    ss_tot += (steps[i] - mean_y) * (steps[i] - mean_y);
  }
  double r2 = 1.0 - ss_res / ss_tot;
  c.require(r2 > 0.99, "R^2 " + std::to_string(r2) + " <= 0.99");
}

}  // namespace

int main() {
  std::printf("fln acceptance suite\n");
  run("fixture-exactness", 1.0, fixture_exactness);
  run("oracle-equivalence", 120.0, [](Check& c) { oracle_equivalence_and_plateau(c, false); });
  run("cycle-plateau", 120.0, [](Check& c) { oracle_equivalence_and_plateau(c, true); });
  run("ring-365", 0.0, ring_365);
  run("power-law-recovery", 60.0, power_law_recovery);
  run("exponent-relation", 0.0, exponent_relation);
  run("parser-corpus", 0.0, parser_corpus_criterion);
  run("funnel-isolation", 0.0, funnel_isolation);
  run("determinism", 60.0, determinism);
  run("linear-runtime", 0.0, linear_runtime);

  if (failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", failures);
  return 1;
}
