#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fln/scalefree.hpp"
#include "fln/visit_matrix.hpp"
#include "fln/wikiparse.hpp"

namespace fln {

// One config for every subcommand; each uses the slice it needs. Workers and
// paths never enter the config hash, so reruns with different parallelism or
// file locations produce byte-identical reports.
struct RunConfig {
  std::string input_path;
  std::string out_path;       // file (extract/fit/join) or directory (analyze)
  unsigned workers = 1;
  std::size_t oracle_bound = VisitMatrix::kDefaultBound;
  std::size_t top_k = 20;
  FitOptions xmin_limits;
  std::string blocklist_path;             // empty = built-in defaults
  std::size_t page_cap = 64ull << 20;
  std::string column = "visits";          // fit / join-views metric column
  std::string views_path;                 // join-views
  std::string metrics_path;               // verify
};

struct ExtractSummary {
  DumpStats dump;
  std::uint64_t duplicate_titles = 0;
  std::size_t nodes = 0;
  std::size_t linked = 0;  // nodes with a present successor
};

struct AnalyzeSummary {
  std::size_t nodes = 0;
  std::size_t cycle_count = 0;
  std::size_t cycle_members = 0;
  std::vector<std::string> files;
};

struct JoinSummary {
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double q25 = 0.0, median = 0.0, q75 = 0.0;
  std::uint64_t min = 0, max = 0;
};

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Dump -> edge-list TSV (graph-core format).
ExtractSummary run_extract(const RunConfig& config);

// Edge list -> metric TSVs, ranked series, cycle census, top cycles, groups,
// and distribution summaries, all under config.out_path.
AnalyzeSummary run_analyze(const RunConfig& config);

// Metric TSV column -> power-law fit report plus rank/ccdf series files.
FitResult run_fit(const RunConfig& config);

// Metric TSV + views TSV -> popularity summary over the top_k rows of the
// chosen metric. Refuses when nothing matches.
JoinSummary run_join_views(const RunConfig& config);

// Re-derives the traversal laws from the metrics file against the graph and
// reports any violation.
VerifyReport run_verify(const RunConfig& config);

}  // namespace fln
