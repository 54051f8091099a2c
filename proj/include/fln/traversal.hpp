#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fln/graph.hpp"
#include "fln/ids.hpp"

namespace fln {

// Sentinel for "not on any cycle" in CycleSet::cycle_id.
inline constexpr std::uint32_t kNoCycle = static_cast<std::uint32_t>(-1);

// All terminal cycles of the successor function. Cycles are node-disjoint;
// each recorded sequence follows successor order and is rotated so its
// smallest id comes first. The cycles list is sorted by that smallest id.
struct CycleSet {
  std::vector<std::vector<ArticleId>> cycles;
  std::vector<std::uint32_t> cycle_id;  // kNoCycle = not on a cycle

  bool on_cycle(ArticleId v) const { return cycle_id[v] != kNoCycle; }
};

// Per-node funnel counts plus the instrumented successor-dereference total,
// summed across partitions. The walk is the one-pass per-start algorithm, so
// steps is at most n * (1 + max distance to cycle).
struct FunnelCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t successor_steps = 0;
};

// A path-connected group: the full first-link path from a seed through one
// complete traversal of its terminal cycle (or to a dead end).
struct PathGroup {
  ArticleId seed = 0;
  std::vector<ArticleId> members;
  std::uint64_t score = 0;  // sum of member visits
};

struct DistributionSummary {
  double q25 = 0.0, median = 0.0, q75 = 0.0;
  std::uint64_t min = 0, max = 0;
  std::size_t count = 0;
  std::size_t count_below = 0;  // values strictly below the given threshold
};

// Marks every node lying on a cycle of the successor function (self-links are
// 1-cycles) and groups them into disjoint cycles. Linear-time coloring walk.
CycleSet detect_cycles(const FirstLinkGraph& graph);

// Path from `start` along successors, stopping before any revisit or at an
// absent successor. All listed nodes are distinct.
std::vector<ArticleId> traverse_path(const FirstLinkGraph& graph, ArticleId start);

// visits(v) = number of start nodes whose path contains v. partitions > 1
// runs the per-start walk over disjoint start ranges with per-partition
// counters merged additively; the result is identical to sequential.
std::vector<std::uint64_t> compute_visits(const FirstLinkGraph& graph,
                                          const CycleSet& cycles,
                                          unsigned partitions = 1);

// Links traversed from each start node, counting the closing edge into an
// already-visited node; an absent or immediate self link yields 0.
std::vector<std::uint64_t> compute_path_lengths(const FirstLinkGraph& graph,
                                                const CycleSet& cycles);

// funnels(v) = number of start nodes whose pre-cycle path prefix contains v.
// Cycle members get 0; paths that never reach a cycle accumulate end to end.
FunnelCounts compute_funnels(const FirstLinkGraph& graph, const CycleSet& cycles,
                             unsigned partitions = 1);

// Indices into cycles.cycles of all cycles with exactly k members.
std::vector<std::size_t> cycles_of_length(const CycleSet& cycles, std::size_t k);

// Groups seeded at the top_k nodes by funnels (ties by ascending id), each the
// seed's full path; scored by summed member visits, sorted by score
// descending, ties by seed id.
std::vector<PathGroup> path_connected_groups(const FirstLinkGraph& graph,
                                             const CycleSet& cycles,
                                             const std::vector<std::uint64_t>& visits,
                                             const std::vector<std::uint64_t>& funnels,
                                             std::size_t top_k);

// Order statistics; count_below counts values strictly below `threshold`.
// Empty input is an InputError.
DistributionSummary distribution_summary(const std::vector<std::uint64_t>& values,
                                         std::uint64_t threshold = 0);

}  // namespace fln
