#include "fln/traversal.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <thread>
#include <unordered_set>

namespace fln {
namespace {

enum : std::uint8_t { kWhite = 0, kGray = 1, kBlack = 2 };

// Compressed predecessor lists (CSR) for the reverse graph.
struct Predecessors {
  std::vector<std::uint32_t> offsets;
  std::vector<ArticleId> nodes;

  explicit Predecessors(const FirstLinkGraph& graph) {
    const auto& succ = graph.raw_successors();
    const std::size_t n = succ.size();
    offsets.assign(n + 1, 0);
    for (ArticleId v = 0; v < n; ++v)
      if (succ[v] != kNoSuccessor) ++offsets[succ[v] + 1];
    for (std::size_t i = 1; i <= n; ++i) offsets[i] += offsets[i - 1];
    nodes.resize(offsets[n]);
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (ArticleId v = 0; v < n; ++v)
      if (succ[v] != kNoSuccessor) nodes[cursor[succ[v]]++] = v;
  }

  auto begin(ArticleId v) const { return nodes.begin() + offsets[v]; }
  auto end(ArticleId v) const { return nodes.begin() + offsets[v + 1]; }
};

void run_partitioned(std::size_t n, unsigned partitions,
                     const std::function<void(unsigned, ArticleId, ArticleId)>& work) {
  partitions = std::max(1u, partitions);
  const std::size_t chunk = (n + partitions - 1) / std::max<std::size_t>(partitions, 1);
  std::vector<std::thread> threads;
  for (unsigned p = 0; p < partitions; ++p) {
    ArticleId lo = static_cast<ArticleId>(std::min<std::size_t>(p * chunk, n));
    ArticleId hi = static_cast<ArticleId>(std::min<std::size_t>((p + 1) * chunk, n));
    threads.emplace_back([&work, p, lo, hi] { work(p, lo, hi); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

CycleSet detect_cycles(const FirstLinkGraph& graph) {
  const auto& succ = graph.raw_successors();
  const std::size_t n = succ.size();

  CycleSet result;
  result.cycle_id.assign(n, kNoCycle);

  std::vector<std::uint8_t> color(n, kWhite);
  std::vector<ArticleId> walk;
  for (ArticleId start = 0; start < n; ++start) {
    if (color[start] != kWhite) continue;
    walk.clear();
    ArticleId cur = start;
    while (cur != kNoSuccessor && color[cur] == kWhite) {
      color[cur] = kGray;
      walk.push_back(cur);
      cur = succ[cur];
    }
    if (cur != kNoSuccessor && color[cur] == kGray) {
      // Ran into the current walk: everything from `cur` onward is a cycle.
      std::vector<ArticleId> cycle;
      ArticleId m = cur;
      do {
        cycle.push_back(m);
        m = succ[m];
      } while (m != cur);
      auto min_it = std::min_element(cycle.begin(), cycle.end());
      std::rotate(cycle.begin(), min_it, cycle.end());
      for (ArticleId member : cycle)
        result.cycle_id[member] = static_cast<std::uint32_t>(result.cycles.size());
      result.cycles.push_back(std::move(cycle));
    }
    for (ArticleId v : walk) color[v] = kBlack;
  }

  // Normalize the cycle list to ascending smallest-member id so reports do
  // not depend on discovery order.
  std::vector<std::size_t> order(result.cycles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.cycles[a].front() < result.cycles[b].front();
  });
  std::vector<std::vector<ArticleId>> sorted;
  sorted.reserve(result.cycles.size());
  for (std::size_t i : order) sorted.push_back(std::move(result.cycles[i]));
  result.cycles = std::move(sorted);
  for (std::size_t c = 0; c < result.cycles.size(); ++c)
    for (ArticleId member : result.cycles[c])
      result.cycle_id[member] = static_cast<std::uint32_t>(c);
  return result;
}

std::vector<ArticleId> traverse_path(const FirstLinkGraph& graph, ArticleId start) {
  const auto& succ = graph.raw_successors();
  std::vector<ArticleId> path;
  std::unordered_set<ArticleId> seen;
  ArticleId cur = start;
  while (cur != kNoSuccessor && seen.insert(cur).second) {
    path.push_back(cur);
    cur = succ[cur];
  }
  return path;
}

std::vector<std::uint64_t> compute_visits(const FirstLinkGraph& graph,
                                          const CycleSet& cycles,
                                          unsigned partitions) {
  const auto& succ = graph.raw_successors();
  const std::size_t n = succ.size();
  std::vector<std::uint64_t> visits(n, 0);
  if (n == 0) return visits;

  if (partitions > 1) {
    // Per-start walk over disjoint start ranges, merged additively.
    std::vector<std::vector<std::uint64_t>> local(
        partitions, std::vector<std::uint64_t>(n, 0));
    run_partitioned(n, partitions, [&](unsigned p, ArticleId lo, ArticleId hi) {
      auto& counts = local[p];
      for (ArticleId s = lo; s < hi; ++s) {
        ArticleId cur = s;
        while (true) {
          if (cycles.on_cycle(cur)) {
            for (ArticleId m : cycles.cycles[cycles.cycle_id[cur]]) ++counts[m];
            break;
          }
          ++counts[cur];
          if (succ[cur] == kNoSuccessor) break;
          cur = succ[cur];
        }
      }
    });
    for (const auto& counts : local)
      for (std::size_t v = 0; v < n; ++v) visits[v] += counts[v];
    return visits;
  }

  // Sequential: accumulate the in-forest bottom-up, then basin totals.
  // visits(v) = 1 + sum of visits over direct predecessors for tree nodes;
  // every member of a cycle shares that cycle's basin size.
  std::vector<std::uint32_t> tree_indeg(n, 0);
  for (ArticleId v = 0; v < n; ++v)
    if (!cycles.on_cycle(v) && succ[v] != kNoSuccessor) ++tree_indeg[succ[v]];

  std::vector<ArticleId> ready;
  for (ArticleId v = 0; v < n; ++v)
    if (!cycles.on_cycle(v) && tree_indeg[v] == 0) ready.push_back(v);

  std::vector<std::uint64_t> basin_feed(cycles.cycles.size(), 0);
  while (!ready.empty()) {
    ArticleId v = ready.back();
    ready.pop_back();
    std::uint64_t total = visits[v] + 1;
    visits[v] = total;
    ArticleId s = succ[v];
    if (s == kNoSuccessor) continue;
    if (cycles.on_cycle(s)) {
      basin_feed[cycles.cycle_id[s]] += total;
    } else {
      visits[s] += total;  // still an accumulator until s is popped
      if (--tree_indeg[s] == 0) ready.push_back(s);
    }
  }
  for (std::size_t c = 0; c < cycles.cycles.size(); ++c) {
    std::uint64_t basin = basin_feed[c] + cycles.cycles[c].size();
    for (ArticleId m : cycles.cycles[c]) visits[m] = basin;
  }
  return visits;
}

std::vector<std::uint64_t> compute_path_lengths(const FirstLinkGraph& graph,
                                                const CycleSet& cycles) {
  const auto& succ = graph.raw_successors();
  const std::size_t n = succ.size();
  std::vector<std::uint64_t> length(n, 0);
  if (n == 0) return length;

  // Roots: cycle members carry their cycle size (the closing edge included),
  // dead ends carry 0. Each tree node is one link longer than its successor.
  // Reported lengths differ from the propagated value only for self links.
  Predecessors preds(graph);
  std::vector<std::uint64_t> propagated(n, 0);
  std::queue<ArticleId> frontier;
  for (std::size_t c = 0; c < cycles.cycles.size(); ++c) {
    std::uint64_t k = cycles.cycles[c].size();
    for (ArticleId m : cycles.cycles[c]) {
      propagated[m] = k;
      length[m] = (k == 1) ? 0 : k;
      frontier.push(m);
    }
  }
  for (ArticleId v = 0; v < n; ++v) {
    if (succ[v] == kNoSuccessor) {
      propagated[v] = 0;
      length[v] = 0;
      frontier.push(v);
    }
  }
  while (!frontier.empty()) {
    ArticleId v = frontier.front();
    frontier.pop();
    for (auto it = preds.begin(v); it != preds.end(v); ++it) {
      ArticleId u = *it;
      if (cycles.on_cycle(u)) continue;  // cycle edges stay inside the cycle
      propagated[u] = propagated[v] + 1;
      length[u] = propagated[u];
      frontier.push(u);
    }
  }
  return length;
}

FunnelCounts compute_funnels(const FirstLinkGraph& graph, const CycleSet& cycles,
                             unsigned partitions) {
  const auto& succ = graph.raw_successors();
  const std::size_t n = succ.size();
  partitions = std::max(1u, partitions);

  FunnelCounts result;
  result.counts.assign(n, 0);
  if (n == 0) return result;

  std::vector<std::vector<std::uint64_t>> local(
      partitions, std::vector<std::uint64_t>(n, 0));
  std::vector<std::uint64_t> steps(partitions, 0);
  run_partitioned(n, partitions, [&](unsigned p, ArticleId lo, ArticleId hi) {
    auto& counts = local[p];
    std::uint64_t derefs = 0;
    for (ArticleId s = lo; s < hi; ++s) {
      ArticleId cur = s;
      while (!cycles.on_cycle(cur)) {
        ++counts[cur];
        ArticleId next = succ[cur];
        ++derefs;
        if (next == kNoSuccessor) break;
        cur = next;
      }
    }
    steps[p] = derefs;
  });
  for (unsigned p = 0; p < partitions; ++p) {
    for (std::size_t v = 0; v < n; ++v) result.counts[v] += local[p][v];
    result.successor_steps += steps[p];
  }
  return result;
}

std::vector<std::size_t> cycles_of_length(const CycleSet& cycles, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cycles.cycles.size(); ++c)
    if (cycles.cycles[c].size() == k) out.push_back(c);
  return out;
}

std::vector<PathGroup> path_connected_groups(const FirstLinkGraph& graph,
                                             const CycleSet& cycles,
                                             const std::vector<std::uint64_t>& visits,
                                             const std::vector<std::uint64_t>& funnels,
                                             std::size_t top_k) {
  (void)cycles;
  auto ranked = rank_nodes(funnels);
  std::vector<PathGroup> groups;
  const std::size_t count = std::min(top_k, ranked.size());
  groups.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PathGroup g;
    g.seed = ranked[i].first;
    g.members = traverse_path(graph, g.seed);
    for (ArticleId m : g.members) g.score += visits[m];
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const PathGroup& a, const PathGroup& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.seed < b.seed;
  });
  return groups;
}

DistributionSummary distribution_summary(const std::vector<std::uint64_t>& values,
                                         std::uint64_t threshold) {
  if (values.empty()) throw InputError("distribution summary of empty input");
  std::vector<std::uint64_t> sorted = values;
  std::sort(sorted.begin(), sorted.end());

  auto quantile = [&](double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return static_cast<double>(sorted[lo]) * (1.0 - frac) +
           static_cast<double>(sorted[hi]) * frac;
  };

  DistributionSummary s;
  s.q25 = quantile(0.25);
  s.median = quantile(0.5);
  s.q75 = quantile(0.75);
  s.min = sorted.front();
  s.max = sorted.back();
  s.count = sorted.size();
  s.count_below = static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), threshold) - sorted.begin());
  return s;
}

}  // namespace fln
