#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fln/article_table.hpp"
#include "fln/ids.hpp"

namespace fln {

// A first-link edge: source title and its optional first-link target.
struct Edge {
  std::string source;
  std::optional<std::string> target;
};

// The First Link Network: a functional graph where every node has at most one
// successor. Immutable after construction; safe for concurrent reads.
class FirstLinkGraph {
 public:
  FirstLinkGraph() = default;
  explicit FirstLinkGraph(std::vector<ArticleId> successor)
      : successor_(std::move(successor)) {}

  std::size_t size() const { return successor_.size(); }

  bool has_successor(ArticleId v) const {
    return successor_[v] != kNoSuccessor;
  }
  std::optional<ArticleId> successor(ArticleId v) const {
    if (successor_[v] == kNoSuccessor) return std::nullopt;
    return successor_[v];
  }
  // Raw packed form (kNoSuccessor = absent); the hot loops use this.
  const std::vector<ArticleId>& raw_successors() const { return successor_; }

 private:
  std::vector<ArticleId> successor_;
};

struct DegreeStats {
  std::vector<std::uint64_t> in_degree;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::uint64_t max = 0;
  double q25 = 0.0, median = 0.0, q75 = 0.0;
};

// Builds the graph and its title table from (source, optional target) pairs.
// Sources are interned first, in order, then targets; this keeps ids stable
// under save/load round trips. Duplicate source titles (after
// canonicalization) are an InputError naming the title.
std::pair<FirstLinkGraph, ArticleTable> build_graph(const std::vector<Edge>& edges);

DegreeStats in_degree(const FirstLinkGraph& graph);

// All nodes ordered by metric value descending, ties by ascending id.
template <typename Value>
std::vector<std::pair<ArticleId, Value>> rank_nodes(const std::vector<Value>& values);

// Edge-list TSV: one "source<TAB>target" header line, then one line per node
// in id order with an empty target field for absent successors.
void save_edges(const FirstLinkGraph& graph, const ArticleTable& table, std::ostream& out);
void save_edges(const FirstLinkGraph& graph, const ArticleTable& table, const std::string& path);
std::pair<FirstLinkGraph, ArticleTable> load_edges(std::istream& in);
std::pair<FirstLinkGraph, ArticleTable> load_edges(const std::string& path);

template <typename Value>
std::vector<std::pair<ArticleId, Value>> rank_nodes(const std::vector<Value>& values) {
  std::vector<std::pair<ArticleId, Value>> ranked;
  ranked.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    ranked.emplace_back(static_cast<ArticleId>(i), values[i]);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

}  // namespace fln
