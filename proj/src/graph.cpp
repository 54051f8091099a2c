#include "fln/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fln {
namespace {

// Linear-interpolation quantile over a sorted vector.
double quantile_sorted(const std::vector<std::uint64_t>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) * (1.0 - frac) +
         static_cast<double>(sorted[hi]) * frac;
}

}  // namespace

std::pair<FirstLinkGraph, ArticleTable> build_graph(const std::vector<Edge>& edges) {
  ArticleTable table;
  std::vector<ArticleId> sources;
  sources.reserve(edges.size());
  for (const Edge& e : edges) {
    ArticleId src = table.intern(e.source);
    // Only sources interned so far, so a fresh id always equals sources.size().
    if (static_cast<std::size_t>(src) != sources.size())
      throw InputError("duplicate source title: " + table.title_of(src));
    if (table.title_of(src).empty()) throw InputError("empty source title");
    sources.push_back(src);
  }
  std::vector<ArticleId> successor(table.size(), kNoSuccessor);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!edges[i].target) continue;
    ArticleId dst = table.intern(*edges[i].target);
    successor.resize(table.size(), kNoSuccessor);
    successor[sources[i]] = dst;
  }
  successor.resize(table.size(), kNoSuccessor);
  return {FirstLinkGraph(std::move(successor)), std::move(table)};
}

DegreeStats in_degree(const FirstLinkGraph& graph) {
  DegreeStats stats;
  stats.in_degree.assign(graph.size(), 0);
  std::uint64_t edge_count = 0;
  for (ArticleId v = 0; v < graph.size(); ++v) {
    if (auto s = graph.successor(v)) {
      ++stats.in_degree[*s];
      ++edge_count;
    }
  }
  if (graph.size() == 0) return stats;

  stats.mean = static_cast<double>(edge_count) / static_cast<double>(graph.size());
  double ss = 0.0;
  for (std::uint64_t d : stats.in_degree) {
    double diff = static_cast<double>(d) - stats.mean;
    ss += diff * diff;
    stats.max = std::max(stats.max, d);
  }
  stats.stddev = std::sqrt(ss / static_cast<double>(graph.size()));

  std::vector<std::uint64_t> sorted = stats.in_degree;
  std::sort(sorted.begin(), sorted.end());
  stats.q25 = quantile_sorted(sorted, 0.25);
  stats.median = quantile_sorted(sorted, 0.5);
  stats.q75 = quantile_sorted(sorted, 0.75);
  return stats;
}

void save_edges(const FirstLinkGraph& graph, const ArticleTable& table, std::ostream& out) {
  out << "source\ttarget\n";
  for (ArticleId v = 0; v < graph.size(); ++v) {
    out << table.title_of(v) << '\t';
    if (auto s = graph.successor(v)) out << table.title_of(*s);
    out << '\n';
  }
}

void save_edges(const FirstLinkGraph& graph, const ArticleTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  save_edges(graph, table, out);
  if (!out) throw InputError("write failed: " + path);
}

std::pair<FirstLinkGraph, ArticleTable> load_edges(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("edge list: missing header line");

  std::vector<Edge> edges;
  std::unordered_map<std::string, std::size_t> seen;  // canonical source -> line no
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw InputError("edge list line " + std::to_string(line_no) + ": missing tab separator");
    Edge e;
    e.source = line.substr(0, tab);
    std::string target = line.substr(tab + 1);
    if (!target.empty() && target.back() == '\r') target.pop_back();
    if (target.find('\t') != std::string::npos)
      throw InputError("edge list line " + std::to_string(line_no) + ": extra tab separator");
    if (!target.empty()) e.target = std::move(target);

    std::string canon = canonical_title(e.source);
    if (canon.empty())
      throw InputError("edge list line " + std::to_string(line_no) + ": empty source title");
    auto [it, inserted] = seen.emplace(std::move(canon), line_no);
    if (!inserted)
      throw InputError("edge list line " + std::to_string(line_no) + ": duplicate source '" +
                       it->first + "' (first seen on line " + std::to_string(it->second) + ")");
    edges.push_back(std::move(e));
  }
  return build_graph(edges);
}

std::pair<FirstLinkGraph, ArticleTable> load_edges(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open: " + path);
  return load_edges(in);
}

}  // namespace fln
