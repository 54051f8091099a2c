#include "fln/centrality.hpp"

#include <cmath>
#include <string>

#include "fln/traversal.hpp"

namespace fln {

CentralityScores betweenness(const FirstLinkGraph& graph) {
  const std::size_t n = graph.size();
  if (n < 3)
    throw InputError("betweenness needs at least 3 nodes, got " + std::to_string(n));

  CentralityScores result;
  result.method = CentralityMethod::kBetweenness;
  result.scores.assign(n, 0.0);

  // The path from s visits w_0 = s, w_1, ..., w_L; w_i is interior to the
  // unique shortest path s -> t for every target t beyond position i.
  for (ArticleId s = 0; s < n; ++s) {
    std::vector<ArticleId> path = traverse_path(graph, s);
    const std::size_t len = path.size();
    for (std::size_t i = 1; i < len; ++i)
      result.scores[path[i]] += static_cast<double>(len - 1 - i);
  }
  const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
  for (double& s : result.scores) s /= norm;
  return result;
}

CentralityScores eigenvector_centrality(const FirstLinkGraph& graph,
                                        EigenvectorOrientation orientation) {
  const std::size_t n = graph.size();
  const auto& succ = graph.raw_successors();

  CycleSet cycles = detect_cycles(graph);
  if (cycles.cycles.empty())
    throw InputError("eigenvector centrality undefined on an acyclic graph (zero spectrum)");

  constexpr int kMaxIterations = 10000;
  constexpr double kTolerance = 1e-10;

  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // (A + I) x, then renormalize: the identity shift breaks the rotation of
    // complex unit-modulus cycle modes so the iteration can settle.
    for (std::size_t v = 0; v < n; ++v) next[v] = x[v];
    for (ArticleId u = 0; u < n; ++u) {
      if (succ[u] == kNoSuccessor) continue;
      if (orientation == EigenvectorOrientation::kIncoming)
        next[succ[u]] += x[u];
      else
        next[u] += x[succ[u]];
    }
    double norm = 0.0;
    for (double v : next) norm += v * v;
    norm = std::sqrt(norm);
    double diff = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= norm;
      diff = std::max(diff, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    if (diff < kTolerance) {
      CentralityScores result;
      result.method = CentralityMethod::kEigenvector;
      result.scores = std::move(x);
      return result;
    }
  }
  throw InputError("eigenvector centrality did not converge within " +
                   std::to_string(kMaxIterations) + " iterations (n=" +
                   std::to_string(n) + ", cycles=" + std::to_string(cycles.cycles.size()) + ")");
}

}  // namespace fln
