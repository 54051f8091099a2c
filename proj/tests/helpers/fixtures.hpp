#pragma once

#include <random>
#include <utility>
#include <vector>

#include "fln/graph.hpp"
#include "fln/ids.hpp"

namespace fln::testing {

// The seven-node sample network: a 3-cycle A->B->G->A fed by C (itself fed by
// E<-D and F). Ids follow source order: A=0 B=1 G=2 C=3 E=4 D=5 F=6.
inline std::pair<FirstLinkGraph, ArticleTable> sample_network() {
  return build_graph({
      {"A", "B"},
      {"B", "G"},
      {"G", "A"},
      {"C", "A"},
      {"E", "C"},
      {"D", "E"},
      {"F", "C"},
  });
}

inline FirstLinkGraph ring_graph(std::size_t n) {
  std::vector<ArticleId> succ(n);
  for (std::size_t v = 0; v < n; ++v) succ[v] = static_cast<ArticleId>((v + 1) % n);
  return FirstLinkGraph(std::move(succ));
}

// Random partial successor map: mixed cycle counts, dead ends, self loops.
inline FirstLinkGraph random_functional_graph(std::mt19937_64& rng, std::size_t n,
                                              double absent_prob = 0.1) {
  std::vector<ArticleId> succ(n, kNoSuccessor);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<ArticleId> node(0, static_cast<ArticleId>(n - 1));
  for (std::size_t v = 0; v < n; ++v)
    if (coin(rng) >= absent_prob) succ[v] = node(rng);
  return FirstLinkGraph(std::move(succ));
}

// Disjoint components of one 3-cycle with a 10-deep chain attached: the
// distance to a cycle never exceeds 10 no matter how large n grows.
inline FirstLinkGraph fixed_depth_family(std::size_t n) {
  constexpr std::size_t kComponent = 13;
  const std::size_t count = n / kComponent;
  std::vector<ArticleId> succ(count * kComponent);
  for (std::size_t c = 0; c < count; ++c) {
    ArticleId base = static_cast<ArticleId>(c * kComponent);
    succ[base] = base + 1;
    succ[base + 1] = base + 2;
    succ[base + 2] = base;
    for (std::size_t i = 3; i < kComponent; ++i)
      succ[base + i] = static_cast<ArticleId>(base + (i == 3 ? 0 : i - 1));
  }
  return FirstLinkGraph(std::move(succ));
}

}  // namespace fln::testing
