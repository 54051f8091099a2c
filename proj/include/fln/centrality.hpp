#pragma once

#include <vector>

#include "fln/graph.hpp"
#include "fln/ids.hpp"

namespace fln {

enum class CentralityMethod { kBetweenness, kEigenvector };

struct CentralityScores {
  CentralityMethod method = CentralityMethod::kBetweenness;
  std::vector<double> scores;
};

// Which edge direction eigenvector centrality accumulates over. Incoming
// rewards nodes that receive flow (the default reading); outgoing is the
// transpose.
enum class EigenvectorOrientation { kIncoming, kOutgoing };

// Fraction of all ordered-pair unique shortest paths strictly containing each
// node, normalized by (n-1)(n-2). Out-degree <= 1 makes every s->t path
// unique, so the walk from each source enumerates them exactly. Needs n >= 3.
CentralityScores betweenness(const FirstLinkGraph& graph);

// Principal eigenvector of the adjacency structure by (A + I) power
// iteration, unit Euclidean norm. Stops when successive normalized iterates
// differ by < 1e-10 in sup norm; errors out on acyclic graphs (zero spectrum)
// or after 10,000 iterations without convergence.
CentralityScores eigenvector_centrality(
    const FirstLinkGraph& graph,
    EigenvectorOrientation orientation = EigenvectorOrientation::kIncoming);

}  // namespace fln
