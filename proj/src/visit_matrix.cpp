#include "fln/visit_matrix.hpp"

#include <string>

#include "fln/traversal.hpp"

namespace fln {

VisitMatrix::VisitMatrix(const FirstLinkGraph& graph, std::size_t bound) {
  if (graph.size() > bound)
    throw InputError("visit matrix refused: " + std::to_string(graph.size()) +
                     " nodes exceeds bound " + std::to_string(bound));
  n_ = graph.size();
  entries_.assign(n_ * n_, 0);
  for (ArticleId start = 0; start < n_; ++start)
    for (ArticleId v : traverse_path(graph, start))
      entries_[static_cast<std::size_t>(v) * n_ + start] = 1;
}

std::vector<std::uint64_t> VisitMatrix::row_sums() const {
  std::vector<std::uint64_t> sums(n_, 0);
  for (std::size_t v = 0; v < n_; ++v)
    for (std::size_t j = 0; j < n_; ++j)
      sums[v] += entries_[v * n_ + j];
  return sums;
}

std::vector<std::uint64_t> VisitMatrix::column_sums() const {
  std::vector<std::uint64_t> sums(n_, 0);
  for (std::size_t v = 0; v < n_; ++v)
    for (std::size_t j = 0; j < n_; ++j)
      sums[j] += entries_[v * n_ + j];
  return sums;
}

}  // namespace fln
