#pragma once

#include <cstdint>
#include <vector>

#include "fln/graph.hpp"
#include "fln/ids.hpp"

namespace fln {

// Dense 0/1 matrix of the paths through the graph: entry (v, j) is 1 when the
// path starting at node j contains v. Row sums are traversal visits, column
// sums the distinct-node sizes of each path. O(n^2) memory, so construction
// refuses graphs above the bound; this exists to validate the linear
// algorithms, not to run at scale.
class VisitMatrix {
 public:
  static constexpr std::size_t kDefaultBound = 2000;

  VisitMatrix(const FirstLinkGraph& graph, std::size_t bound = kDefaultBound);

  std::size_t size() const { return n_; }
  bool contains(ArticleId node, ArticleId path_start) const {
    return entries_[static_cast<std::size_t>(node) * n_ + path_start] != 0;
  }
  std::vector<std::uint64_t> row_sums() const;
  std::vector<std::uint64_t> column_sums() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> entries_;
};

}  // namespace fln
