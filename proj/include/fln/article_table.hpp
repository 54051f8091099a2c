#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fln/ids.hpp"

namespace fln {

// Canonical form of an article title: underscores and other whitespace become
// single spaces, runs of spaces collapse, outer whitespace is trimmed, and an
// ASCII lowercase first letter is uppercased. Idempotent.
std::string canonical_title(std::string_view raw);

// Bidirectional title <-> dense id interning. Titles are canonicalized on
// insertion, so "rail transport" and "Rail_transport" map to the same id.
class ArticleTable {
 public:
  // Returns the id for the canonical form of `raw`, interning it if new.
  ArticleId intern(std::string_view raw);

  // Lookup without interning; returns kNoSuccessor when absent.
  ArticleId find(std::string_view raw) const;

  const std::string& title_of(ArticleId id) const { return titles_.at(id); }
  std::size_t size() const { return titles_.size(); }
  const std::vector<std::string>& titles() const { return titles_; }

 private:
  std::vector<std::string> titles_;
  std::unordered_map<std::string, ArticleId> index_;
};

}  // namespace fln
