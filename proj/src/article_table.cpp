#include "fln/article_table.hpp"

#include <cctype>

namespace fln {

std::string canonical_title(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (c == '_' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  if (!out.empty() && out.front() >= 'a' && out.front() <= 'z')
    out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
  return out;
}

ArticleId ArticleTable::intern(std::string_view raw) {
  std::string title = canonical_title(raw);
  auto it = index_.find(title);
  if (it != index_.end()) return it->second;
  ArticleId id = static_cast<ArticleId>(titles_.size());
  index_.emplace(title, id);
  titles_.push_back(std::move(title));
  return id;
}

ArticleId ArticleTable::find(std::string_view raw) const {
  auto it = index_.find(canonical_title(raw));
  return it == index_.end() ? kNoSuccessor : it->second;
}

}  // namespace fln
