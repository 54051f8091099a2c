#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fln/graph.hpp"
#include "fln/ids.hpp"

namespace fln {

struct RawPage {
  std::string title;
  std::string ns;  // empty = main namespace
  std::string markup;
  bool is_redirect = false;
  std::optional<std::string> redirect_target;  // canonical, present iff is_redirect
};

// Nested-region flags gating link eligibility. A link counts only when every
// depth is zero and no comment is active. Depths never go negative; stray
// closers clamp at zero.
struct FlagState {
  int template_depth = 0;  // {{ ... }}
  int tag_depth = 0;       // <ref>/<div>/<gallery> elements
  int table_depth = 0;     // {| ... |}
  int paren_depth = 0;     // ( ... ) in body text
  bool comment_active = false;

  bool all_clear() const {
    return template_depth == 0 && tag_depth == 0 && table_depth == 0 &&
           paren_depth == 0 && !comment_active;
  }
};

// Namespace and interwiki prefixes whose links never count as article links,
// plus media suffixes. Override by loading one prefix per line.
struct LinkBlocklist {
  std::vector<std::string> prefixes;  // lowercase, no trailing colon
  std::vector<std::string> suffixes;  // lowercase media extensions, with dot

  static LinkBlocklist defaults();
  static LinkBlocklist from_file(const std::string& path);
};

// True when the target names an ordinary article: no blocklisted namespace or
// interwiki prefix, no external scheme, no media extension, non-empty after
// canonicalization, and free of characters illegal in titles.
bool is_valid_link(std::string_view target, const LinkBlocklist& blocklist);
bool is_valid_link(std::string_view target);

// The earliest [[...]] whose opening bracket sits outside every template,
// ref/div/gallery element, table, comment, and parenthetical, and whose
// target is valid. Returns the canonical target title. Single pass; unclosed
// constructs keep their flag raised to the end of the text.
std::optional<std::string> extract_first_link(std::string_view markup,
                                              const LinkBlocklist& blocklist);
std::optional<std::string> extract_first_link(std::string_view markup);

// Canonical redirect target when the markup starts with a redirect keyword.
std::optional<std::string> parse_redirect(std::string_view markup);

struct DumpOptions {
  std::size_t page_cap = 64ull << 20;  // single-page byte cap; larger pages are skipped
  LinkBlocklist blocklist = LinkBlocklist::defaults();
};

struct DumpStats {
  std::uint64_t pages_seen = 0;     // main-namespace pages emitted
  std::uint64_t pages_skipped = 0;  // non-main namespace or over the cap
  std::uint64_t oversized = 0;
};

// Streams a pages-articles XML dump, emitting one (title, first link) record
// per main-namespace page. Redirect pages emit their redirect target. Memory
// stays bounded by the page cap. Malformed XML raises InputError with a byte
// offset.
DumpStats parse_dump(std::istream& xml, const DumpOptions& options,
                     const std::function<void(const RawPage&, const std::optional<std::string>&)>& emit);

// Whole-pipeline convenience: parse, extract in parallel over whole pages,
// and keep the first record per canonical title. Output is independent of the
// worker count.
struct ExtractResult {
  std::vector<Edge> edges;
  DumpStats stats;
  std::uint64_t duplicate_titles = 0;
};

ExtractResult shard_parse(const std::string& dump_path, unsigned workers,
                          const DumpOptions& options = {});
ExtractResult shard_parse(std::istream& xml, unsigned workers,
                          const DumpOptions& options = {});

}  // namespace fln
