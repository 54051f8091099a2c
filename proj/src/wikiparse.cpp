#include "fln/wikiparse.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace fln {
namespace {

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

bool ci_equal(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

// Lowercased namespace-prefix normalization: underscores to spaces, runs
// collapsed, trimmed.
std::string normalize_prefix(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending = false;
  for (char c : ascii_lower(raw)) {
    if (c == '_' || c == ' ' || c == '\t') {
      if (!out.empty()) pending = true;
      continue;
    }
    if (pending) {
      out.push_back(' ');
      pending = false;
    }
    out.push_back(c);
  }
  return out;
}

const char* const kNamespacePrefixes[] = {
    "file", "image", "media", "category", "wikipedia", "help", "template",
    "portal", "special", "talk", "user", "draft", "mediawiki", "module",
    "book", "timedtext",
    "user talk", "wikipedia talk", "file talk", "image talk", "media talk",
    "template talk", "category talk", "help talk", "portal talk",
    "draft talk", "mediawiki talk", "module talk", "book talk",
    "timedtext talk",
};

const char* const kProjectPrefixes[] = {
    "wikt", "wiktionary", "commons", "meta", "mw", "wikibooks", "wikinews",
    "wikiquote", "wikisource", "wikiversity", "wikivoyage", "wikispecies",
    "wikidata", "wmf", "incubator", "species", "voy", "oldwikisource",
};

const char* const kSchemePrefixes[] = {
    "http", "https", "ftp", "ftps", "mailto", "irc", "ircs", "news",
    "gopher", "telnet",
};

const char* const kLanguagePrefixes[] = {
    "en", "de", "fr", "es", "it", "pt", "nl", "ru", "ja", "zh", "sv", "pl",
    "no", "nn", "fi", "da", "cs", "hu", "ro", "ca", "el", "tr", "ar", "he",
    "ko", "uk", "bg", "sr", "sh", "hr", "sk", "sl", "eo", "la", "et", "lt",
    "lv", "gl", "eu", "af", "sq", "az", "be", "bn", "bs", "cy", "fa", "ga",
    "gu", "hi", "hy", "id", "is", "ka", "kk", "km", "kn", "ku", "ky", "lb",
    "mk", "ml", "mn", "mr", "ms", "my", "ne", "pa", "si", "so", "sw", "ta",
    "te", "th", "tl", "ur", "uz", "vi", "simple",
};

const char* const kMediaSuffixes[] = {
    ".jpg", ".jpeg", ".png", ".svg", ".gif", ".pdf", ".ogg", ".ogv", ".oga",
    ".tif", ".tiff", ".webm", ".webp", ".mp3", ".mp4", ".mid", ".wav",
    ".bmp", ".djvu", ".flac",
};

bool is_known_namespace(std::string_view prefix_normalized) {
  for (const char* p : kNamespacePrefixes)
    if (prefix_normalized == p) return true;
  // "User talk", "Template talk", ... all end the same way.
  return prefix_normalized.size() > 5 &&
         prefix_normalized.substr(prefix_normalized.size() - 5) == " talk";
}

}  // namespace

LinkBlocklist LinkBlocklist::defaults() {
  LinkBlocklist bl;
  for (const char* p : kNamespacePrefixes) bl.prefixes.emplace_back(p);
  for (const char* p : kProjectPrefixes) bl.prefixes.emplace_back(p);
  for (const char* p : kSchemePrefixes) bl.prefixes.emplace_back(p);
  for (const char* p : kLanguagePrefixes) bl.prefixes.emplace_back(p);
  for (const char* s : kMediaSuffixes) bl.suffixes.emplace_back(s);
  return bl;
}

LinkBlocklist LinkBlocklist::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open blocklist: " + path);
  LinkBlocklist bl;
  bl.suffixes = defaults().suffixes;
  std::string line;
  while (std::getline(in, line)) {
    std::string prefix = normalize_prefix(trim_view(line));
    if (!prefix.empty()) bl.prefixes.push_back(std::move(prefix));
  }
  return bl;
}

bool is_valid_link(std::string_view target, const LinkBlocklist& blocklist) {
  std::string_view t = trim_view(target);
  while (!t.empty() && t.front() == ':') {  // [[:Category:X]] is still a Category link
    t.remove_prefix(1);
    t = trim_view(t);
  }
  if (t.empty()) return false;
  for (char c : t)
    if (c == '<' || c == '>' || c == '[' || c == ']' || c == '{' || c == '}' || c == '\n')
      return false;
  if (t.find("://") != std::string_view::npos) return false;

  auto colon = t.find(':');
  if (colon != std::string_view::npos) {
    std::string prefix = normalize_prefix(t.substr(0, colon));
    for (const std::string& blocked : blocklist.prefixes)
      if (prefix == blocked) return false;
  }
  std::string low = ascii_lower(t);
  for (const std::string& suffix : blocklist.suffixes) {
    if (low.size() >= suffix.size() &&
        low.compare(low.size() - suffix.size(), suffix.size(), suffix) == 0)
      return false;
  }
  return !canonical_title(t).empty();
}

bool is_valid_link(std::string_view target) {
  static const LinkBlocklist defaults = LinkBlocklist::defaults();
  return is_valid_link(target, defaults);
}

std::optional<std::string> extract_first_link(std::string_view markup,
                                              const LinkBlocklist& blocklist) {
  enum class Header { kNone, kOpening, kClosing };
  const std::size_t n = markup.size();
  std::size_t i = 0;
  FlagState flags;
  Header header = Header::kNone;

  auto match = [&](std::string_view lit) {
    return markup.size() - i >= lit.size() && markup.compare(i, lit.size(), lit) == 0;
  };
  // Matches <ref/<div/<gallery and their closers at i; enters header mode.
  auto try_tag = [&]() -> bool {
    if (markup[i] != '<') return false;
    std::size_t p = i + 1;
    bool closing = false;
    if (p < n && markup[p] == '/') {
      closing = true;
      ++p;
    }
    for (std::string_view name : {std::string_view("ref"), std::string_view("div"),
                                  std::string_view("gallery")}) {
      if (n - p < name.size() || !ci_equal(markup.substr(p, name.size()), name)) continue;
      std::size_t after = p + name.size();
      if (after < n) {
        char c = markup[after];
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n' && c != '>' && c != '/') continue;
      }
      header = closing ? Header::kClosing : Header::kOpening;
      i = after;
      return true;
    }
    return false;
  };
  // Parens buffered inside an abandoned link candidate become ordinary text.
  auto commit_parens = [&](std::string_view text) {
    for (char c : text) {
      if (c == '(') ++flags.paren_depth;
      if (c == ')' && flags.paren_depth > 0) --flags.paren_depth;
    }
  };

  while (i < n) {
    if (flags.comment_active) {
      if (match("-->")) {
        flags.comment_active = false;
        i += 3;
      } else {
        ++i;
      }
      continue;
    }
    if (header != Header::kNone) {
      if (match("/>")) {
        if (header == Header::kClosing && flags.tag_depth > 0) --flags.tag_depth;
        header = Header::kNone;
        i += 2;
      } else if (markup[i] == '>') {
        if (header == Header::kOpening) {
          ++flags.tag_depth;
        } else if (flags.tag_depth > 0) {
          --flags.tag_depth;
        }
        header = Header::kNone;
        ++i;
      } else {
        ++i;
      }
      continue;
    }
    if (flags.template_depth > 0) {
      if (match("<!--")) {
        flags.comment_active = true;
        i += 4;
      } else if (match("{{")) {
        ++flags.template_depth;
        i += 2;
      } else if (match("}}")) {
        --flags.template_depth;
        i += 2;
      } else {
        ++i;
      }
      continue;
    }
    if (flags.tag_depth > 0 || flags.table_depth > 0) {
      if (match("<!--")) {
        flags.comment_active = true;
        i += 4;
      } else if (match("{{")) {
        ++flags.template_depth;
        i += 2;
      } else if (try_tag()) {
      } else if (match("{|")) {
        ++flags.table_depth;
        i += 2;
      } else if (match("|}")) {
        if (flags.table_depth > 0) --flags.table_depth;
        i += 2;
      } else {
        ++i;
      }
      continue;
    }

    // Plain body text; only the paren flag may be up here.
    if (match("<!--")) {
      flags.comment_active = true;
      i += 4;
      continue;
    }
    if (match("{{")) {
      ++flags.template_depth;
      i += 2;
      continue;
    }
    if (match("{|")) {
      ++flags.table_depth;
      i += 2;
      continue;
    }
    if (try_tag()) continue;
    if (match("[[")) {
      bool eligible = flags.all_clear();
      i += 2;
      std::string target;
      bool capturing = true;
      bool aborted = false;
      int link_depth = 1;
      while (i < n) {
        if (capturing) {
          if (match("]]")) {
            i += 2;
            link_depth = 0;
            break;
          }
          if (match("[[")) {
            // The earlier "[[" was not a link; its buffered text is plain.
            commit_parens(target);
            eligible = flags.all_clear();
            target.clear();
            i += 2;
            continue;
          }
          char c = markup[i];
          if (c == '|') {
            capturing = false;
            ++i;
            continue;
          }
          if (c == '{' || c == '}' || c == '<' || c == '>' || c == '[' || c == ']' ||
              c == '\n') {
            commit_parens(target);
            aborted = true;  // resume the outer machine at this character
            break;
          }
          target.push_back(c);
          ++i;
        } else {
          // Piped part: captions may hold nested links and span lines.
          if (match("[[")) {
            ++link_depth;
            i += 2;
          } else if (match("]]")) {
            --link_depth;
            i += 2;
            if (link_depth == 0) break;
          } else {
            ++i;
          }
        }
      }
      if (aborted) continue;
      if (link_depth != 0) break;  // unclosed link swallows the rest
      if (eligible) {
        std::string t(trim_view(std::string_view(target).substr(0, target.find('#'))));
        if (is_valid_link(t, blocklist)) return canonical_title(t);
      }
      continue;
    }
    if (markup[i] == '(') {
      ++flags.paren_depth;
      ++i;
      continue;
    }
    if (markup[i] == ')') {
      if (flags.paren_depth > 0) --flags.paren_depth;
      ++i;
      continue;
    }
    ++i;
  }
  return std::nullopt;
}

std::optional<std::string> extract_first_link(std::string_view markup) {
  static const LinkBlocklist defaults = LinkBlocklist::defaults();
  return extract_first_link(markup, defaults);
}

std::optional<std::string> parse_redirect(std::string_view markup) {
  std::string_view s = markup;
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
  s = trim_view(s);
  if (s.empty() || s.front() != '#') return std::nullopt;
  s.remove_prefix(1);
  std::size_t k = 0;
  while (k < s.size() && std::isalpha(static_cast<unsigned char>(s[k]))) ++k;
  if (!ci_equal(s.substr(0, k), "redirect")) return std::nullopt;
  s.remove_prefix(k);
  s = trim_view(s);
  if (!s.empty() && s.front() == ':') {
    s.remove_prefix(1);
    s = trim_view(s);
  }
  if (s.size() < 2 || s.substr(0, 2) != "[[") return std::nullopt;
  s.remove_prefix(2);
  auto end = s.find("]]");
  if (end == std::string_view::npos) return std::nullopt;
  std::string_view target = s.substr(0, end);
  target = target.substr(0, std::min(target.find('|'), target.find('#')));
  std::string canonical = canonical_title(trim_view(target));
  if (canonical.empty()) return std::nullopt;
  return canonical;
}

// ---- dump streaming --------------------------------------------------------

namespace {

std::string xml_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string_view entity = s.substr(i + 1, semi - i - 1);
    if (entity == "lt") {
      out.push_back('<');
    } else if (entity == "gt") {
      out.push_back('>');
    } else if (entity == "amp") {
      out.push_back('&');
    } else if (entity == "quot") {
      out.push_back('"');
    } else if (entity == "apos") {
      out.push_back('\'');
    } else if (!entity.empty() && entity.front() == '#') {
      long code = 0;
      bool ok = false;
      if (entity.size() > 2 && (entity[1] == 'x' || entity[1] == 'X')) {
        code = std::strtol(std::string(entity.substr(2)).c_str(), nullptr, 16);
        ok = true;
      } else if (entity.size() > 1) {
        code = std::strtol(std::string(entity.substr(1)).c_str(), nullptr, 10);
        ok = true;
      }
      if (ok && code > 0 && code < 128) {
        out.push_back(static_cast<char>(code));
      } else if (ok && code >= 128) {  // encode as UTF-8
        char buf[5] = {};
        if (code < 0x800) {
          buf[0] = static_cast<char>(0xC0 | (code >> 6));
          buf[1] = static_cast<char>(0x80 | (code & 0x3F));
        } else if (code < 0x10000) {
          buf[0] = static_cast<char>(0xE0 | (code >> 12));
          buf[1] = static_cast<char>(0x80 | ((code >> 6) & 0x3F));
          buf[2] = static_cast<char>(0x80 | (code & 0x3F));
        } else {
          buf[0] = static_cast<char>(0xF0 | (code >> 18));
          buf[1] = static_cast<char>(0x80 | ((code >> 12) & 0x3F));
          buf[2] = static_cast<char>(0x80 | ((code >> 6) & 0x3F));
          buf[3] = static_cast<char>(0x80 | (code & 0x3F));
        }
        out += buf;
      } else {
        out.append(s.substr(i, semi - i + 1));
      }
    } else {
      out.append(s.substr(i, semi - i + 1));
    }
    i = semi + 1;
  }
  return out;
}

// Inner text of the first <name>...</name> element, unescaped.
std::optional<std::string> element_text(std::string_view blob, std::string_view name) {
  std::string open = "<" + std::string(name) + ">";
  std::string close = "</" + std::string(name) + ">";
  auto start = blob.find(open);
  if (start == std::string_view::npos) return std::nullopt;
  start += open.size();
  auto end = blob.find(close, start);
  if (end == std::string_view::npos) return std::nullopt;
  return xml_unescape(blob.substr(start, end - start));
}

// <text ...> needs attribute handling and may be self-closing.
std::optional<std::string> text_element(std::string_view blob) {
  auto start = blob.find("<text");
  if (start == std::string_view::npos) return std::nullopt;
  auto gt = blob.find('>', start);
  if (gt == std::string_view::npos) return std::nullopt;
  if (blob[gt - 1] == '/') return std::string();  // <text ... />
  auto end = blob.find("</text>", gt + 1);
  if (end == std::string_view::npos) return std::nullopt;
  return xml_unescape(blob.substr(gt + 1, end - gt - 1));
}

std::optional<std::string> redirect_attribute(std::string_view blob) {
  auto pos = blob.find("<redirect");
  if (pos == std::string_view::npos) return std::nullopt;
  auto title_pos = blob.find("title=\"", pos);
  if (title_pos == std::string_view::npos) return std::nullopt;
  title_pos += 7;
  auto end = blob.find('"', title_pos);
  if (end == std::string_view::npos) return std::nullopt;
  return xml_unescape(blob.substr(title_pos, end - title_pos));
}

RawPage parse_page_blob(std::string_view blob, std::uint64_t offset) {
  RawPage page;
  auto title = element_text(blob, "title");
  if (!title || title->empty())
    throw InputError("malformed XML: page without <title> at byte " + std::to_string(offset));
  page.title = std::move(*title);

  if (auto ns = element_text(blob, "ns")) {
    std::string trimmed(trim_view(*ns));
    page.ns = (trimmed == "0") ? "" : trimmed;
  } else {
    auto colon = page.title.find(':');
    if (colon != std::string::npos &&
        is_known_namespace(normalize_prefix(std::string_view(page.title).substr(0, colon))))
      page.ns = page.title.substr(0, colon);
  }

  if (auto text = text_element(blob)) page.markup = std::move(*text);

  std::optional<std::string> target = redirect_attribute(blob);
  if (target) target = canonical_title(*target);
  if (!target || target->empty()) target = parse_redirect(page.markup);
  if (target && !target->empty()) {
    page.is_redirect = true;
    page.redirect_target = std::move(*target);
  }
  return page;
}

void scan_pages(std::istream& xml, std::size_t page_cap,
                const std::function<void(RawPage&&, std::uint64_t)>& sink, DumpStats& stats) {
  constexpr std::size_t kChunk = 1 << 20;
  constexpr std::string_view kOpen = "<page>";
  constexpr std::string_view kClose = "</page>";

  std::string buf;
  std::uint64_t discarded = 0;  // bytes dropped from the front of buf
  bool skipping_oversized = false;
  std::uint64_t skip_offset = 0;
  std::string chunk(kChunk, '\0');

  auto drop_front = [&](std::size_t count) {
    buf.erase(0, count);
    discarded += count;
  };

  bool eof = false;
  while (!eof || !buf.empty()) {
    if (!eof) {
      xml.read(chunk.data(), static_cast<std::streamsize>(kChunk));
      std::size_t got = static_cast<std::size_t>(xml.gcount());
      if (got == 0) {
        eof = true;
      } else {
        buf.append(chunk.data(), got);
      }
    }

    bool progressed = true;
    while (progressed) {
      progressed = false;
      if (skipping_oversized) {
        auto close = buf.find(kClose);
        if (close == std::string::npos) {
          if (buf.size() > kClose.size()) drop_front(buf.size() - kClose.size());
          break;
        }
        drop_front(close + kClose.size());
        skipping_oversized = false;
        ++stats.oversized;
        ++stats.pages_skipped;
        progressed = true;
        continue;
      }
      auto open = buf.find(kOpen);
      if (open == std::string::npos) {
        // Keep a tail in case "<page>" straddles the chunk boundary.
        if (buf.size() > kOpen.size()) drop_front(buf.size() - kOpen.size());
        break;
      }
      if (open > 0) drop_front(open);
      auto close = buf.find(kClose, kOpen.size());
      if (close == std::string::npos) {
        if (buf.size() > page_cap) {
          skip_offset = discarded;
          skipping_oversized = true;
          if (buf.size() > kClose.size()) drop_front(buf.size() - kClose.size());
          progressed = true;
          continue;
        }
        if (eof)
          throw InputError("malformed XML: unterminated <page> element at byte " +
                           std::to_string(discarded));
        break;  // need more input
      }
      std::uint64_t page_offset = discarded;
      std::string_view blob(buf.data(), close + kClose.size());
      if (blob.size() > page_cap) {
        ++stats.oversized;
        ++stats.pages_skipped;
      } else {
        sink(parse_page_blob(blob, page_offset), page_offset);
      }
      drop_front(close + kClose.size());
      progressed = true;
    }
    if (eof && buf.size() <= kOpen.size()) break;
    if (eof && !skipping_oversized && buf.find(kOpen) == std::string::npos) break;
    if (eof && skipping_oversized) {
      throw InputError("malformed XML: unterminated <page> element at byte " +
                       std::to_string(skip_offset));
    }
  }
}

bool main_namespace(const RawPage& page) { return page.ns.empty(); }

std::optional<std::string> resolve_first_link(const RawPage& page,
                                              const LinkBlocklist& blocklist) {
  if (page.is_redirect) return page.redirect_target;
  return extract_first_link(page.markup, blocklist);
}

}  // namespace

DumpStats parse_dump(std::istream& xml, const DumpOptions& options,
                     const std::function<void(const RawPage&, const std::optional<std::string>&)>& emit) {
  DumpStats stats;
  scan_pages(xml, options.page_cap,
             [&](RawPage&& page, std::uint64_t) {
               if (!main_namespace(page)) {
                 ++stats.pages_skipped;
                 return;
               }
               ++stats.pages_seen;
               emit(page, resolve_first_link(page, options.blocklist));
             },
             stats);
  return stats;
}

ExtractResult shard_parse(std::istream& xml, unsigned workers, const DumpOptions& options) {
  workers = std::max(1u, workers);
  constexpr std::size_t kBatch = 256;

  ExtractResult out;
  std::unordered_set<std::string> seen;
  std::vector<RawPage> batch;
  batch.reserve(kBatch);

  auto flush = [&]() {
    if (batch.empty()) return;
    std::vector<std::optional<std::string>> links(batch.size());
    if (workers == 1 || batch.size() == 1) {
      for (std::size_t i = 0; i < batch.size(); ++i)
        links[i] = resolve_first_link(batch[i], options.blocklist);
    } else {
      // Whole pages are the sharding unit; slice the batch deterministically.
      std::vector<std::thread> threads;
      std::size_t per = (batch.size() + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = std::min(batch.size(), w * per);
        std::size_t hi = std::min(batch.size(), (w + 1) * per);
        if (lo >= hi) break;
        threads.emplace_back([&, lo, hi] {
          for (std::size_t i = lo; i < hi; ++i)
            links[i] = resolve_first_link(batch[i], options.blocklist);
        });
      }
      for (auto& t : threads) t.join();
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      std::string title = canonical_title(batch[i].title);
      if (title.empty()) {
        ++out.stats.pages_skipped;
        continue;
      }
      if (!seen.insert(title).second) {
        ++out.duplicate_titles;
        continue;
      }
      Edge e;
      e.source = std::move(title);
      e.target = std::move(links[i]);
      out.edges.push_back(std::move(e));
    }
    batch.clear();
  };

  scan_pages(xml, options.page_cap,
             [&](RawPage&& page, std::uint64_t) {
               if (!main_namespace(page)) {
                 ++out.stats.pages_skipped;
                 return;
               }
               ++out.stats.pages_seen;
               batch.push_back(std::move(page));
               if (batch.size() >= kBatch) flush();
             },
             out.stats);
  flush();
  return out;
}

ExtractResult shard_parse(const std::string& dump_path, unsigned workers,
                          const DumpOptions& options) {
  std::ifstream in(dump_path, std::ios::binary);
  if (!in) throw InputError("cannot open dump: " + dump_path);
  return shard_parse(in, workers, options);
}

}  // namespace fln
