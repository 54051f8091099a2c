#include "fln/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "fln/centrality.hpp"
#include "fln/report.hpp"
#include "fln/traversal.hpp"

namespace fln {
namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  return out;
}

void require_readable(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot open ") + what + ": " + path);
}

std::string blocklist_token(const RunConfig& config) {
  if (config.blocklist_path.empty()) return "default";
  std::ifstream in(config.blocklist_path, std::ios::binary);
  if (!in) throw InputError("cannot open blocklist: " + config.blocklist_path);
  std::stringstream ss;
  ss << in.rdbuf();
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(ss.str())));
  return buf;
}

// Workers and file paths stay out of the hash: the same inputs and settings
// must produce byte-identical reports regardless of parallelism or location.
std::string config_string(const char* command, const RunConfig& config) {
  std::ostringstream ss;
  ss << command << "|top_k=" << config.top_k << "|oracle_bound=" << config.oracle_bound
     << "|xmin_min=" << config.xmin_limits.xmin_min
     << "|xmin_max=" << config.xmin_limits.xmin_max << "|page_cap=" << config.page_cap
     << "|column=" << config.column << "|blocklist=" << blocklist_token(config);
  return ss.str();
}

LinkBlocklist load_blocklist(const RunConfig& config) {
  return config.blocklist_path.empty() ? LinkBlocklist::defaults()
                                       : LinkBlocklist::from_file(config.blocklist_path);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
    fields.back().pop_back();
  return fields;
}

std::uint64_t parse_count(const std::string& field, const std::string& context) {
  if (field.empty()) throw InputError(context + ": empty count field");
  std::uint64_t value = 0;
  for (char c : field) {
    if (c < '0' || c > '9') throw InputError(context + ": not a count: '" + field + "'");
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return value;
}

// Per-node metrics file as written by analyze: comment lines, then an
// "id<TAB>title<TAB>..." header, then one row per node.
struct MetricsTable {
  std::vector<std::string> header;
  std::vector<std::uint64_t> ids;
  std::vector<std::string> titles;
  std::vector<std::vector<std::uint64_t>> numeric;  // [column - 2][row]

  std::size_t column_index(const std::string& name) const {
    for (std::size_t c = 2; c < header.size(); ++c)
      if (header[c] == name) return c - 2;
    throw InputError("metrics file has no column '" + name + "'");
  }
  const std::vector<std::uint64_t>& column(const std::string& name) const {
    return numeric[column_index(name)];
  }
};

MetricsTable read_metrics(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open metrics file: " + path);

  MetricsTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    table.header = split_tabs(line);
    break;
  }
  if (table.header.size() < 3 || table.header[0] != "id" || table.header[1] != "title")
    throw InputError("metrics file " + path + ": expected 'id<TAB>title<TAB>...' header");
  table.numeric.resize(table.header.size() - 2);

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_tabs(line);
    const std::string context = "metrics file line " + std::to_string(line_no);
    if (fields.size() != table.header.size())
      throw InputError(context + ": expected " + std::to_string(table.header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    table.ids.push_back(parse_count(fields[0], context));
    table.titles.push_back(fields[1]);
    for (std::size_t c = 2; c < fields.size(); ++c)
      table.numeric[c - 2].push_back(parse_count(fields[c], context));
  }
  return table;
}

template <typename Value>
void write_ranked(const std::string& path, const std::string& header,
                  const ArticleTable& table, const std::vector<Value>& values) {
  auto ranked = rank_nodes(values);
  auto out = open_out(path);
  out << header << "rank\tid\ttitle\tvalue\n";
  for (std::size_t r = 0; r < ranked.size(); ++r)
    out << (r + 1) << '\t' << ranked[r].first << '\t' << table.title_of(ranked[r].first)
        << '\t' << ranked[r].second << '\n';
}

void write_summary_row(std::ostream& out, const char* name,
                       const std::vector<std::uint64_t>& values) {
  if (values.empty()) return;
  DistributionSummary s = distribution_summary(values, 1);  // count_below(1) = zeros
  out << name << '\t' << s.count << '\t' << s.count_below << '\t' << s.min << '\t'
      << format_double(s.q25) << '\t' << format_double(s.median) << '\t'
      << format_double(s.q75) << '\t' << s.max << '\n';
}

}  // namespace

ExtractSummary run_extract(const RunConfig& config) {
  DumpOptions options;
  options.page_cap = config.page_cap;
  options.blocklist = load_blocklist(config);

  // "-" reads the dump from stdin, so compressed dumps can be piped through
  // bzcat/zcat without a decompression dependency here.
  ExtractResult parsed = [&] {
    if (config.input_path == "-") return shard_parse(std::cin, config.workers, options);
    require_readable(config.input_path, "dump");
    return shard_parse(config.input_path, config.workers, options);
  }();
  auto [graph, table] = build_graph(parsed.edges);
  save_edges(graph, table, config.out_path);

  ExtractSummary summary;
  summary.dump = parsed.stats;
  summary.duplicate_titles = parsed.duplicate_titles;
  summary.nodes = graph.size();
  for (ArticleId v = 0; v < graph.size(); ++v)
    if (graph.has_successor(v)) ++summary.linked;
  return summary;
}

AnalyzeSummary run_analyze(const RunConfig& config) {
  auto [graph, table] = load_edges(config.input_path);
  fs::create_directories(config.out_path);
  const std::string header = report_header(config_string("analyze", config));
  const std::string dir = config.out_path + "/";

  CycleSet cycles = detect_cycles(graph);
  std::vector<std::uint64_t> visits = compute_visits(graph, cycles, config.workers);
  FunnelCounts funnels = compute_funnels(graph, cycles, config.workers);
  std::vector<std::uint64_t> lengths = compute_path_lengths(graph, cycles);
  DegreeStats degrees = in_degree(graph);

  AnalyzeSummary summary;
  summary.nodes = graph.size();
  summary.cycle_count = cycles.cycles.size();
  for (const auto& c : cycles.cycles) summary.cycle_members += c.size();

  {
    auto out = open_out(dir + "metrics.tsv");
    out << header << "id\ttitle\tvisits\tfunnels\tpath_length\tin_degree\n";
    for (ArticleId v = 0; v < graph.size(); ++v)
      out << v << '\t' << table.title_of(v) << '\t' << visits[v] << '\t'
          << funnels.counts[v] << '\t' << lengths[v] << '\t' << degrees.in_degree[v]
          << '\n';
    summary.files.push_back("metrics.tsv");
  }

  write_ranked(dir + "visits_ranked.tsv", header, table, visits);
  write_ranked(dir + "funnels_ranked.tsv", header, table, funnels.counts);
  write_ranked(dir + "path_length_ranked.tsv", header, table, lengths);
  write_ranked(dir + "in_degree_ranked.tsv", header, table, degrees.in_degree);
  summary.files.insert(summary.files.end(),
                       {"visits_ranked.tsv", "funnels_ranked.tsv",
                        "path_length_ranked.tsv", "in_degree_ranked.tsv"});

  {
    // Census of cycle lengths, then the top cycles by accumulated visits.
    auto out = open_out(dir + "cycle_census.tsv");
    out << header << "length\tcount\n";
    std::map<std::size_t, std::size_t> census;
    for (const auto& c : cycles.cycles) ++census[c.size()];
    for (const auto& [len, count] : census) out << len << '\t' << count << '\n';
    summary.files.push_back("cycle_census.tsv");
  }
  {
    std::vector<std::pair<std::uint64_t, std::size_t>> scored;  // (sum visits, index)
    for (std::size_t c = 0; c < cycles.cycles.size(); ++c) {
      std::uint64_t total = 0;
      for (ArticleId m : cycles.cycles[c]) total += visits[m];
      scored.emplace_back(total, c);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    auto out = open_out(dir + "top_cycles.tsv");
    out << header << "rank\tlength\ttotal_visits\tmembers\n";
    for (std::size_t r = 0; r < std::min(config.top_k, scored.size()); ++r) {
      const auto& cycle = cycles.cycles[scored[r].second];
      out << (r + 1) << '\t' << cycle.size() << '\t' << scored[r].first << '\t';
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i) out << '|';
        out << table.title_of(cycle[i]);
      }
      out << '\n';
    }
    summary.files.push_back("top_cycles.tsv");
  }
  {
    auto groups =
        path_connected_groups(graph, cycles, visits, funnels.counts, config.top_k);
    auto out = open_out(dir + "groups.tsv");
    out << header << "rank\tseed_id\tseed_title\tscore\tmembers\n";
    for (std::size_t r = 0; r < groups.size(); ++r) {
      out << (r + 1) << '\t' << groups[r].seed << '\t' << table.title_of(groups[r].seed)
          << '\t' << groups[r].score << '\t';
      for (std::size_t i = 0; i < groups[r].members.size(); ++i) {
        if (i) out << '|';
        out << table.title_of(groups[r].members[i]);
      }
      out << '\n';
    }
    summary.files.push_back("groups.tsv");
  }
  {
    auto out = open_out(dir + "summary.tsv");
    out << header << "metric\tcount\tzeros\tmin\tq25\tmedian\tq75\tmax\n";
    write_summary_row(out, "visits", visits);
    write_summary_row(out, "funnels", funnels.counts);
    write_summary_row(out, "path_length", lengths);
    write_summary_row(out, "in_degree", degrees.in_degree);
    summary.files.push_back("summary.tsv");
  }
  if (graph.size() >= 3 && graph.size() <= config.oracle_bound) {
    // Small-graph centrality contrast next to the funnel numbers.
    auto out = open_out(dir + "centrality.tsv");
    out << header << "id\ttitle\tmethod\tscore\n";
    CentralityScores bc = betweenness(graph);
    for (ArticleId v = 0; v < graph.size(); ++v)
      out << v << '\t' << table.title_of(v) << "\tbetweenness\t"
          << format_double(bc.scores[v]) << '\n';
    try {
      CentralityScores ec = eigenvector_centrality(graph);
      for (ArticleId v = 0; v < graph.size(); ++v)
        out << v << '\t' << table.title_of(v) << "\teigenvector\t"
            << format_double(ec.scores[v]) << '\n';
    } catch (const InputError& e) {
      out << "# eigenvector unavailable: " << e.what() << '\n';
    }
    summary.files.push_back("centrality.tsv");
  }
  return summary;
}

FitResult run_fit(const RunConfig& config) {
  MetricsTable metrics = read_metrics(config.input_path);
  const auto& column = metrics.column(config.column);

  // Zero counts are not part of the tail model; fits start at 1.
  std::vector<std::uint64_t> positives;
  positives.reserve(column.size());
  for (std::uint64_t v : column)
    if (v >= 1) positives.push_back(v);

  FitResult fit = fit_power_law(positives, config.xmin_limits);

  std::vector<ComparisonResult> comparisons;
  for (Alternative alt :
       {Alternative::kExponential, Alternative::kStretchedExponential,
        Alternative::kLognormal, Alternative::kTruncatedPowerLaw})
    comparisons.push_back(compare_distributions(positives, fit, alt));

  const std::string header = report_header(config_string("fit", config));
  {
    auto out = open_out(config.out_path);
    out << header << "metric\txmin\tgamma\talpha\tks_distance\tn_tail\n";
    out << config.column << '\t' << fit.xmin << '\t' << format_double(fit.gamma) << '\t'
        << format_double(fit.alpha) << '\t' << format_double(fit.ks_distance) << '\t'
        << fit.n_tail << '\n';
    out << "alternative\tR\tp\tconclusive\tnote\n";
    for (const auto& c : comparisons)
      out << alternative_name(c.alternative) << '\t' << format_double(c.R) << '\t'
          << format_double(c.p) << '\t' << (c.conclusive ? "yes" : "no") << '\t'
          << c.note << '\n';
  }

  // Plot-ready series next to the report.
  std::string stem = config.out_path;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".tsv") == 0)
    stem.resize(stem.size() - 4);
  {
    auto out = open_out(stem + "_rank.tsv");
    out << header << "rank\tvalue\n";
    for (const auto& [rank, value] : rank_frequency_series(positives))
      out << rank << '\t' << value << '\n';
  }
  {
    auto out = open_out(stem + "_ccdf.tsv");
    out << header << "value\tfraction\n";
    for (const auto& [value, fraction] : ccdf(positives))
      out << value << '\t' << format_double(fraction) << '\n';
  }
  return fit;
}

JoinSummary run_join_views(const RunConfig& config) {
  MetricsTable metrics = read_metrics(config.input_path);
  const auto& column = metrics.column(config.column);

  std::ifstream views_in(config.views_path, std::ios::binary);
  if (!views_in) throw InputError("cannot open views file: " + config.views_path);
  std::unordered_map<std::string, std::uint64_t> views;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(views_in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2)
      throw InputError("views line " + std::to_string(line_no) +
                       ": expected title<TAB>count");
    std::uint64_t count =
        parse_count(fields[1], "views line " + std::to_string(line_no));
    views.emplace(canonical_title(fields[0]), count);  // first occurrence wins
  }

  // Top rows of the chosen metric, value descending then id ascending.
  std::vector<std::size_t> order(metrics.ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (column[a] != column[b]) return column[a] > column[b];
    return metrics.ids[a] < metrics.ids[b];
  });

  JoinSummary summary;
  std::vector<std::uint64_t> matched_counts;
  const std::size_t take = std::min(config.top_k, order.size());
  for (std::size_t r = 0; r < take; ++r) {
    auto it = views.find(canonical_title(metrics.titles[order[r]]));
    if (it == views.end()) {
      ++summary.unmatched;
    } else {
      matched_counts.push_back(it->second);
    }
  }
  summary.matched = matched_counts.size();
  if (matched_counts.empty())
    throw InputError("popularity join refused: none of the top " +
                     std::to_string(take) + " '" + config.column +
                     "' titles appear in the views file");

  double mean = 0.0;
  for (std::uint64_t v : matched_counts) mean += static_cast<double>(v);
  mean /= static_cast<double>(matched_counts.size());
  double ss = 0.0;
  for (std::uint64_t v : matched_counts) {
    double d = static_cast<double>(v) - mean;
    ss += d * d;
  }
  DistributionSummary dist = distribution_summary(matched_counts);
  summary.mean = mean;
  summary.stddev = std::sqrt(ss / static_cast<double>(matched_counts.size()));
  summary.q25 = dist.q25;
  summary.median = dist.median;
  summary.q75 = dist.q75;
  summary.min = dist.min;
  summary.max = dist.max;

  if (!config.out_path.empty()) {
    auto out = open_out(config.out_path);
    out << report_header(config_string("join-views", config))
        << "metric\ttop_k\tmatched\tunmatched\tmean\tstddev\tq25\tmedian\tq75\tmin\tmax\n";
    out << config.column << '\t' << take << '\t' << summary.matched << '\t'
        << summary.unmatched << '\t' << format_double(summary.mean) << '\t'
        << format_double(summary.stddev) << '\t' << format_double(summary.q25) << '\t'
        << format_double(summary.median) << '\t' << format_double(summary.q75) << '\t'
        << summary.min << '\t' << summary.max << '\n';
  }
  return summary;
}

VerifyReport run_verify(const RunConfig& config) {
  auto [graph, table] = load_edges(config.input_path);
  MetricsTable metrics = read_metrics(config.metrics_path);
  const std::size_t n = graph.size();

  VerifyReport report;
  auto violation = [&](const std::string& message) {
    if (report.violations.size() < 25) report.violations.push_back(message);
  };

  if (metrics.ids.size() != n) {
    violation("metrics row count " + std::to_string(metrics.ids.size()) +
              " != graph node count " + std::to_string(n));
    return report;
  }
  // Row order must be the dense id order the graph uses.
  std::vector<std::uint64_t> visits, funnels, lengths, degrees;
  for (std::size_t row = 0; row < n; ++row) {
    if (metrics.ids[row] != row) {
      violation("row " + std::to_string(row) + " has id " +
                std::to_string(metrics.ids[row]));
      return report;
    }
    if (metrics.titles[row] != table.title_of(static_cast<ArticleId>(row)))
      violation("id " + std::to_string(row) + ": title mismatch '" +
                metrics.titles[row] + "'");
  }
  visits = metrics.column("visits");
  funnels = metrics.column("funnels");
  lengths = metrics.column("path_length");
  degrees = metrics.column("in_degree");

  CycleSet cycles = detect_cycles(graph);
  const auto& succ = graph.raw_successors();

  std::vector<std::uint64_t> pred_visits(n, 0), pred_funnels(n, 0), indeg(n, 0);
  std::uint64_t edges_present = 0;
  for (ArticleId u = 0; u < n; ++u) {
    if (succ[u] == kNoSuccessor) continue;
    ++edges_present;
    ++indeg[succ[u]];
    pred_visits[succ[u]] += visits[u];
    pred_funnels[succ[u]] += funnels[u];
  }

  std::uint64_t degree_total = 0;
  for (ArticleId v = 0; v < n; ++v) {
    ++report.checked;
    degree_total += degrees[v];
    if (degrees[v] != indeg[v])
      violation("id " + std::to_string(v) + ": in_degree " + std::to_string(degrees[v]) +
                " != recount " + std::to_string(indeg[v]));
    if (funnels[v] > visits[v])
      violation("id " + std::to_string(v) + ": funnels " + std::to_string(funnels[v]) +
                " > visits " + std::to_string(visits[v]));
    if (cycles.on_cycle(v)) {
      if (funnels[v] != 0)
        violation("id " + std::to_string(v) + ": cycle member with funnels " +
                  std::to_string(funnels[v]));
    } else {
      // The visit and funnel laws; every predecessor of a non-cycle node is
      // itself off-cycle, so the predecessor sums apply directly.
      if (visits[v] != pred_visits[v] + 1)
        violation("id " + std::to_string(v) + ": visits " + std::to_string(visits[v]) +
                  " != 1 + predecessor sum " + std::to_string(pred_visits[v]));
      if (funnels[v] != pred_funnels[v] + 1)
        violation("id " + std::to_string(v) + ": funnels " + std::to_string(funnels[v]) +
                  " != 1 + predecessor sum " + std::to_string(pred_funnels[v]));
    }
  }
  if (degree_total != edges_present)
    violation("sum of in_degree " + std::to_string(degree_total) +
              " != edges present " + std::to_string(edges_present));

  // Cycle plateau: members share visits equal to basin size (tree feed plus
  // the cycle itself); path length is the cycle size (0 for self links).
  std::vector<std::uint64_t> cycle_feed(cycles.cycles.size(), 0);
  for (ArticleId u = 0; u < n; ++u) {
    if (cycles.on_cycle(u) || succ[u] == kNoSuccessor) continue;
    if (cycles.on_cycle(succ[u])) cycle_feed[cycles.cycle_id[succ[u]]] += visits[u];
  }
  for (std::size_t c = 0; c < cycles.cycles.size(); ++c) {
    const auto& cycle = cycles.cycles[c];
    std::uint64_t basin = cycle_feed[c] + cycle.size();
    std::uint64_t expected_len = cycle.size() == 1 ? 0 : cycle.size();
    for (ArticleId m : cycle) {
      if (visits[m] != basin)
        violation("id " + std::to_string(m) + ": cycle visits " +
                  std::to_string(visits[m]) + " != basin " + std::to_string(basin));
      if (lengths[m] != expected_len)
        violation("id " + std::to_string(m) + ": cycle path_length " +
                  std::to_string(lengths[m]) + " != " + std::to_string(expected_len));
    }
  }
  // Tree path lengths step by one toward the terminal.
  for (ArticleId v = 0; v < n; ++v) {
    if (cycles.on_cycle(v)) continue;
    if (succ[v] == kNoSuccessor) {
      if (lengths[v] != 0)
        violation("id " + std::to_string(v) + ": dead end with path_length " +
                  std::to_string(lengths[v]));
      continue;
    }
    ArticleId s = succ[v];
    std::uint64_t expected;
    if (cycles.on_cycle(s))
      expected = cycles.cycles[cycles.cycle_id[s]].size() + 1;
    else
      expected = lengths[s] + 1;
    if (lengths[v] != expected)
      violation("id " + std::to_string(v) + ": path_length " + std::to_string(lengths[v]) +
                " != " + std::to_string(expected));
  }

  // Small graphs also get the dense-matrix route.
  if (n > 0 && n <= config.oracle_bound) {
    VisitMatrix matrix(graph, config.oracle_bound);
    auto rows = matrix.row_sums();
    for (ArticleId v = 0; v < n; ++v)
      if (visits[v] != rows[v])
        violation("id " + std::to_string(v) + ": visits " + std::to_string(visits[v]) +
                  " != matrix row sum " + std::to_string(rows[v]));
  }
  return report;
}

}  // namespace fln
