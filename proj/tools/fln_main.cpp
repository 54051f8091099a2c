// fln: extract a First Link Network from a MediaWiki dump, analyze its
// traversal structure, fit the metric distributions, and join page views.

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "fln/pipeline.hpp"
#include "fln/report.hpp"

namespace {

int run(const std::string& command, const fln::RunConfig& config) {
  if (command == "extract") {
    fln::ExtractSummary s = fln::run_extract(config);
    std::cout << "pages: " << s.dump.pages_seen << " (skipped " << s.dump.pages_skipped
              << ", oversized " << s.dump.oversized << ", duplicate titles "
              << s.duplicate_titles << ")\n"
              << "nodes: " << s.nodes << " (" << s.linked << " with a first link)\n"
              << "wrote " << config.out_path << "\n";
    return 0;
  }
  if (command == "analyze") {
    fln::AnalyzeSummary s = fln::run_analyze(config);
    std::cout << "nodes: " << s.nodes << ", cycles: " << s.cycle_count << " ("
              << s.cycle_members << " members)\n";
    for (const auto& f : s.files) std::cout << "wrote " << config.out_path << "/" << f << "\n";
    return 0;
  }
  if (command == "fit") {
    fln::FitResult fit = fln::run_fit(config);
    std::cout << config.column << ": xmin=" << fit.xmin
              << " gamma=" << fln::format_double(fit.gamma)
              << " alpha=" << fln::format_double(fit.alpha)
              << " ks=" << fln::format_double(fit.ks_distance) << " n_tail=" << fit.n_tail
              << "\nwrote " << config.out_path << "\n";
    return 0;
  }
  if (command == "join-views") {
    fln::JoinSummary s = fln::run_join_views(config);
    std::cout << "matched " << s.matched << " of top " << (s.matched + s.unmatched)
              << " by " << config.column << ": mean=" << fln::format_double(s.mean)
              << " stddev=" << fln::format_double(s.stddev)
              << " median=" << fln::format_double(s.median) << "\n";
    if (!config.out_path.empty()) std::cout << "wrote " << config.out_path << "\n";
    return 0;
  }
  // verify
  fln::VerifyReport report = fln::run_verify(config);
  if (report.ok()) {
    std::cout << "verified " << report.checked << " nodes: all traversal laws hold\n";
    return 0;
  }
  std::cerr << "verification failed:\n";
  for (const auto& v : report.violations) std::cerr << "  " << v << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First Link Network toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("fln ") + fln::kToolVersion);

  fln::RunConfig config;

  auto* extract = app.add_subcommand("extract", "Parse a pages-articles XML dump into an edge list");
  extract->add_option("dump", config.input_path, "XML dump path, or - for stdin")->required();
  extract->add_option("--out", config.out_path, "edge-list TSV to write")->required();
  extract->add_option("--workers", config.workers, "parser worker threads");
  extract->add_option("--blocklist", config.blocklist_path, "namespace blocklist override file");
  extract->add_option("--page-cap", config.page_cap, "single page byte cap");

  auto* analyze = app.add_subcommand("analyze", "Compute traversal metrics from an edge list");
  analyze->add_option("edges", config.input_path, "edge-list TSV")->required();
  analyze->add_option("--out", config.out_path, "output directory")->required();
  analyze->add_option("--workers", config.workers, "traversal partitions");
  analyze->add_option("--top-k", config.top_k, "rows in top-cycle and group reports");
  analyze->add_option("--oracle-bound", config.oracle_bound,
                      "largest graph for the dense-matrix and centrality extras");

  auto* fit = app.add_subcommand("fit", "Fit a power law to a metrics column");
  fit->add_option("metrics", config.input_path, "metrics TSV from analyze")->required();
  fit->add_option("--column", config.column, "metric column name")->required();
  fit->add_option("--out", config.out_path, "fit report TSV to write")->required();
  fit->add_option("--xmin-min", config.xmin_limits.xmin_min, "smallest xmin candidate");
  fit->add_option("--xmin-max", config.xmin_limits.xmin_max, "largest xmin candidate (0 = none)");

  auto* join = app.add_subcommand("join-views", "Join page-view counts onto a metric's top articles");
  join->add_option("metrics", config.input_path, "metrics TSV from analyze")->required();
  join->add_option("views", config.views_path, "title<TAB>count views TSV")->required();
  join->add_option("--column", config.column, "metric to rank by");
  join->add_option("--top-k", config.top_k, "articles to join");
  join->add_option("--out", config.out_path, "summary TSV to write");

  auto* verify = app.add_subcommand("verify", "Re-check the traversal laws over analyze output");
  verify->add_option("edges", config.input_path, "edge-list TSV")->required();
  verify->add_option("metrics", config.metrics_path, "metrics TSV to verify")->required();
  verify->add_option("--oracle-bound", config.oracle_bound,
                     "largest graph for the dense-matrix cross-check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config);
  } catch (const fln::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
