#include <doctest.h>

#include <random>
#include <sstream>

#include "fln/graph.hpp"
#include "helpers/fixtures.hpp"

using namespace fln;

TEST_CASE("canonical_title normalizes case, underscores, and whitespace") {
  CHECK(canonical_title("rail transport") == "Rail transport");
  CHECK(canonical_title("rail_transport") == "Rail transport");
  CHECK(canonical_title("  Rail  transport ") == "Rail transport");
  CHECK(canonical_title("Rail transport") == "Rail transport");
  CHECK(canonical_title("_") == "");
  CHECK(canonical_title("élan") == "élan");  // non-ASCII first byte left alone
  // idempotent
  CHECK(canonical_title(canonical_title("foo__bar_baz")) == canonical_title("foo__bar_baz"));
}

TEST_CASE("build_graph on empty input") {
  auto [graph, table] = build_graph({});
  CHECK(graph.size() == 0);
  CHECK(table.size() == 0);
}

TEST_CASE("build_graph keeps self links") {
  auto [graph, table] = build_graph({{"A", "A"}});
  CHECK(graph.size() == 1);
  REQUIRE(graph.successor(0).has_value());
  CHECK(*graph.successor(0) == 0);
}

TEST_CASE("build_graph interns targets as successor-less nodes") {
  auto [graph, table] = build_graph({{"A", "B"}});
  CHECK(graph.size() == 2);
  CHECK(graph.has_successor(0));
  CHECK_FALSE(graph.has_successor(1));
  CHECK(table.title_of(1) == "B");
}

TEST_CASE("build_graph rejects duplicate sources, canonicalized") {
  CHECK_THROWS_WITH_AS(build_graph({{"A", "B"}, {"A", "C"}}),
                       doctest::Contains("duplicate source title: A"), InputError);
  // same title after canonicalization
  CHECK_THROWS_AS(build_graph({{"rail transport", "A"}, {"Rail_transport", "B"}}),
                  InputError);
}

TEST_CASE("sample network has every out-degree 1 and seven nodes") {
  auto [graph, table] = testing::sample_network();
  CHECK(graph.size() == 7);
  for (ArticleId v = 0; v < graph.size(); ++v) CHECK(graph.has_successor(v));
}

TEST_CASE("in_degree on the sample network") {
  auto [graph, table] = testing::sample_network();
  DegreeStats stats = in_degree(graph);
  CHECK(stats.in_degree[table.find("A")] == 2);
  CHECK(stats.in_degree[table.find("C")] == 2);
  CHECK(stats.in_degree[table.find("F")] == 0);
  std::uint64_t total = 0, present = 0;
  for (ArticleId v = 0; v < graph.size(); ++v) {
    total += stats.in_degree[v];
    if (graph.has_successor(v)) ++present;
  }
  CHECK(total == present);
}

TEST_CASE("in_degree of empty and cyclic graphs") {
  auto [empty, empty_table] = build_graph({});
  CHECK(in_degree(empty).in_degree.empty());

  DegreeStats ring = in_degree(testing::ring_graph(3));
  for (int v = 0; v < 3; ++v) CHECK(ring.in_degree[v] == 1);
}

TEST_CASE("rank_nodes orders by value then id") {
  SUBCASE("all equal -> id order") {
    auto ranked = rank_nodes(std::vector<std::uint64_t>{5, 5, 5});
    for (std::size_t i = 0; i < 3; ++i) CHECK(ranked[i].first == i);
  }
  SUBCASE("single nonzero first") {
    auto ranked = rank_nodes(std::vector<std::uint64_t>{0, 7, 0});
    CHECK(ranked[0].first == 1);
    CHECK(ranked[0].second == 7);
  }
  SUBCASE("output is a permutation") {
    auto ranked = rank_nodes(std::vector<std::uint64_t>{3, 1, 4, 1, 5});
    std::vector<bool> seen(5, false);
    for (auto& [id, value] : ranked) seen[id] = true;
    for (bool s : seen) CHECK(s);
    for (std::size_t i = 1; i < ranked.size(); ++i)
      CHECK(ranked[i - 1].second >= ranked[i].second);
  }
}

TEST_CASE("save/load round trip is the identity") {
  auto [graph, table] = testing::sample_network();
  std::ostringstream first;
  save_edges(graph, table, first);

  std::istringstream in(first.str());
  auto [loaded, loaded_table] = load_edges(in);
  CHECK(loaded.size() == graph.size());
  CHECK(loaded.raw_successors() == graph.raw_successors());
  for (ArticleId v = 0; v < graph.size(); ++v)
    CHECK(loaded_table.title_of(v) == table.title_of(v));

  std::ostringstream second;
  save_edges(loaded, loaded_table, second);
  CHECK(second.str() == first.str());  // byte-identical re-save
}

TEST_CASE("save/load round trip on random graphs with varied titles") {
  std::mt19937_64 rng(512);
  const std::vector<std::string> vocab = {
      "Zug",  "École", "Tree of life (biology)", "C++", "Łódź",
      "1953 in Scotland", "A&B", "naïve", "X-Y.Z", "Φυσική"};
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + rng() % 40;
    std::vector<Edge> edges;
    for (std::size_t v = 0; v < n; ++v) {
      Edge e;
      e.source = vocab[rng() % vocab.size()] + " " + std::to_string(v);
      if (rng() % 5)
        e.target = vocab[rng() % vocab.size()] + " " + std::to_string(rng() % n);
      edges.push_back(std::move(e));
    }
    auto [graph, table] = build_graph(edges);
    std::ostringstream out;
    save_edges(graph, table, out);
    std::istringstream in(out.str());
    auto [loaded, loaded_table] = load_edges(in);
    REQUIRE(loaded.raw_successors() == graph.raw_successors());
    for (ArticleId v = 0; v < graph.size(); ++v)
      REQUIRE(loaded_table.title_of(v) == table.title_of(v));
    std::ostringstream again;
    save_edges(loaded, loaded_table, again);
    REQUIRE(again.str() == out.str());
  }
}

TEST_CASE("save/load of an empty graph") {
  auto [graph, table] = build_graph({});
  std::ostringstream out;
  save_edges(graph, table, out);
  CHECK(out.str() == "source\ttarget\n");
  std::istringstream in(out.str());
  auto [loaded, loaded_table] = load_edges(in);
  CHECK(loaded.size() == 0);
}

TEST_CASE("load_edges reports malformed and duplicate lines by number") {
  SUBCASE("missing tab") {
    std::istringstream in("source\ttarget\nA\n");
    CHECK_THROWS_WITH_AS(load_edges(in), doctest::Contains("line 2"), InputError);
  }
  SUBCASE("duplicate source") {
    std::istringstream in("source\ttarget\nA\tB\nA\tC\n");
    CHECK_THROWS_WITH_AS(load_edges(in), doctest::Contains("line 3"), InputError);
  }
  SUBCASE("missing header") {
    std::istringstream in("");
    CHECK_THROWS_AS(load_edges(in), InputError);
  }
}
