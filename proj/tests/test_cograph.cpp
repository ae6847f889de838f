#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "defhyper/cograph.hpp"
#include "defhyper/corpus.hpp"
#include "defhyper/rng.hpp"

using namespace defhyper;

TEST(BuildGraph, SelfLoopSuppressed) {
  const auto g = build_graph({{"sql", "python"}}, {{"sql", "language"}, {"python", "language"}});
  EXPECT_EQ(g.nodes(), std::vector<std::string>{"language"});
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(BuildGraph, PairBecomesEdge) {
  const auto g = build_graph({{"sql", "mysql"}}, {{"sql", "language"}, {"mysql", "database"}});
  EXPECT_TRUE(g.has_edge("language", "database"));
  EXPECT_TRUE(g.has_edge("database", "language"));
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(BuildGraph, UnknownTermSkipped) {
  const auto g = build_graph({{"sql", "nosuch"}}, {{"sql", "language"}});
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_FALSE(g.has_node("nosuch"));
}

TEST(BuildGraph, OrderIndependent) {
  HypernymMap map;
  for (int k = 0; k < 30; ++k) map["t" + std::to_string(k)] = "h" + std::to_string(k % 11);
  Rng rng(3);
  std::vector<TagSet> sets;
  for (int s = 0; s < 20; ++s) {
    TagSet set;
    for (int m = 0; m < 4; ++m) set.push_back("t" + std::to_string(rng.below(35)));
    sets.push_back(set);
  }
  const auto reference = build_graph(sets, map);
  for (int trial = 0; trial < 10; ++trial) {
    auto shuffled = sets;
    rng.shuffle(shuffled.begin(), shuffled.end());
    for (auto& s : shuffled) rng.shuffle(s.begin(), s.end());
    EXPECT_EQ(build_graph(shuffled, map), reference);
  }
}

TEST(Centrality, Examples) {
  CooccurrenceGraph iso;
  iso.add_node("a");
  EXPECT_EQ(degree_centrality(iso, "a"), 0.0);
  EXPECT_EQ(degree_centrality(CooccurrenceGraph{}, "a"), 0.0);

  CooccurrenceGraph tri;
  tri.add_edge("a", "b");
  tri.add_edge("b", "c");
  tri.add_edge("c", "a");
  for (const char* v : {"a", "b", "c"}) EXPECT_EQ(degree_centrality(tri, v), 1.0);

  CooccurrenceGraph path;
  path.add_edge("a", "b");
  path.add_edge("b", "c");
  EXPECT_EQ(degree_centrality(path, "b"), 1.0);
  EXPECT_EQ(degree_centrality(path, "a"), 0.5);
  EXPECT_EQ(degree_centrality(path, "zzz"), 0.0);
}

TEST(Centrality, MatchesBruteForceOnRandomGraphs) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    const double density = rng.uniform();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    CooccurrenceGraph g;
    for (std::size_t v = 0; v < n; ++v) g.add_node("v" + std::to_string(v));
    for (int e = 0; e < static_cast<int>(density * n * n); ++e) {
      const auto u = rng.below(n), v = rng.below(n);
      g.add_edge("v" + std::to_string(u), "v" + std::to_string(v));
      if (u != v) adj[u][v] = adj[v][u] = true;
    }
    std::size_t max_deg = 0;
    std::vector<std::size_t> deg(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      deg[v] = static_cast<std::size_t>(std::count(adj[v].begin(), adj[v].end(), true));
      max_deg = std::max(max_deg, deg[v]);
    }
    ASSERT_EQ(g.max_degree(), max_deg);
    for (std::size_t v = 0; v < n; ++v) {
      const double dc = degree_centrality(g, "v" + std::to_string(v));
      const double scaled = dc * static_cast<double>(max_deg);
      EXPECT_EQ(static_cast<std::size_t>(std::lround(scaled)), deg[v]);
      EXPECT_NEAR(scaled, static_cast<double>(deg[v]), 1e-12);
    }
  }
}

TEST(Graph, NoDuplicatesOrSelfLoops) {
  CooccurrenceGraph g;
  EXPECT_TRUE(g.add_edge("a", "b"));
  EXPECT_FALSE(g.add_edge("b", "a"));
  EXPECT_FALSE(g.add_edge("a", "a"));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.degree("a"), 1u);
}

TEST(Graph, JsonRoundTrip) {
  CooccurrenceGraph g;
  g.add_edge("language", "database");
  g.add_edge("database", "tool");
  g.add_node("lonely");
  EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
}

TEST(Graph, TagSetFile) {
  std::istringstream in("sql mysql\n\n  python   java ruby \n");
  const auto sets = read_tag_sets(in);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[1], (TagSet{"python", "java", "ruby"}));
}

TEST(Graph, FromCorpusLabels) {
  Corpus train;
  train.definitions.push_back(parse_record(
      R"({"term":"sql","tokens":["sql","is","a","language"],"pos":["NN","VBZ","DT","NN"],"hypernym":"language","tag_partners":["mysql"]})"));
  train.definitions.push_back(parse_record(
      R"({"term":"mysql","tokens":["mysql","is","a","Database"],"pos":["NN","VBZ","DT","NN"],"hypernym":"Database"})"));
  const auto map = hypernym_map_from(train);
  EXPECT_EQ(map.at("sql"), "language");
  EXPECT_EQ(map.at("mysql"), "database");
  const auto sets = tag_sets_from(train);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0], (TagSet{"sql", "mysql"}));
  EXPECT_TRUE(build_graph(sets, map).has_edge("language", "database"));
}
