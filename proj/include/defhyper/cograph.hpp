#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "defhyper/corpus.hpp"

namespace defhyper {

// Undirected simple graph over lowercased hypernym lemmas.
class CooccurrenceGraph {
 public:
  CooccurrenceGraph() = default;

  // Adds the node if missing; returns its id.
  int add_node(std::string_view name);
  // Ignores self-loops and duplicates. Returns true if a new edge was added.
  bool add_edge(std::string_view u, std::string_view v);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_node(std::string_view name) const;
  bool has_edge(std::string_view u, std::string_view v) const;
  std::size_t degree(std::string_view name) const;
  std::size_t max_degree() const { return max_degree_; }

  // Sorted node names and sorted (u < v) edge list.
  std::vector<std::string> nodes() const;
  std::vector<std::pair<std::string, std::string>> edges() const;

  bool operator==(const CooccurrenceGraph& other) const {
    return nodes() == other.nodes() && edges() == other.edges();
  }

 private:
  int find(std::string_view name) const;

  std::vector<std::string> names_;
  std::map<std::string, int, std::less<>> ids_;
  std::set<std::pair<int, int>> edges_;
  std::vector<std::size_t> degrees_;
  std::size_t max_degree_ = 0;
};

using TagSet = std::vector<std::string>;
using HypernymMap = std::map<std::string, std::string>;

// Maps each tag set through hypernym_map (unknown terms skipped) and links
// every pair of distinct hypernyms in the mapped set.
CooccurrenceGraph build_graph(const std::vector<TagSet>& tag_sets, const HypernymMap& hypernym_map);

// degree / max_degree; 0 for absent nodes and edgeless graphs.
double degree_centrality(const CooccurrenceGraph& g, std::string_view node);

// term -> gold hypernym word (both lowercased) from annotated definitions.
HypernymMap hypernym_map_from(const Corpus& train);
// One group per definition that lists tag partners: {term} + partners.
std::vector<TagSet> tag_sets_from(const Corpus& corpus);

std::vector<TagSet> read_tag_sets(std::istream& in);
std::vector<TagSet> read_tag_sets_file(const std::string& path);

std::string graph_to_json(const CooccurrenceGraph& g);
CooccurrenceGraph graph_from_json(std::string_view text);

}  // namespace defhyper
