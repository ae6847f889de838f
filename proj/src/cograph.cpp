#include "defhyper/cograph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "defhyper/error.hpp"

namespace defhyper {

int CooccurrenceGraph::find(std::string_view name) const {
  const auto it = ids_.find(name);
  return it == ids_.end() ? -1 : it->second;
}

int CooccurrenceGraph::add_node(std::string_view name) {
  if (const int id = find(name); id >= 0) return id;
  const int id = static_cast<int>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  degrees_.push_back(0);
  return id;
}

bool CooccurrenceGraph::add_edge(std::string_view u, std::string_view v) {
  if (u == v) return false;
  int a = add_node(u);
  int b = add_node(v);
  if (a > b) std::swap(a, b);
  if (!edges_.emplace(a, b).second) return false;
  max_degree_ = std::max({max_degree_, ++degrees_[static_cast<std::size_t>(a)],
                          ++degrees_[static_cast<std::size_t>(b)]});
  return true;
}

bool CooccurrenceGraph::has_node(std::string_view name) const { return find(name) >= 0; }

bool CooccurrenceGraph::has_edge(std::string_view u, std::string_view v) const {
  int a = find(u);
  int b = find(v);
  if (a < 0 || b < 0) return false;
  if (a > b) std::swap(a, b);
  return edges_.count({a, b}) != 0;
}

std::size_t CooccurrenceGraph::degree(std::string_view name) const {
  const int id = find(name);
  return id < 0 ? 0 : degrees_[static_cast<std::size_t>(id)];
}

std::vector<std::string> CooccurrenceGraph::nodes() const {
  std::vector<std::string> out = names_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> CooccurrenceGraph::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(edges_.size());
  for (const auto& [a, b] : edges_) {
    auto u = names_[static_cast<std::size_t>(a)];
    auto v = names_[static_cast<std::size_t>(b)];
    if (v < u) std::swap(u, v);
    out.emplace_back(std::move(u), std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

CooccurrenceGraph build_graph(const std::vector<TagSet>& tag_sets, const HypernymMap& hypernym_map) {
  CooccurrenceGraph g;
  // Insert in sorted order so node ids do not depend on input order.
  std::set<std::string> all_nodes;
  std::set<std::pair<std::string, std::string>> all_edges;
  for (const auto& group : tag_sets) {
    std::set<std::string> mapped;
    for (const auto& term : group) {
      const auto it = hypernym_map.find(to_lower(term));
      if (it != hypernym_map.end()) mapped.insert(it->second);
    }
    all_nodes.insert(mapped.begin(), mapped.end());
    for (auto u = mapped.begin(); u != mapped.end(); ++u) {
      for (auto v = std::next(u); v != mapped.end(); ++v) all_edges.emplace(*u, *v);
    }
  }
  for (const auto& n : all_nodes) g.add_node(n);
  for (const auto& [u, v] : all_edges) g.add_edge(u, v);
  return g;
}

double degree_centrality(const CooccurrenceGraph& g, std::string_view node) {
  if (g.max_degree() == 0) return 0.0;
  return static_cast<double>(g.degree(node)) / static_cast<double>(g.max_degree());
}

HypernymMap hypernym_map_from(const Corpus& train) {
  HypernymMap map;
  for (const auto& d : train.definitions) {
    if (d.gold.empty()) continue;
    map.emplace(to_lower(d.term), to_lower(d.word_at(d.gold.front())));
  }
  return map;
}

std::vector<TagSet> tag_sets_from(const Corpus& corpus) {
  std::vector<TagSet> sets;
  for (const auto& d : corpus.definitions) {
    if (d.tag_partners.empty()) continue;
    TagSet group{d.term};
    group.insert(group.end(), d.tag_partners.begin(), d.tag_partners.end());
    sets.push_back(std::move(group));
  }
  return sets;
}

std::vector<TagSet> read_tag_sets(std::istream& in) {
  std::vector<TagSet> sets;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    TagSet group;
    std::string w;
    while (words >> w) group.push_back(w);
    if (!group.empty()) sets.push_back(std::move(group));
  }
  return sets;
}

std::vector<TagSet> read_tag_sets_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open tag-set file: " + path);
  return read_tag_sets(in);
}

std::string graph_to_json(const CooccurrenceGraph& g) {
  nlohmann::json j;
  j["nodes"] = g.nodes();
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  return j.dump();
}

CooccurrenceGraph graph_from_json(std::string_view text) {
  CooccurrenceGraph g;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& n : j.at("nodes")) g.add_node(n.get<std::string>());
    for (const auto& e : j.at("edges")) {
      g.add_edge(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(std::string("invalid graph JSON: ") + e.what());
  }
  return g;
}

}  // namespace defhyper
