#include "defhyper/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "defhyper/error.hpp"
#include "defhyper/rng.hpp"

namespace defhyper {
namespace {

using nlohmann::json;

bool is_open_paren(const RawToken& t) { return t.surface == "(" || t.penn == "-LRB-"; }
bool is_close_paren(const RawToken& t) { return t.surface == ")" || t.penn == "-RRB-"; }

// Indices (0-based) of the tokens that survive parenthetical removal.
std::vector<std::size_t> surviving_indices(const std::vector<RawToken>& tokens) {
  std::vector<std::size_t> kept;
  kept.reserve(tokens.size());
  int depth = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (is_open_paren(tokens[k])) {
      ++depth;
    } else if (is_close_paren(tokens[k])) {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      kept.push_back(k);
    }
  }
  return kept;
}

std::vector<std::string> string_array(const json& j, const char* field, std::size_t line) {
  if (!j.is_array()) throw ParseError(line, std::string("field '") + field + "' must be an array");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) {
      throw ParseError(line, std::string("field '") + field + "' must contain only strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::string head_word(const std::string& phrase) {
  std::istringstream in(phrase);
  std::string word, last;
  while (in >> word) last = word;
  return last;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool Definition::is_gold(int position) const {
  return std::binary_search(gold.begin(), gold.end(), position);
}

void Corpus::recompute_frequency() {
  frequency.clear();
  for (const auto& d : definitions) {
    for (const auto& w : d.words) ++frequency[to_lower(w)];
  }
}

std::int64_t Corpus::max_frequency() const {
  std::int64_t best = 0;
  for (const auto& [w, c] : frequency) best = std::max(best, c);
  return best;
}

std::size_t Corpus::candidate_count() const {
  std::size_t n = 0;
  for (const auto& d : definitions) n += d.candidates.size();
  return n;
}

std::vector<RawToken> strip_parentheticals(const std::vector<RawToken>& tokens) {
  std::vector<RawToken> out;
  for (std::size_t k : surviving_indices(tokens)) out.push_back(tokens[k]);
  return out;
}

Definition build_definition(std::string term, const std::vector<RawToken>& raw,
                            int gold_raw_index, const std::string& gold_surface,
                            std::vector<std::string> tag_partners,
                            const ParseOptions& options) {
  Definition def;
  def.term = std::move(term);
  def.tag_partners = std::move(tag_partners);
  const std::string term_lower = to_lower(def.term);

  int gold_position = 0;
  for (std::size_t k : surviving_indices(raw)) {
    const RawToken& tok = raw[k];
    if (is_punctuation(tok.surface)) continue;
    const auto mapped = map_penn_tag(tok.penn);
    if (!mapped) continue;
    def.words.push_back(tok.surface);
    def.penn.push_back(tok.penn);
    def.tags.push_back(*mapped);
    const int position = static_cast<int>(def.words.size());
    if (gold_raw_index > 0 && static_cast<std::size_t>(gold_raw_index - 1) == k) {
      gold_position = position;
    }
    if (*mapped == PosType::NN && to_lower(tok.surface) != term_lower) {
      def.candidates.push_back({static_cast<int>(def.candidates.size()) + 1, position});
    }
  }

  if (def.candidates.empty()) {
    if (options.require_gold) throw AnnotationError("no hypernym candidates");
    return def;
  }

  const auto is_candidate = [&def](int position) {
    return std::any_of(def.candidates.begin(), def.candidates.end(),
                       [position](const Candidate& c) { return c.position == position; });
  };

  if (gold_raw_index > 0) {
    if (gold_position == 0) {
      throw AnnotationError("hypernym_index " + std::to_string(gold_raw_index) +
                            " removed by preprocessing");
    }
    if (!is_candidate(gold_position)) {
      throw AnnotationError("hypernym_index " + std::to_string(gold_raw_index) +
                            " is not a noun candidate");
    }
    def.gold = {gold_position};
  } else if (!gold_surface.empty()) {
    const std::string head = to_lower(head_word(gold_surface));
    for (const auto& c : def.candidates) {
      if (to_lower(def.word_at(c.position)) == head) {
        def.gold = {c.position};
        break;
      }
    }
    if (def.gold.empty()) {
      throw AnnotationError("hypernym '" + gold_surface + "' not among candidates");
    }
  } else if (options.require_gold) {
    throw AnnotationError("no gold hypernym");
  }
  return def;
}

Definition parse_record(std::string_view line, std::size_t line_number,
                        const ParseOptions& options) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_number, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line_number, "record must be a JSON object");

  if (!j.contains("term") || !j["term"].is_string()) {
    throw ParseError(line_number, "missing string field 'term'");
  }
  if (!j.contains("tokens")) throw ParseError(line_number, "missing field 'tokens'");
  const auto tokens = string_array(j["tokens"], "tokens", line_number);
  if (tokens.empty()) throw ParseError(line_number, "field 'tokens' is empty");

  std::vector<std::string> tags;
  if (j.contains("pos") && !j["pos"].is_null()) {
    tags = string_array(j["pos"], "pos", line_number);
    if (tags.size() != tokens.size()) {
      throw ParseError(line_number, "'pos' and 'tokens' differ in length");
    }
  } else {
    tags = fallback_tag(tokens);
  }

  std::vector<std::string> partners;
  if (j.contains("tag_partners") && !j["tag_partners"].is_null()) {
    partners = string_array(j["tag_partners"], "tag_partners", line_number);
  }

  std::vector<int> gold_indices;
  std::string gold_surface;
  if (j.contains("hypernym_index") && !j["hypernym_index"].is_null()) {
    const auto& h = j["hypernym_index"];
    if (h.is_number_integer()) {
      gold_indices.push_back(h.get<int>());
    } else if (h.is_array() && !h.empty() &&
               std::all_of(h.begin(), h.end(), [](const json& e) { return e.is_number_integer(); })) {
      for (const auto& e : h) gold_indices.push_back(e.get<int>());
    } else {
      throw ParseError(line_number, "'hypernym_index' must be an integer");
    }
    for (int g : gold_indices) {
      if (g < 1 || static_cast<std::size_t>(g) > tokens.size()) {
        throw AnnotationError("hypernym_index " + std::to_string(g) + " out of range");
      }
    }
  } else if (j.contains("hypernym") && !j["hypernym"].is_null()) {
    if (!j["hypernym"].is_string()) throw ParseError(line_number, "'hypernym' must be a string");
    gold_surface = j["hypernym"].get<std::string>();
  } else if (options.require_gold) {
    throw ParseError(line_number, "one of 'hypernym' or 'hypernym_index' is required");
  }

  std::vector<RawToken> raw;
  raw.reserve(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) raw.push_back({tokens[k], tags[k]});

  if (gold_indices.size() <= 1) {
    return build_definition(j["term"].get<std::string>(), raw,
                            gold_indices.empty() ? 0 : gold_indices.front(), gold_surface,
                            std::move(partners), options);
  }
  // Several annotated positions: resolve each and merge.
  Definition def;
  for (std::size_t g = 0; g < gold_indices.size(); ++g) {
    Definition one = build_definition(j["term"].get<std::string>(), raw, gold_indices[g], {},
                                      partners, options);
    if (g == 0) {
      def = std::move(one);
    } else {
      def.gold.push_back(one.gold.front());
    }
  }
  std::sort(def.gold.begin(), def.gold.end());
  def.gold.erase(std::unique(def.gold.begin(), def.gold.end()), def.gold.end());
  return def;
}

std::string serialize(const Definition& definition) {
  json j;
  j["term"] = definition.term;
  j["tokens"] = definition.words;
  j["pos"] = definition.penn;
  if (definition.gold.size() == 1) {
    j["hypernym_index"] = definition.gold.front();
  } else if (!definition.gold.empty()) {
    j["hypernym_index"] = definition.gold;
  }
  if (!definition.tag_partners.empty()) j["tag_partners"] = definition.tag_partners;
  return j.dump();
}

LoadResult load_corpus(std::istream& in, const std::string& source, const ParseOptions& options) {
  LoadResult result;
  result.corpus.source = source;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++result.lines_read;
    try {
      result.corpus.definitions.push_back(parse_record(line, line_number, options));
    } catch (const ParseError& e) {
      result.rejected.push_back({line_number, e.what()});
    } catch (const AnnotationError& e) {
      result.rejected.push_back({line_number, e.what()});
    }
  }
  // ParseError messages already carry the line prefix; keep only the reason.
  for (auto& r : result.rejected) {
    const std::string prefix = "line " + std::to_string(r.line) + ": ";
    if (r.reason.rfind(prefix, 0) == 0) r.reason.erase(0, prefix.size());
  }
  result.corpus.recompute_frequency();
  return result;
}

LoadResult load_corpus_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  return load_corpus(in, path, options);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& d : corpus.definitions) out << serialize(d) << '\n';
}

std::pair<Corpus, Corpus> split(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = corpus.definitions.size();
  if (n < 2) throw ConfigError("cannot split a corpus with fewer than 2 records");

  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  Rng(seed).derive("split").shuffle(order.begin(), order.end());

  auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  Corpus train, test;
  train.source = corpus.source;
  test.source = corpus.source;
  for (std::size_t k = 0; k < n; ++k) {
    (k < n_train ? train : test).definitions.push_back(corpus.definitions[order[k]]);
  }
  train.recompute_frequency();
  test.recompute_frequency();
  return {std::move(train), std::move(test)};
}

TopK build_topk(const Corpus& train, std::size_t k) {
  std::vector<std::pair<std::string, std::int64_t>> ranked(train.frequency.begin(),
                                                           train.frequency.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  TopK top;
  for (std::size_t r = 0; r < std::min(k, ranked.size()); ++r) {
    top.index.emplace(ranked[r].first, static_cast<int>(r));
    top.words.push_back(ranked[r].first);
  }
  return top;
}

}  // namespace defhyper
