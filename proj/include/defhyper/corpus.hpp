#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "defhyper/postag.hpp"

namespace defhyper {

struct RawToken {
  std::string surface;
  std::string penn;

  bool operator==(const RawToken&) const = default;
};

struct Candidate {
  int ordinal = 0;   // 1..T among the candidates of the definition
  int position = 0;  // 1-based position in the retained word sequence

  bool operator==(const Candidate&) const = default;
};

// One preprocessed definition sentence. Positions are 1-based.
struct Definition {
  std::string term;
  std::vector<std::string> words;  // retained surfaces, original case
  std::vector<std::string> penn;   // original Penn tag of each retained word
  std::vector<PosType> tags;       // mapped categories, never Null
  std::vector<Candidate> candidates;
  std::vector<int> gold;  // sorted positions; empty for unannotated input
  std::vector<std::string> tag_partners;

  std::size_t size() const { return words.size(); }
  const std::string& word_at(int position) const { return words[static_cast<std::size_t>(position - 1)]; }
  PosType tag_at(int position) const { return tags[static_cast<std::size_t>(position - 1)]; }
  bool is_gold(int position) const;

  bool operator==(const Definition&) const = default;
};

using FrequencyMap = std::map<std::string, std::int64_t>;

struct Corpus {
  std::vector<Definition> definitions;
  FrequencyMap frequency;  // lowercased word -> count over all definitions
  std::string source;

  void recompute_frequency();
  std::int64_t max_frequency() const;
  std::size_t candidate_count() const;
};

struct Rejection {
  std::size_t line = 0;
  std::string reason;
};

struct LoadResult {
  Corpus corpus;
  std::vector<Rejection> rejected;
  std::size_t lines_read = 0;
};

struct ParseOptions {
  bool require_gold = true;
};

std::string to_lower(std::string_view s);

// Removes balanced "( ... )" spans; an unmatched "(" removes through the
// end, an unmatched ")" is dropped alone.
std::vector<RawToken> strip_parentheticals(const std::vector<RawToken>& tokens);

// Builds a definition from raw tokens: strips parentheticals, maps tags,
// drops punctuation and unretained tags, collects candidates.
// gold_raw_index is a 1-based index into `raw` (0 when absent);
// gold_surface is used when the index is absent.
Definition build_definition(std::string term, const std::vector<RawToken>& raw,
                            int gold_raw_index, const std::string& gold_surface,
                            std::vector<std::string> tag_partners,
                            const ParseOptions& options = {});

// Parses one JSON Lines record. Throws ParseError on malformed input and
// AnnotationError when the gold hypernym cannot be resolved.
Definition parse_record(std::string_view line, std::size_t line_number = 1,
                        const ParseOptions& options = {});

// Inverse of parse_record for preprocessed definitions.
std::string serialize(const Definition& definition);

LoadResult load_corpus(std::istream& in, const std::string& source = {},
                       const ParseOptions& options = {});
LoadResult load_corpus_file(const std::string& path, const ParseOptions& options = {});
void write_corpus(const Corpus& corpus, std::ostream& out);

std::pair<Corpus, Corpus> split(const Corpus& corpus, double train_fraction,
                                std::uint64_t seed);

// K most frequent lowercased tokens, ties broken lexicographically.
struct TopK {
  std::vector<std::string> words;
  std::unordered_map<std::string, int> index;  // word -> rank (0-based)

  bool contains(std::string_view lowered) const { return index.count(std::string(lowered)) != 0; }
  std::size_t size() const { return words.size(); }
};

TopK build_topk(const Corpus& train, std::size_t k);

}  // namespace defhyper
