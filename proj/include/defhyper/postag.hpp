#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace defhyper {

// Retained part-of-speech categories plus the padding element. The
// underlying value is the canonical 1-based index used by the one-hot and
// integer encodings.
enum class PosType : unsigned char {
  DT = 1,
  EX,
  IN,
  NN,
  TO,
  VB,
  VBD,
  VBG,
  VBN,
  VBP,
  VBZ,
  WDT,
  WP,
  WPS,  // WP$
  WRB,
  Null,
};

inline constexpr std::size_t kPosCount = 16;

constexpr int pos_index(PosType p) { return static_cast<int>(p); }

// Inverse of pos_index; index must lie in 1..16.
PosType pos_from_index(int index);

std::string_view pos_name(PosType p);
std::optional<PosType> pos_from_name(std::string_view name);

// All 16 variants in canonical order.
const std::array<PosType, kPosCount>& all_pos_types();

// Penn Treebank tag -> retained category. Tags outside the retained set
// (adjectives, adverbs, pronouns, punctuation, ...) yield nullopt.
std::optional<PosType> map_penn_tag(std::string_view tag);

std::array<double, kPosCount> one_hot(PosType p);

// Rule-based stand-in for a statistical tagger: closed-class lexicon plus
// suffix rules, default NN. Deterministic and context-light.
std::vector<std::string> fallback_tag(std::span<const std::string> tokens);

bool is_punctuation(std::string_view surface);

}  // namespace defhyper
