#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "defhyper/corpus.hpp"

namespace defhyper {

// Template language, one token per whitespace-separated item:
//   TERM        the defined term
//   HYP         gold hypernym, optionally preceded by modifier nouns
//   N           distractor noun, optionally preceded by a modifier noun
//   DT IN WDT   a determiner / preposition / wh-determiner from a small set
//   DT?         a determiner or nothing
//   COP         a copula-like opening ("is", "refers to", "was VBN as", ...)
//   PRE         sometimes a leading "IN DT? N ," clause
//   VB VBZ VBG VBN   open-class verb forms
//   TAIL        a continuation such as "IN DT? N", "VBG DT? N", "TO VB DT? N" or nothing
//   word/TAG    a literal with an explicit Penn tag
//   word        a literal tagged by fallback_tag
struct SynthConfig {
  int records = 5000;
  int vocabulary = 4000;           // open-class noun types; verb stems get half
  double zipf_exponent = 1.0;
  double singleton_fraction = 0.2;  // minimum share of open-class types seen once
  std::vector<std::string> templates = default_templates();
  double misleading_fraction = 0.0;  // records drawn from misleading_template()
  int hypernym_pool = 0;  // > 0: hypernyms come from this many fixed nouns
  int partners = 3;       // tag partners per record
  double capitalized_rate = 0.1;
  double modifier_rate = 0.4;    // HYP gets modifier nouns
  double distractor_modifier_rate = 0.3;
  double noise_rate = 0.15;      // dropped adjectives / adverbs / parentheticals

  static std::vector<std::string> default_templates();
  static std::string misleading_template();

  // Throws ConfigError.
  void validate() const;
};

Corpus synth_generate(const SynthConfig& config, std::uint64_t seed);

}  // namespace defhyper
