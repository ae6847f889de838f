#include "defhyper/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include "defhyper/error.hpp"
#include "defhyper/rng.hpp"

namespace defhyper {

std::vector<std::string> SynthConfig::default_templates() {
  return {
      "PRE TERM COP DT? HYP TAIL",
      "TERM :/: DT? HYP TAIL",
      "TERM was/VBD VBN as/IN DT HYP WDT VBZ N",
      "DT N IN TERM VBZ DT HYP WDT VBZ IN DT N",
      "TERM refers/VBZ to/TO DT HYP IN DT N IN N",
      "TERM VBZ DT HYP VBG DT N",
      "TERM VBZ DT N VBZ DT HYP",
  };
}

// "the fetch API is an improved replacement for XHR": the is-a slot holds a
// distractor and the hypernym comes last.
std::string SynthConfig::misleading_template() { return "TERM is/VBZ DT N IN HYP"; }

void SynthConfig::validate() const {
  const auto rate = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
  };
  if (records < 1) throw ConfigError("records must be positive");
  if (vocabulary < 10) throw ConfigError("vocabulary must be at least 10");
  if (!(zipf_exponent > 0.0)) throw ConfigError("zipf exponent must be positive");
  if (!(singleton_fraction >= 0.0 && singleton_fraction < 1.0)) {
    throw ConfigError("singleton fraction must lie in [0,1)");
  }
  if (templates.empty() && misleading_fraction < 1.0) throw ConfigError("no templates given");
  rate(misleading_fraction, "misleading fraction");
  rate(capitalized_rate, "capitalized rate");
  rate(modifier_rate, "modifier rate");
  rate(distractor_modifier_rate, "distractor modifier rate");
  rate(noise_rate, "noise rate");
  if (hypernym_pool < 0 || hypernym_pool > vocabulary / 2) {
    throw ConfigError("hypernym pool must lie in [0, vocabulary/2]");
  }
  if (partners < 0) throw ConfigError("partners must be non-negative");
  for (const auto& t : templates) {
    std::istringstream in(t);
    std::string item;
    bool has_term = false, has_hyp = false;
    while (in >> item) {
      has_term |= item == "TERM";
      has_hyp |= item == "HYP";
    }
    if (!has_term || !has_hyp) throw ConfigError("template lacks TERM or HYP: " + t);
  }
}

namespace {

class WordFactory {
 public:
  explicit WordFactory(Rng rng) : rng_(rng) {}

  // Pronounceable pseudo-word that the fallback tagger reads as a plain noun.
  std::string fresh(int min_syllables, int max_syllables) {
    static constexpr std::string_view kOnset = "bdfgklmnprstvz";
    static constexpr std::string_view kVowel = "aeiou";
    static constexpr std::string_view kCoda = "klmnrtx";
    for (;;) {
      std::string w;
      const auto n = static_cast<int>(rng_.below(static_cast<std::uint64_t>(max_syllables - min_syllables + 1))) +
                     min_syllables;
      for (int s = 0; s < n; ++s) {
        w += kOnset[rng_.below(kOnset.size())];
        w += kVowel[rng_.below(kVowel.size())];
      }
      w += kCoda[rng_.below(kCoda.size())];
      if (used_.count(w)) continue;
      const std::string one[] = {w};
      if (fallback_tag(one).front() != "NN") continue;
      used_.insert(w);
      used_.insert(w + "s");
      used_.insert(w + "ing");
      used_.insert(w + "ed");
      return w;
    }
  }

 private:
  Rng rng_;
  std::unordered_set<std::string> used_;
};

class Zipf {
 public:
  Zipf(std::size_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cdf_[r] = total;
    }
    for (auto& c : cdf_) c /= total;
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

enum class SlotKind { Literal, Term, Gold, Noun, Verb };

struct Slot {
  std::string surface;
  std::string penn;
  SlotKind kind = SlotKind::Literal;
  std::string suffix;  // verbs: inflection added to the stem
};

struct Lexicon {
  std::vector<std::string> nouns;
  std::vector<std::string> verbs;
  Zipf noun_zipf;
  Zipf distractor_zipf;  // ranks past the hypernym pool
  Zipf verb_zipf;
  std::size_t pool = 0;
};

const std::vector<std::string> kDeterminers = {"a", "the", "an"};
const std::vector<std::string> kPrepositions = {"of", "for", "in", "on", "with", "by", "from", "about"};
const std::vector<std::string> kWhDeterminers = {"that", "which"};
// Copula-like openings; "one/CD" and "can/MD" are dropped by preprocessing.
const std::vector<std::string> kCopulas = {
    "is/VBZ", "is/VBZ", "is/VBZ one/CD of/IN", "VBZ", "was/VBD", "is/VBZ VBN as/IN",
    "can/MD be/VB VBN as/IN", "refers/VBZ to/TO"};
// Equal-weight continuations after the hypernym phrase; repeats set the odds.
const std::vector<std::string> kTails = {
    "IN DT? N", "IN DT? N", "VBG DT? N", "VBG DT? N", "VBN IN DT? N", "WDT VBZ N",
    "TO VB DT? N", "IN N IN DT? N", "", ""};
const std::vector<std::string> kAdjectives = {"simple", "open", "popular", "small", "new", "general",
                                              "modern", "common", "special", "improved"};
const std::vector<std::string> kAdverbs = {"often", "usually", "mainly", "typically"};

struct Generator {
  const SynthConfig& config;
  Lexicon& lex;
  Rng rng;

  const std::string& pick(const std::vector<std::string>& v) { return v[rng.below(v.size())]; }

  std::string noun(bool gold) {
    if (gold && lex.pool > 0) return lex.nouns[rng.below(lex.pool)];
    if (lex.pool > 0) return lex.nouns[lex.pool + lex.distractor_zipf.sample(rng)];
    return lex.nouns[lex.noun_zipf.sample(rng)];
  }

  void push_noun(std::vector<Slot>& out, bool gold, double modifier_rate) {
    if (rng.bernoulli(modifier_rate)) {
      const int mods = gold && rng.bernoulli(0.25) ? 2 : 1;
      for (int m = 0; m < mods; ++m) out.push_back({noun(false), "NN", SlotKind::Noun, {}});
    }
    out.push_back({noun(gold), "NN", gold ? SlotKind::Gold : SlotKind::Noun, {}});
  }

  void push_verb(std::vector<Slot>& out, const std::string& penn) {
    static const std::map<std::string, std::string> kSuffix = {
        {"VB", ""}, {"VBZ", "s"}, {"VBG", "ing"}, {"VBN", "ed"}, {"VBD", "ed"}, {"VBP", ""}};
    const std::string& stem = lex.verbs[lex.verb_zipf.sample(rng)];
    const std::string& suffix = kSuffix.at(penn);
    out.push_back({stem + suffix, penn, SlotKind::Verb, suffix});
  }

  void expand_all(const std::string& pattern, const std::string& term, std::vector<Slot>& out) {
    std::istringstream in(pattern);
    for (std::string item; in >> item;) expand(item, term, out);
  }

  void expand(const std::string& item, const std::string& term, std::vector<Slot>& out) {
    if (item == "TERM") {
      out.push_back({term, "NN", SlotKind::Term, {}});
    } else if (item == "HYP") {
      push_noun(out, true, config.modifier_rate);
    } else if (item == "N") {
      push_noun(out, false, config.distractor_modifier_rate);
    } else if (item == "DT") {
      out.push_back({pick(kDeterminers), "DT", SlotKind::Literal, {}});
    } else if (item == "IN") {
      out.push_back({pick(kPrepositions), "IN", SlotKind::Literal, {}});
    } else if (item == "WDT") {
      out.push_back({pick(kWhDeterminers), "WDT", SlotKind::Literal, {}});
    } else if (item == "VB" || item == "VBZ" || item == "VBG" || item == "VBN" || item == "VBD" ||
               item == "VBP") {
      push_verb(out, item);
    } else if (item == "DT?") {
      if (rng.bernoulli(0.7)) expand("DT", term, out);
    } else if (item == "COP") {
      expand_all(pick(kCopulas), term, out);
    } else if (item == "PRE") {
      if (rng.bernoulli(0.2)) expand_all("IN DT? N ,/,", term, out);
    } else if (item == "TAIL") {
      expand_all(kTails[rng.below(kTails.size())], term, out);
    } else if (const auto slash = item.rfind('/'); slash != std::string::npos && slash > 0) {
      out.push_back({item.substr(0, slash), item.substr(slash + 1), SlotKind::Literal, {}});
    } else {
      const std::string one[] = {item};
      out.push_back({item, fallback_tag(one).front(), SlotKind::Literal, {}});
    }
  }
};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

Corpus synth_generate(const SynthConfig& config, std::uint64_t seed) {
  config.validate();
  const Rng master(seed);
  WordFactory words(master.derive("words"));

  const auto n_nouns = static_cast<std::size_t>(config.vocabulary);
  const std::size_t n_verbs = std::max<std::size_t>(5, n_nouns / 2);
  const auto pool = static_cast<std::size_t>(config.hypernym_pool);
  Lexicon lex{{}, {}, Zipf(n_nouns, config.zipf_exponent),
              Zipf(n_nouns - pool, config.zipf_exponent), Zipf(n_verbs, config.zipf_exponent), pool};
  for (std::size_t k = 0; k < n_nouns; ++k) lex.nouns.push_back(words.fresh(2, 3));
  for (std::size_t k = 0; k < n_verbs; ++k) lex.verbs.push_back(words.fresh(2, 3));

  std::vector<std::string> terms;
  for (int r = 0; r < config.records; ++r) terms.push_back(words.fresh(3, 4));

  Generator gen{config, lex, master.derive("records")};
  std::vector<std::vector<Slot>> records;
  for (int r = 0; r < config.records; ++r) {
    const bool misleading = gen.rng.bernoulli(config.misleading_fraction);
    const std::string& pattern =
        misleading ? SynthConfig::misleading_template() : gen.pick(config.templates);
    std::vector<Slot> slots;
    gen.expand_all(pattern, terms[static_cast<std::size_t>(r)], slots);
    records.push_back(std::move(slots));
  }

  // Replace repeated open-class occurrences with fresh words until enough
  // types occur exactly once.
  {
    Rng fix = master.derive("singletons");
    const auto eligible = [&](const Slot& s) {
      return s.kind == SlotKind::Noun || s.kind == SlotKind::Verb ||
             (s.kind == SlotKind::Gold && pool == 0);
    };
    std::map<std::string, int> count;
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t r = 0; r < records.size(); ++r) {
      for (std::size_t k = 0; k < records[r].size(); ++k) {
        const Slot& s = records[r][k];
        if (s.kind == SlotKind::Noun || s.kind == SlotKind::Verb || s.kind == SlotKind::Gold) {
          ++count[s.surface];
        }
        if (eligible(s)) slots.emplace_back(r, k);
      }
    }
    const auto singletons = [&] {
      return static_cast<std::size_t>(
          std::count_if(count.begin(), count.end(), [](const auto& kv) { return kv.second == 1; }));
    };
    std::size_t ones = singletons();
    std::size_t misses = 0;
    while (!slots.empty() && misses < 50 * slots.size() &&
           static_cast<double>(ones) < config.singleton_fraction * static_cast<double>(count.size())) {
      const auto [r, k] = slots[fix.below(slots.size())];
      Slot& s = records[r][k];
      const int c = count[s.surface];
      if (c < 2) {
        ++misses;
        continue;
      }
      --count[s.surface];
      ones += c == 2 ? 2 : 1;
      s.surface = words.fresh(2, 3) + s.suffix;
      count[s.surface] = 1;
    }
  }

  Rng noise = master.derive("noise");
  Rng partner_rng = master.derive("partners");
  Corpus corpus;
  corpus.source = "synthetic:" + std::to_string(seed);
  for (std::size_t r = 0; r < records.size(); ++r) {
    std::vector<RawToken> raw;
    int gold_index = 0;
    for (const Slot& s : records[r]) {
      const bool noun = s.kind == SlotKind::Noun || s.kind == SlotKind::Gold || s.kind == SlotKind::Term;
      if (noun && s.kind != SlotKind::Term && noise.bernoulli(config.noise_rate)) {
        raw.push_back({kAdjectives[noise.below(kAdjectives.size())], "JJ"});
      }
      if (s.kind == SlotKind::Verb && noise.bernoulli(config.noise_rate / 2)) {
        raw.push_back({kAdverbs[noise.below(kAdverbs.size())], "RB"});
      }
      RawToken tok{s.surface, s.penn};
      if (noun && noise.bernoulli(config.capitalized_rate)) {
        tok.surface = capitalize(tok.surface);
        tok.penn = "NNP";
      }
      raw.push_back(tok);
      if (s.kind == SlotKind::Gold) gold_index = static_cast<int>(raw.size());
      if (s.kind == SlotKind::Term && noise.bernoulli(config.noise_rate / 3)) {
        raw.push_back({"(", "-LRB-"});
        raw.push_back({"or", "CC"});
        raw.push_back({lex.nouns[noise.below(lex.nouns.size())], "NN"});
        raw.push_back({")", "-RRB-"});
      }
    }
    raw.push_back({".", "."});

    std::vector<std::string> partners;
    if (records.size() > 1) {
      for (int p = 0; p < config.partners; ++p) {
        std::size_t other = partner_rng.below(records.size() - 1);
        if (other >= r) ++other;
        partners.push_back(terms[other]);
      }
    }
    corpus.definitions.push_back(
        build_definition(terms[r], raw, gold_index, {}, std::move(partners)));
  }
  corpus.recompute_frequency();
  return corpus;
}

}  // namespace defhyper
