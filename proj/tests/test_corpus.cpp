#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "defhyper/corpus.hpp"
#include "defhyper/error.hpp"
#include "defhyper/synth.hpp"

using namespace defhyper;

namespace {

std::vector<RawToken> raw_of(const std::string& text) {
  std::vector<RawToken> out;
  std::istringstream in(text);
  std::string w;
  while (in >> w) out.push_back({w, "NN"});
  return out;
}

std::string surface_of(const std::vector<RawToken>& toks) {
  std::string s;
  for (const auto& t : toks) s += (s.empty() ? "" : " ") + t.surface;
  return s;
}

// Independent oracle: explicit stack of open-paren indices.
std::string stack_strip(const std::string& text) {
  const auto toks = raw_of(text);
  std::vector<bool> keep(toks.size(), true);
  std::vector<std::size_t> open;
  for (std::size_t k = 0; k < toks.size(); ++k) {
    if (toks[k].surface == "(") {
      open.push_back(k);
      keep[k] = false;
    } else if (toks[k].surface == ")") {
      keep[k] = false;
      if (!open.empty()) {
        for (std::size_t m = open.back(); m <= k; ++m) keep[m] = false;
        open.pop_back();
      }
    }
  }
  if (!open.empty()) {
    for (std::size_t m = open.front(); m < toks.size(); ++m) keep[m] = false;
  }
  std::string s;
  for (std::size_t k = 0; k < toks.size(); ++k) {
    if (keep[k]) s += (s.empty() ? "" : " ") + toks[k].surface;
  }
  return s;
}

const char* kSql =
    R"({"term":"sql","tokens":["sql","is","a","language","for","querying","databases"],)"
    R"("pos":["NN","VBZ","DT","NN","IN","VBG","NNS"],"hypernym":"language"})";

}  // namespace

TEST(Parentheticals, Examples) {
  EXPECT_EQ(surface_of(strip_parentheticals(
                raw_of("Javascript ( not be confused with Java ) is a programming language"))),
            "Javascript is a programming language");
  EXPECT_EQ(surface_of(strip_parentheticals(raw_of("plain words only"))), "plain words only");
  EXPECT_EQ(surface_of(strip_parentheticals(raw_of("a ( b ( c ) d ) e"))), "a e");
  EXPECT_EQ(surface_of(strip_parentheticals(raw_of("a ( b c"))), "a");
  EXPECT_EQ(surface_of(strip_parentheticals(raw_of("a ) b"))), "a b");
}

TEST(Parentheticals, MatchesStackOracleAndIsIdempotent) {
  const char* alphabet[] = {"(", ")", "x", "y"};
  for (int n = 0; n < 4096; ++n) {
    std::string text;
    int code = n;
    for (int k = 0; k < 6; ++k, code /= 4) text += std::string(alphabet[code % 4]) + " ";
    const auto once = strip_parentheticals(raw_of(text));
    EXPECT_EQ(surface_of(once), stack_strip(text)) << text;
    EXPECT_EQ(strip_parentheticals(once), once);
  }
}

TEST(ParseRecord, FigureOneSentence) {
  const Definition d = parse_record(kSql);
  EXPECT_EQ(d.size(), 7u);
  const std::vector<PosType> q = {PosType::NN, PosType::VBZ, PosType::DT, PosType::NN,
                                  PosType::IN, PosType::VBG, PosType::NN};
  EXPECT_EQ(d.tags, q);
  ASSERT_EQ(d.candidates.size(), 2u);
  EXPECT_EQ(d.candidates[0], (Candidate{1, 4}));
  EXPECT_EQ(d.candidates[1], (Candidate{2, 7}));
  EXPECT_EQ(d.gold, std::vector<int>{4});
}

TEST(ParseRecord, OnlyNounIsTheTerm) {
  EXPECT_THROW(parse_record(R"({"term":"sql","tokens":["sql","is"],"pos":["NN","VBZ"],"hypernym":"sql"})"),
               AnnotationError);
}

TEST(ParseRecord, FallbackTagsWhenPosOmitted) {
  const Definition d = parse_record(
      R"({"term":"sql","tokens":["sql","is","a","language","for","querying","databases"],"hypernym_index":4})");
  // Hand application of the fallback rules: sql NN, is VBZ, a DT, language NN,
  // for IN, querying VBG (-ing), databases NN (default).
  const std::vector<std::string> penn = {"NN", "VBZ", "DT", "NN", "IN", "VBG", "NN"};
  EXPECT_EQ(d.penn, penn);
  EXPECT_EQ(d.gold, std::vector<int>{4});
}

TEST(ParseRecord, Errors) {
  EXPECT_THROW(parse_record("{not json", 3), ParseError);
  try {
    parse_record("{not json", 3);
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_record(R"({"tokens":["a"],"hypernym":"a"})"), ParseError);
  EXPECT_THROW(parse_record(R"({"term":"t","tokens":["a","b"],"pos":["DT"],"hypernym":"b"})"),
               ParseError);
  EXPECT_THROW(parse_record(R"({"term":"t","tokens":["a","b"],"pos":["DT","NN"]})"), ParseError);
  EXPECT_THROW(parse_record(R"({"term":"t","tokens":["a","b"],"pos":["DT","NN"],"hypernym_index":1})"),
               AnnotationError);
  EXPECT_THROW(parse_record(R"({"term":"t","tokens":["a","b"],"pos":["DT","NN"],"hypernym_index":9})"),
               AnnotationError);
  EXPECT_THROW(parse_record(R"({"term":"t","tokens":["a","b"],"pos":["DT","NN"],"hypernym":"zzz"})"),
               AnnotationError);
}

TEST(ParseRecord, GoldInsideParenthesisIsRejected) {
  EXPECT_THROW(
      parse_record(R"j({"term":"t","tokens":["t","is","(","a","tool",")","a","thing"],)j"
                   R"j("pos":["NN","VBZ","-LRB-","DT","NN","-RRB-","DT","NN"],"hypernym_index":5})j"),
      AnnotationError);
}

TEST(ParseRecord, MultiWordHypernymUsesHeadNoun) {
  const Definition d = parse_record(
      R"({"term":"sql","tokens":["sql","is","a","query","language"],"pos":["NN","VBZ","DT","NN","NN"],)"
      R"("hypernym":"query language"})");
  EXPECT_EQ(d.gold, std::vector<int>{5});
}

TEST(ParseRecord, SurfaceGoldResolvesToFirstOccurrence) {
  const Definition d = parse_record(
      R"({"term":"x","tokens":["x","is","a","tool","of","tool"],"pos":["NN","VBZ","DT","NN","IN","NN"],)"
      R"("hypernym":"Tool"})");
  EXPECT_EQ(d.gold, std::vector<int>{4});
}

TEST(ParseRecord, TermExcludedAndPunctuationDropped) {
  const Definition d = parse_record(
      R"({"term":"SQL","tokens":["SQL",",","a","language",",","is","SQL","."],)"
      R"("pos":["NNP",",","DT","NN",",","VBZ","NNP","."],"hypernym":"language"})");
  EXPECT_EQ(d.words, (std::vector<std::string>{"SQL", "a", "language", "is", "SQL"}));
  ASSERT_EQ(d.candidates.size(), 1u);
  EXPECT_EQ(d.candidates[0].position, 3);
}

TEST(ParseRecord, SerializeRoundTrip) {
  const Definition d = parse_record(kSql);
  EXPECT_EQ(parse_record(serialize(d)), d);
  Definition partnered = d;
  partnered.tag_partners = {"mysql", "postgresql"};
  EXPECT_EQ(parse_record(serialize(partnered)), partnered);
}

TEST(LoadCorpus, CountsRejections) {
  std::istringstream in(std::string(kSql) + "\n\n{broken\n" + kSql + "\n");
  const LoadResult r = load_corpus(in, "mem");
  EXPECT_EQ(r.corpus.definitions.size(), 2u);
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0].line, 3u);
  EXPECT_EQ(r.corpus.frequency.at("sql"), 2);
  EXPECT_EQ(r.corpus.frequency.at("databases"), 2);
  EXPECT_EQ(r.corpus.source, "mem");
}

TEST(Split, SizesAndDeterminism) {
  Corpus c;
  for (int k = 0; k < 10; ++k) {
    Definition d = parse_record(kSql);
    d.term = "t" + std::to_string(k);
    c.definitions.push_back(d);
  }
  const auto [train, test] = split(c, 0.8, 7);
  EXPECT_EQ(train.definitions.size(), 8u);
  EXPECT_EQ(test.definitions.size(), 2u);
  const auto again = split(c, 0.8, 7);
  EXPECT_EQ(again.first.definitions, train.definitions);
  EXPECT_EQ(again.second.definitions, test.definitions);

  std::multiset<std::string> all;
  for (const auto& d : train.definitions) all.insert(d.term);
  for (const auto& d : test.definitions) all.insert(d.term);
  EXPECT_EQ(all.size(), 10u);
  EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), 10u);

  EXPECT_THROW(split(c, 0.0, 1), ConfigError);
  EXPECT_THROW(split(c, 1.0, 1), ConfigError);
  Corpus one;
  one.definitions.push_back(c.definitions[0]);
  EXPECT_THROW(split(one, 0.5, 1), ConfigError);
}

TEST(Split, WikipediaSizeArithmetic) {
  Corpus c;
  const Definition d = parse_record(kSql);
  c.definitions.assign(1871, d);
  const auto [train, test] = split(c, 0.8, 1);
  EXPECT_EQ(train.definitions.size(), 1496u);
  EXPECT_EQ(test.definitions.size(), 375u);
}

TEST(TopK, Examples) {
  Corpus c;
  c.frequency = {{"a", 3}, {"b", 2}, {"c", 1}};
  EXPECT_EQ(build_topk(c, 0).size(), 0u);
  EXPECT_EQ(build_topk(c, 2).words, (std::vector<std::string>{"a", "b"}));
  c.frequency = {{"y", 1}, {"x", 1}, {"z", 5}};
  EXPECT_EQ(build_topk(c, 2).words, (std::vector<std::string>{"z", "x"}));
  EXPECT_TRUE(build_topk(c, 2).contains("x"));
  EXPECT_FALSE(build_topk(c, 2).contains("y"));
}

TEST(Synth, SingleTemplateGoldByConstruction) {
  SynthConfig cfg;
  cfg.records = 1;
  cfg.templates = {"TERM is/VBZ a/DT HYP"};
  cfg.modifier_rate = 0;
  cfg.noise_rate = 0;
  cfg.capitalized_rate = 0;
  cfg.singleton_fraction = 0;
  cfg.partners = 0;
  cfg.vocabulary = 50;
  const Corpus c = synth_generate(cfg, 1);
  ASSERT_EQ(c.definitions.size(), 1u);
  const Definition& d = c.definitions[0];
  EXPECT_EQ(d.size(), 4u);
  EXPECT_EQ(d.gold, std::vector<int>{4});
  EXPECT_EQ(d.tags[1], PosType::VBZ);
}

TEST(Synth, DeterministicAndSingletonFloor) {
  SynthConfig cfg;
  const Corpus a = synth_generate(cfg, 42);
  const Corpus b = synth_generate(cfg, 42);
  std::ostringstream sa, sb;
  write_corpus(a, sa);
  write_corpus(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.definitions.size(), 5000u);

  // Histogram oracle over emitted open-class words; template literals excluded.
  std::map<std::string, int> counts;
  for (const auto& d : a.definitions) {
    for (std::size_t k = 0; k < d.size(); ++k) {
      const auto t = d.tags[k];
      const bool open = t == PosType::NN || (t >= PosType::VB && t <= PosType::VBP);
      const std::string w = to_lower(d.words[k]);
      const bool literal = w == "is" || w == "was" || w == "be" || w == "refers";
      if (open && !literal && w != to_lower(d.term)) ++counts[w];
    }
  }
  std::size_t singles = 0;
  for (const auto& [w, n] : counts) singles += n == 1;
  EXPECT_GE(static_cast<double>(singles), 0.2 * static_cast<double>(counts.size()));

  for (const auto& d : a.definitions) {
    ASSERT_EQ(d.gold.size(), 1u);
    EXPECT_TRUE(std::any_of(d.candidates.begin(), d.candidates.end(),
                            [&](const Candidate& c) { return c.position == d.gold[0]; }));
    for (const auto t : d.tags) EXPECT_NE(t, PosType::Null);
  }
}

TEST(Synth, InvalidConfig) {
  SynthConfig cfg;
  cfg.records = 0;
  EXPECT_THROW(synth_generate(cfg, 1), ConfigError);
  cfg = {};
  cfg.templates.clear();
  EXPECT_THROW(synth_generate(cfg, 1), ConfigError);
  cfg = {};
  cfg.singleton_fraction = 1.5;
  EXPECT_THROW(synth_generate(cfg, 1), ConfigError);
}
