#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "defhyper/postag.hpp"

using namespace defhyper;

TEST(Postag, CanonicalIndices) {
  const char* order[] = {"DT", "EX", "IN", "NN", "TO", "VB", "VBD", "VBG",
                         "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", "NULL"};
  for (int k = 0; k < 16; ++k) {
    const PosType p = pos_from_index(k + 1);
    EXPECT_EQ(pos_name(p), order[k]);
    EXPECT_EQ(pos_index(p), k + 1);
    EXPECT_EQ(pos_from_name(order[k]), p);
  }
  EXPECT_EQ(all_pos_types().size(), 16u);
}

TEST(Postag, PennMapping) {
  EXPECT_EQ(map_penn_tag("NNS"), PosType::NN);
  EXPECT_EQ(map_penn_tag("NNP"), PosType::NN);
  EXPECT_EQ(map_penn_tag("NNPS"), PosType::NN);
  EXPECT_EQ(map_penn_tag("TO"), PosType::TO);
  EXPECT_EQ(map_penn_tag("WP$"), PosType::WPS);
  EXPECT_FALSE(map_penn_tag("JJ"));
  EXPECT_FALSE(map_penn_tag("RB"));
  EXPECT_FALSE(map_penn_tag("CD"));
  EXPECT_FALSE(map_penn_tag(","));
  EXPECT_FALSE(map_penn_tag("NULL"));
}

TEST(Postag, MappingImageIsTheFifteenRetainedTypes) {
  const char* penn[] = {"CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
                        "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
                        "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
                        "VBZ", "WDT", "WP", "WP$", "WRB", ".", ",", ":", "-LRB-", "-RRB-",
                        "``", "''", "#", "$", "NULL", "XX"};
  std::set<PosType> image;
  for (const char* t : penn) {
    const auto a = map_penn_tag(t);
    EXPECT_EQ(a, map_penn_tag(t));
    if (a) image.insert(*a);
  }
  EXPECT_EQ(image.size(), 15u);
  EXPECT_FALSE(image.count(PosType::Null));
}

TEST(Postag, OneHot) {
  for (const PosType p : all_pos_types()) {
    const auto v = one_hot(p);
    EXPECT_EQ(std::accumulate(v.begin(), v.end(), 0.0), 1.0);
    EXPECT_EQ(std::count(v.begin(), v.end(), 0.0), 15);
    EXPECT_EQ(v[static_cast<std::size_t>(pos_index(p) - 1)], 1.0);
  }
  EXPECT_EQ(one_hot(PosType::DT)[0], 1.0);
  EXPECT_EQ(one_hot(PosType::Null)[15], 1.0);
  EXPECT_EQ(one_hot(PosType::VBZ)[10], 1.0);
}

TEST(Postag, FallbackTagger) {
  const std::vector<std::string> words = {"a", "querying", "database", "sql", "is", "for",
                                          "the", "used", "which", "(", ",", "42", "quickly"};
  const auto tags = fallback_tag(words);
  const std::vector<std::string> want = {"DT", "VBG", "NN", "NN", "VBZ", "IN", "DT",
                                         "VBN", "WDT", "-LRB-", ",", "CD", "RB"};
  EXPECT_EQ(tags, want);
  EXPECT_EQ(fallback_tag(words), tags);
}

TEST(Postag, FallbackSuffixRules) {
  EXPECT_EQ(fallback_tag(std::vector<std::string>{"it", "parsed"})[1], "VBD");
  EXPECT_EQ(fallback_tag(std::vector<std::string>{"was", "parsed"})[1], "VBN");
  EXPECT_EQ(fallback_tag(std::vector<std::string>{"Sing"})[0], "NN");  // too short for -ing
}
