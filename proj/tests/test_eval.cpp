#include <gtest/gtest.h>

#include <sstream>

#include "defhyper/error.hpp"
#include "defhyper/eval.hpp"
#include "defhyper/synth.hpp"

using namespace defhyper;

namespace {

Definition def_with_gold(int gold) {
  Definition d;
  d.gold = {gold};
  return d;
}

Prediction pick(std::optional<int> p) {
  Prediction out;
  out.selected = p;
  return out;
}

Definition parse(const std::string& tokens, const std::string& tags, int gold) {
  std::istringstream wt(tokens), tt(tags);
  std::vector<RawToken> raw;
  std::string w, t;
  while (wt >> w && tt >> t) raw.push_back({w, t});
  return build_definition(raw[0].surface, raw, gold, {}, {});
}

}  // namespace

TEST(Score, Examples) {
  std::vector<Definition> gold;
  std::vector<Prediction> preds;
  for (int k = 0; k < 5; ++k) {
    gold.push_back(def_with_gold(3));
    preds.push_back(pick(3));
  }
  const auto perfect = score(preds, gold);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);

  gold.clear();
  preds.clear();
  for (int k = 0; k < 10; ++k) {
    gold.push_back(def_with_gold(2));
    preds.push_back(k < 6 ? pick(2) : k < 8 ? pick(5) : pick(std::nullopt));
  }
  const auto m = score(preds, gold);
  EXPECT_EQ(m.predicted, 8u);
  EXPECT_EQ(m.correct, 6u);
  EXPECT_EQ(m.total_gold, 10u);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_NEAR(m.f1, 2 * 0.75 * 0.6 / 1.35, 1e-15);
  EXPECT_NEAR(m.f1, 0.6667, 1e-4);

  const auto none = Metrics::from_counts(0, 0, 10);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.f1, 0.0);

  EXPECT_THROW(score(std::vector<Prediction>(2), gold), ShapeError);
}

TEST(Score, MultiGoldAndPrecisionAtLeastRecall) {
  Definition d;
  d.gold = {2, 6};
  const std::vector<Definition> g = {d, d, d};
  const std::vector<Prediction> p = {pick(6), pick(3), pick(std::nullopt)};
  const auto m = score(p, g);
  EXPECT_EQ(m.correct, 1u);
  EXPECT_GE(m.precision, m.recall);
}

TEST(PositionStats, DeterminerBeforeEveryHypernym) {
  Corpus c;
  c.definitions.push_back(parse("t is a tool for x", "NN VBZ DT NN IN NN", 4));
  c.definitions.push_back(parse("t is the box of y", "NN VBZ DT NN IN NN", 4));
  const auto table = pos_position_stats(c);
  const auto* dt = table.find(PosType::DT);
  ASSERT_NE(dt, nullptr);
  EXPECT_EQ(*dt->p1_h, 1.0);
  EXPECT_EQ(*dt->p2_h, 0.0);
  EXPECT_FALSE(dt->p1_n);  // DT never touches a non-hypernym here
  const auto* in = table.find(PosType::IN);
  ASSERT_NE(in, nullptr);
  EXPECT_EQ(*in->p2_h, 1.0);
  EXPECT_EQ(*in->p1_n, 1.0);
  EXPECT_EQ(table.find(PosType::Null), nullptr);
}

TEST(PositionStats, CountsMatchOracleAndRowsSumToOne) {
  SynthConfig s;
  s.records = 400;
  s.vocabulary = 300;
  const Corpus c = synth_generate(s, 4);
  const auto table = pos_position_stats(c);
  // Direct tally over all candidates with window 1.
  std::map<PosType, PositionCounts> want;
  for (const auto& d : c.definitions) {
    for (const auto& cand : d.candidates) {
      const bool h = d.is_gold(cand.position);
      if (cand.position > 1) {
        auto& r = want[d.tag_at(cand.position - 1)];
        (h ? r.before_h : r.before_n)++;
      }
      if (cand.position < static_cast<int>(d.size())) {
        auto& r = want[d.tag_at(cand.position + 1)];
        (h ? r.after_h : r.after_n)++;
      }
    }
  }
  EXPECT_EQ(table.rows.size(), want.size());
  for (const auto& row : table.rows) {
    const auto& w = want.at(row.pos);
    EXPECT_EQ(row.counts.before_h, w.before_h);
    EXPECT_EQ(row.counts.after_h, w.after_h);
    EXPECT_EQ(row.counts.before_n, w.before_n);
    EXPECT_EQ(row.counts.after_n, w.after_n);
    if (row.p1_h) EXPECT_EQ(*row.p1_h + *row.p2_h, 1.0);
    if (row.p1_n) EXPECT_EQ(*row.p1_n + *row.p2_n, 1.0);
  }
  EXPECT_TRUE(pos_position_stats(Corpus{}).rows.empty());
}

TEST(Csv, Formats) {
  EXPECT_EQ(format_fixed(0.5), "0.5000");
  EXPECT_EQ(format_fixed(2.0 / 3.0), "0.6667");
  std::vector<SweepRow> rows(2);
  rows[0].value = 3;
  rows[0].metrics = Metrics::from_counts(8, 6, 10);
  rows[1].value = 0.25;
  rows[1].error = "boom";
  std::ostringstream out;
  write_metrics_csv(out, rows);
  EXPECT_EQ(out.str(), "value,precision,recall,f1\n3,0.7500,0.6000,0.6667\n0.2500,NA,NA,NA\n");

  PositionTable t;
  PositionRow r;
  r.pos = PosType::WPS;
  r.p1_h = 0.25;
  r.p2_h = 0.75;
  t.rows.push_back(r);
  std::ostringstream pos;
  write_position_csv(pos, t);
  EXPECT_EQ(pos.str(), "pos,p1_n,p2_n,p1_h,p2_h\nWP$,NA,NA,0.2500,0.7500\n");
}

TEST(Sweep, RowsDeterminismAndFailures) {
  SynthConfig s;
  s.records = 120;
  s.vocabulary = 200;
  const Corpus c = synth_generate(s, 6);
  ModelConfig base;
  base.hidden = 8;
  base.epochs = 2;
  const std::vector<double> values = {2, 3, 2};
  const auto rows = sweep(SweepAxis::Window, values, base, c);
  ASSERT_EQ(rows.size(), 3u);
  ASSERT_TRUE(rows[0].metrics && rows[2].metrics);
  EXPECT_EQ(*rows[0].metrics, *rows[2].metrics);

  const std::vector<double> bad = {0, 4};
  const auto r2 = sweep(SweepAxis::Hidden, bad, base, c);
  EXPECT_FALSE(r2[0].metrics);
  EXPECT_FALSE(r2[0].error.empty());
  EXPECT_TRUE(r2[1].metrics);

  EXPECT_THROW(sweep(SweepAxis::Window, {}, base, c), ConfigError);
  EXPECT_EQ(axis_from_name("train-ratio"), SweepAxis::TrainRatio);
  EXPECT_EQ(axis_name(SweepAxis::Hidden), "hidden");
}

TEST(Evaluate, ThresholdZeroGivesPrecisionEqualRecall) {
  SynthConfig s;
  s.records = 200;
  s.vocabulary = 200;
  const Corpus c = synth_generate(s, 7);
  const auto [train, test] = split(c, 0.8, 1);
  ModelConfig cfg;
  cfg.hidden = 8;
  cfg.epochs = 3;
  const auto m = train_model(train, training_graph(train), cfg);
  const auto zero = evaluate(test, m, 0.0);
  EXPECT_EQ(zero.predicted, zero.total_gold);
  EXPECT_EQ(zero.precision, zero.recall);
  const auto strict = evaluate(test, m, 1.0);
  EXPECT_LE(strict.predicted, zero.predicted);
  EXPECT_GE(zero.precision + 1e-12, zero.recall);
}
