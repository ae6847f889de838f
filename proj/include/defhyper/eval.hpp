#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "defhyper/corpus.hpp"
#include "defhyper/model.hpp"
#include "defhyper/postag.hpp"

namespace defhyper {

struct Metrics {
  std::size_t predicted = 0;
  std::size_t correct = 0;
  std::size_t total_gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static Metrics from_counts(std::size_t predicted, std::size_t correct, std::size_t total_gold);
  bool operator==(const Metrics&) const = default;
};

// One prediction per definition; a selection is correct iff it is a gold
// position. Throws ShapeError when the lists differ in length.
Metrics score(std::span<const Prediction> predictions, std::span<const Definition> gold);

Metrics evaluate(const Corpus& test, const ModelParams& model, double threshold);

// Neighbour PoS statistics around candidate nouns (window 1).
// p1 = share of observations immediately before the noun, p2 = after.
struct PositionCounts {
  std::size_t before_n = 0, after_n = 0, before_h = 0, after_h = 0;
};

struct PositionRow {
  PosType pos = PosType::DT;
  PositionCounts counts;
  std::optional<double> p1_n, p2_n, p1_h, p2_h;  // absent for a class never observed
};

struct PositionTable {
  std::vector<PositionRow> rows;  // populated rows only, canonical order

  const PositionRow* find(PosType p) const;
};

PositionTable pos_position_stats(const Corpus& corpus);

enum class SweepAxis { Window, Hidden, TrainRatio };

std::string_view axis_name(SweepAxis a);
SweepAxis axis_from_name(std::string_view name);

struct SweepRow {
  double value = 0.0;
  std::optional<Metrics> metrics;
  std::string error;  // set when the cell failed
};

struct SweepOptions {
  double train_fraction = 0.8;
  std::uint64_t split_seed = 42;
};

// Trains and evaluates one model per value; every cell re-uses the base
// seed so only the swept setting changes. Cell failures are recorded.
std::vector<SweepRow> sweep(SweepAxis axis, std::span<const double> values,
                            const ModelConfig& base, const Corpus& corpus,
                            const SweepOptions& options = {});

std::string format_fixed(double v, int digits = 4);

// "value,precision,recall,f1"
void write_metrics_csv(std::ostream& out, std::span<const SweepRow> rows);
// "pos,p1_n,p2_n,p1_h,p2_h"; classes without observations print NA.
void write_position_csv(std::ostream& out, const PositionTable& table);

}  // namespace defhyper
