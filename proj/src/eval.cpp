#include "defhyper/eval.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "defhyper/error.hpp"

namespace defhyper {

Metrics Metrics::from_counts(std::size_t predicted, std::size_t correct, std::size_t total_gold) {
  Metrics m;
  m.predicted = predicted;
  m.correct = correct;
  m.total_gold = total_gold;
  m.precision = predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
  m.recall = total_gold ? static_cast<double>(correct) / static_cast<double>(total_gold) : 0.0;
  const double s = m.precision + m.recall;
  m.f1 = s > 0.0 ? 2.0 * m.precision * m.recall / s : 0.0;
  return m;
}

Metrics score(std::span<const Prediction> predictions, std::span<const Definition> gold) {
  if (predictions.size() != gold.size()) {
    throw ShapeError("score: " + std::to_string(predictions.size()) + " predictions for " +
                     std::to_string(gold.size()) + " definitions");
  }
  std::size_t predicted = 0, correct = 0, total = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    if (!gold[k].gold.empty()) ++total;
    if (!predictions[k].selected) continue;
    ++predicted;
    if (gold[k].is_gold(*predictions[k].selected)) ++correct;
  }
  return Metrics::from_counts(predicted, correct, total);
}

Metrics evaluate(const Corpus& test, const ModelParams& model, double threshold) {
  const auto preds = predict_corpus(test, model, threshold);
  return score(preds, test.definitions);
}

const PositionRow* PositionTable::find(PosType p) const {
  for (const auto& r : rows) {
    if (r.pos == p) return &r;
  }
  return nullptr;
}

PositionTable pos_position_stats(const Corpus& corpus) {
  std::array<PositionCounts, kPosCount> counts{};
  for (const auto& d : corpus.definitions) {
    const int n = static_cast<int>(d.size());
    for (const auto& c : d.candidates) {
      const bool hyper = d.is_gold(c.position);
      if (c.position > 1) {
        auto& row = counts[pos_index(d.tag_at(c.position - 1)) - 1];
        ++(hyper ? row.before_h : row.before_n);
      }
      if (c.position < n) {
        auto& row = counts[pos_index(d.tag_at(c.position + 1)) - 1];
        ++(hyper ? row.after_h : row.after_n);
      }
    }
  }
  // p2 = 1 - p1 keeps p1 + p2 == 1 exactly in floating point.
  const auto share = [](std::size_t before, std::size_t after, std::optional<double>& p1,
                        std::optional<double>& p2) {
    if (before + after == 0) return;
    p1 = static_cast<double>(before) / static_cast<double>(before + after);
    p2 = 1.0 - *p1;
  };
  PositionTable table;
  for (const auto p : all_pos_types()) {
    const auto& c = counts[pos_index(p) - 1];
    if (c.before_n + c.after_n + c.before_h + c.after_h == 0) continue;
    PositionRow row;
    row.pos = p;
    row.counts = c;
    share(c.before_n, c.after_n, row.p1_n, row.p2_n);
    share(c.before_h, c.after_h, row.p1_h, row.p2_h);
    table.rows.push_back(row);
  }
  return table;
}

std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Window:
      return "window";
    case SweepAxis::Hidden:
      return "hidden";
    case SweepAxis::TrainRatio:
      return "train-ratio";
  }
  return "window";
}

SweepAxis axis_from_name(std::string_view name) {
  if (name == "window") return SweepAxis::Window;
  if (name == "hidden") return SweepAxis::Hidden;
  if (name == "train-ratio" || name == "train-frac") return SweepAxis::TrainRatio;
  throw ConfigError("unknown sweep axis: " + std::string(name));
}

std::vector<SweepRow> sweep(SweepAxis axis, std::span<const double> values,
                            const ModelConfig& base, const Corpus& corpus,
                            const SweepOptions& options) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (const double v : values) {
    SweepRow row;
    row.value = v;
    try {
      ModelConfig config = base;
      double fraction = options.train_fraction;
      const auto as_int = [&](double x) {
        if (x != std::floor(x)) throw ConfigError("value must be an integer: " + format_fixed(x));
        return static_cast<int>(x);
      };
      switch (axis) {
        case SweepAxis::Window:
          config.window = as_int(v);
          break;
        case SweepAxis::Hidden:
          config.hidden = as_int(v);
          break;
        case SweepAxis::TrainRatio:
          fraction = v;
          break;
      }
      config.validate();
      const auto [train, test] = split(corpus, fraction, options.split_seed);
      const auto graph = training_graph(train);
      const auto model = train_model(train, graph, config);
      row.metrics = evaluate(test, model, config.threshold);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_metrics_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "value,precision,recall,f1\n";
  for (const auto& r : rows) {
    // Integers print without decimals, ratios with four.
    out << (r.value == std::floor(r.value) ? format_fixed(r.value, 0) : format_fixed(r.value));
    if (r.metrics) {
      out << ',' << format_fixed(r.metrics->precision) << ',' << format_fixed(r.metrics->recall)
          << ',' << format_fixed(r.metrics->f1) << '\n';
    } else {
      out << ",NA,NA,NA\n";
    }
  }
}

void write_position_csv(std::ostream& out, const PositionTable& table) {
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_fixed(*v) : std::string("NA");
  };
  out << "pos,p1_n,p2_n,p1_h,p2_h\n";
  for (const auto& r : table.rows) {
    out << pos_name(r.pos) << ',' << cell(r.p1_n) << ',' << cell(r.p2_n) << ',' << cell(r.p1_h)
        << ',' << cell(r.p2_h) << '\n';
  }
}

}  // namespace defhyper
