#include "defhyper/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "defhyper/error.hpp"
#include "json_io.hpp"

namespace defhyper {

std::string_view baseline_name(BaselineKind k) {
  switch (k) {
    case BaselineKind::NaiveBayes:
      return "naive-bayes";
    case BaselineKind::SoftmaxRegression:
      return "softmax-regression";
    case BaselineKind::DecisionTree:
      return "decision-tree";
  }
  return "naive-bayes";
}

BaselineKind baseline_from_name(std::string_view name) {
  if (name == "naive-bayes" || name == "nb") return BaselineKind::NaiveBayes;
  if (name == "softmax-regression" || name == "softmax") return BaselineKind::SoftmaxRegression;
  if (name == "decision-tree" || name == "tree") return BaselineKind::DecisionTree;
  throw ConfigError("unknown baseline kind: " + std::string(name));
}

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double two_class_softmax1(double s0, double s1) {
  const double m = std::max(s0, s1);
  const double e0 = std::exp(s0 - m);
  const double e1 = std::exp(s1 - m);
  return e1 / (e0 + e1);
}

GaussianNaiveBayes fit_naive_bayes(std::span<const LabeledEncoding> data, std::size_t d) {
  GaussianNaiveBayes nb;
  std::size_t count[2] = {0, 0};
  for (int c = 0; c < 2; ++c) {
    nb.mean[c].assign(d, 0.0);
    nb.variance[c].assign(d, 0.0);
  }
  for (const auto& e : data) {
    ++count[e.label];
    for (std::size_t f = 0; f < d; ++f) nb.mean[e.label][f] += e.features[f];
  }
  for (int c = 0; c < 2; ++c) {
    for (auto& m : nb.mean[c]) m /= static_cast<double>(count[c]);
  }
  for (const auto& e : data) {
    for (std::size_t f = 0; f < d; ++f) {
      const double diff = e.features[f] - nb.mean[e.label][f];
      nb.variance[e.label][f] += diff * diff;
    }
  }
  double max_var = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (auto& v : nb.variance[c]) {
      v /= static_cast<double>(count[c]);
      max_var = std::max(max_var, v);
    }
  }
  const double smoothing = std::max(1e-9 * max_var, 1e-9);
  for (int c = 0; c < 2; ++c) {
    for (auto& v : nb.variance[c]) v += smoothing;
  }
  const auto n = static_cast<double>(data.size());
  for (int c = 0; c < 2; ++c) {
    nb.log_prior[c] = std::log((static_cast<double>(count[c]) + 1.0) / (n + 2.0));
  }
  return nb;
}

double nb_probability(const GaussianNaiveBayes& nb, std::span<const double> x) {
  double score[2];
  for (int c = 0; c < 2; ++c) {
    double s = nb.log_prior[c];
    for (std::size_t f = 0; f < x.size(); ++f) {
      const double v = nb.variance[c][f];
      const double diff = x[f] - nb.mean[c][f];
      s -= 0.5 * (kLog2Pi + std::log(v)) + diff * diff / (2.0 * v);
    }
    score[c] = s;
  }
  return two_class_softmax1(score[0], score[1]);
}

void standardize(const SoftmaxRegression& m, std::span<const double> x, std::vector<double>& out) {
  out.resize(x.size());
  for (std::size_t f = 0; f < x.size(); ++f) out[f] = (x[f] - m.mean[f]) / m.scale[f];
}

double softmax_probability(const SoftmaxRegression& m, std::span<const double> x) {
  std::vector<double> z;
  standardize(m, x, z);
  double s[2];
  for (std::size_t c = 0; c < 2; ++c) {
    s[c] = m.bias.data[c];
    for (std::size_t f = 0; f < z.size(); ++f) s[c] += m.weight(c, f) * z[f];
  }
  return two_class_softmax1(s[0], s[1]);
}

SoftmaxRegression fit_softmax(std::span<const LabeledEncoding> data, std::size_t d,
                              const BaselineHyper& hyper) {
  SoftmaxRegression m;
  const auto n = static_cast<double>(data.size());
  m.mean.assign(d, 0.0);
  m.scale.assign(d, 0.0);
  for (const auto& e : data) {
    for (std::size_t f = 0; f < d; ++f) m.mean[f] += e.features[f];
  }
  for (auto& v : m.mean) v /= n;
  for (const auto& e : data) {
    for (std::size_t f = 0; f < d; ++f) {
      const double diff = e.features[f] - m.mean[f];
      m.scale[f] += diff * diff;
    }
  }
  for (auto& v : m.scale) {
    v = std::sqrt(v / n);
    if (v < 1e-12) v = 1.0;
  }
  m.weight = Matrix(2, d);
  m.bias = Matrix(2, 1);

  std::vector<std::vector<double>> z(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) standardize(m, data[k].features, z[k]);

  Matrix gw(2, d), gb(2, 1);
  for (int it = 0; it < hyper.iterations; ++it) {
    gw.zero();
    gb.zero();
    for (std::size_t k = 0; k < data.size(); ++k) {
      double s[2];
      for (std::size_t c = 0; c < 2; ++c) {
        s[c] = m.bias.data[c];
        for (std::size_t f = 0; f < d; ++f) s[c] += m.weight(c, f) * z[k][f];
      }
      const double p1 = two_class_softmax1(s[0], s[1]);
      const double delta[2] = {(1.0 - p1) - (data[k].label == 0 ? 1.0 : 0.0),
                               p1 - (data[k].label == 1 ? 1.0 : 0.0)};
      for (std::size_t c = 0; c < 2; ++c) {
        gb.data[c] += delta[c];
        for (std::size_t f = 0; f < d; ++f) gw(c, f) += delta[c] * z[k][f];
      }
    }
    for (std::size_t c = 0; c < 2; ++c) {
      m.bias.data[c] -= hyper.learning_rate * gb.data[c] / n;
      for (std::size_t f = 0; f < d; ++f) {
        m.weight(c, f) -= hyper.learning_rate * (gw(c, f) / n + hyper.l2 * m.weight(c, f));
      }
    }
  }
  return m;
}

struct TreeBuilder {
  std::span<const LabeledEncoding> data;
  std::size_t dimension;
  const BaselineHyper& hyper;
  DecisionTree tree;

  static double gini(double pos, double total) {
    if (total <= 0.0) return 0.0;
    const double p = pos / total;
    return 2.0 * p * (1.0 - p);
  }

  int build(std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double pos = 0.0;
    for (std::size_t k : idx) pos += data[k].label;
    const auto total = static_cast<double>(idx.size());
    tree.nodes[static_cast<std::size_t>(id)].positive = pos / total;
    tree.nodes[static_cast<std::size_t>(id)].samples = idx.size();

    const bool pure = pos == 0.0 || pos == total;
    if (pure || depth >= hyper.max_depth || idx.size() < 2 * hyper.min_leaf) return id;

    // Best split: lowest weighted Gini; ties keep the lowest feature and
    // then the lowest threshold.
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = gini(pos, total);
    std::vector<std::size_t> sorted = idx;
    for (std::size_t f = 0; f < dimension; ++f) {
      std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return data[a].features[f] < data[b].features[f];
      });
      double left_pos = 0.0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        left_pos += data[sorted[k]].label;
        const double here = data[sorted[k]].features[f];
        const double next = data[sorted[k + 1]].features[f];
        if (here == next) continue;
        const std::size_t n_left = k + 1;
        const std::size_t n_right = sorted.size() - n_left;
        if (n_left < hyper.min_leaf || n_right < hyper.min_leaf) continue;
        const auto nl = static_cast<double>(n_left);
        const auto nr = static_cast<double>(n_right);
        const double impurity =
            (nl * gini(left_pos, nl) + nr * gini(pos - left_pos, nr)) / total;
        if (best_feature < 0 ? impurity <= best_impurity : impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (here + next);
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t k : idx) {
      (data[k].features[static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right)
          .push_back(k);
    }
    idx.clear();
    idx.shrink_to_fit();
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
  }
};

double tree_probability(const DecisionTree& tree, std::span<const double> x) {
  std::size_t k = 0;
  while (tree.nodes[k].feature >= 0) {
    const auto& n = tree.nodes[k];
    k = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return tree.nodes[k].positive;
}

}  // namespace

BaselineModel train_baseline(BaselineKind kind, std::span<const LabeledEncoding> instances,
                             const BaselineHyper& hyper) {
  if (instances.empty()) throw Error("baseline training set is empty");
  const std::size_t d = instances.front().features.size();
  bool has[2] = {false, false};
  for (const auto& e : instances) {
    if (e.features.size() != d) throw ShapeError("baseline instances differ in length");
    if (e.label != 0 && e.label != 1) throw Error("baseline labels must be 0 or 1");
    has[e.label] = true;
  }
  if (!has[0] || !has[1]) throw Error("baseline training data contains a single class");

  BaselineModel model;
  model.kind = kind;
  model.dimension = d;
  switch (kind) {
    case BaselineKind::NaiveBayes:
      model.nb = fit_naive_bayes(instances, d);
      break;
    case BaselineKind::SoftmaxRegression:
      model.softmax = fit_softmax(instances, d, hyper);
      break;
    case BaselineKind::DecisionTree: {
      TreeBuilder builder{instances, d, hyper, {}};
      std::vector<std::size_t> idx(instances.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      builder.build(idx, 0);
      model.tree = std::move(builder.tree);
      break;
    }
  }
  return model;
}

double predict_baseline(const BaselineModel& model, std::span<const double> features) {
  if (features.size() != model.dimension) {
    throw ShapeError("baseline expects " + std::to_string(model.dimension) + " features, got " +
                     std::to_string(features.size()));
  }
  switch (model.kind) {
    case BaselineKind::NaiveBayes:
      return nb_probability(model.nb, features);
    case BaselineKind::SoftmaxRegression:
      return softmax_probability(model.softmax, features);
    case BaselineKind::DecisionTree:
      return tree_probability(model.tree, features);
  }
  return 0.0;
}

std::vector<LabeledEncoding> encode_corpus(const Corpus& corpus, int window, const TrainStats& stats,
                                           const CooccurrenceGraph& graph) {
  std::vector<LabeledEncoding> out;
  out.reserve(corpus.candidate_count());
  for (const auto& d : corpus.definitions) {
    for (const auto& c : d.candidates) {
      const auto seg = context_segment(d.tags, c.position, window);
      const auto enc = integer_encode(seg, refinement_features(c, d, stats, graph));
      out.push_back({enc.values, d.is_gold(c.position) ? 1 : 0});
    }
  }
  return out;
}

BaselinePipeline train_baseline_pipeline(BaselineKind kind, const Corpus& train,
                                         const CooccurrenceGraph& graph, int window,
                                         double threshold, const BaselineHyper& hyper) {
  BaselinePipeline p;
  p.window = window;
  p.threshold = threshold;
  p.stats = TrainStats::from(train);
  p.graph = graph;
  const auto data = encode_corpus(train, window, p.stats, graph);
  p.model = train_baseline(kind, data, hyper);
  return p;
}

Prediction predict_baseline(const Definition& definition, const BaselinePipeline& pipeline,
                            double threshold) {
  Prediction pred;
  for (const auto& c : definition.candidates) {
    const auto seg = context_segment(definition.tags, c.position, pipeline.window);
    const auto enc =
        integer_encode(seg, refinement_features(c, definition, pipeline.stats, pipeline.graph));
    const double p = predict_baseline(pipeline.model, enc.values);
    pred.candidates.push_back({c.position, p, p});
  }
  pred.selected = select_candidate(pred.candidates, threshold);
  return pred;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

using detail::json;

Matrix row_matrix(const std::vector<double>& a, const std::vector<double>& b) {
  Matrix m(2, a.size());
  std::copy(a.begin(), a.end(), m.row(0));
  std::copy(b.begin(), b.end(), m.row(1));
  return m;
}

Matrix column(const std::vector<double>& v) {
  Matrix m(v.size(), 1);
  m.data = v;
  return m;
}

Matrix load_matrix(const json& weights, const std::string& name, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  if (!weights.contains(name)) throw ShapeError("model file lacks weight '" + name + "'");
  detail::matrix_from_json(weights.at(name), m, name);
  return m;
}

}  // namespace

std::string baseline_to_json(const BaselinePipeline& p) {
  json j;
  j["version"] = kModelFormatVersion;
  j["kind"] = std::string(baseline_name(p.model.kind));
  json config;
  config["window"] = p.window;
  config["threshold"] = p.threshold;
  config["dimension"] = p.model.dimension;
  json weights = json::object();
  const auto& m = p.model;
  switch (m.kind) {
    case BaselineKind::NaiveBayes: {
      weights["nb.mean"] = detail::matrix_to_json(row_matrix(m.nb.mean[0], m.nb.mean[1]));
      weights["nb.variance"] = detail::matrix_to_json(row_matrix(m.nb.variance[0], m.nb.variance[1]));
      weights["nb.log_prior"] = detail::matrix_to_json(column({m.nb.log_prior[0], m.nb.log_prior[1]}));
      break;
    }
    case BaselineKind::SoftmaxRegression:
      weights["softmax.mean"] = detail::matrix_to_json(column(m.softmax.mean));
      weights["softmax.scale"] = detail::matrix_to_json(column(m.softmax.scale));
      weights["softmax.weight"] = detail::matrix_to_json(m.softmax.weight);
      weights["softmax.bias"] = detail::matrix_to_json(m.softmax.bias);
      break;
    case BaselineKind::DecisionTree: {
      const auto& nodes = m.tree.nodes;
      std::vector<double> feature, threshold, left, right, positive, samples;
      for (const auto& n : nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        positive.push_back(n.positive);
        samples.push_back(static_cast<double>(n.samples));
      }
      config["nodes"] = nodes.size();
      weights["tree.feature"] = detail::matrix_to_json(column(feature));
      weights["tree.threshold"] = detail::matrix_to_json(column(threshold));
      weights["tree.left"] = detail::matrix_to_json(column(left));
      weights["tree.right"] = detail::matrix_to_json(column(right));
      weights["tree.positive"] = detail::matrix_to_json(column(positive));
      weights["tree.samples"] = detail::matrix_to_json(column(samples));
      break;
    }
  }
  j["config"] = std::move(config);
  j["weights"] = std::move(weights);
  j["graph"] = detail::graph_to_json_value(p.graph);
  j["train_stats"] = detail::stats_to_json(p.stats);
  return j.dump();
}

BaselinePipeline baseline_from_json(std::string_view text) {
  const json j = detail::parse_envelope(text);
  try {
    BaselinePipeline p;
    p.model.kind = baseline_from_name(j.at("kind").get<std::string>());
    const auto& config = j.at("config");
    p.window = config.at("window").get<int>();
    p.threshold = config.at("threshold").get<double>();
    const auto d = config.at("dimension").get<std::size_t>();
    if (p.window < 1 || d != 2 * static_cast<std::size_t>(p.window) + RefinementFeatures::kCount) {
      throw ShapeError("baseline dimension does not match its window size");
    }
    p.model.dimension = d;
    const auto& w = j.at("weights");
    auto& m = p.model;
    switch (m.kind) {
      case BaselineKind::NaiveBayes: {
        const Matrix mean = load_matrix(w, "nb.mean", 2, d);
        const Matrix var = load_matrix(w, "nb.variance", 2, d);
        const Matrix prior = load_matrix(w, "nb.log_prior", 2, 1);
        for (std::size_t c = 0; c < 2; ++c) {
          m.nb.mean[c].assign(mean.row(c), mean.row(c) + d);
          m.nb.variance[c].assign(var.row(c), var.row(c) + d);
          m.nb.log_prior[c] = prior.data[c];
        }
        break;
      }
      case BaselineKind::SoftmaxRegression:
        m.softmax.mean = load_matrix(w, "softmax.mean", d, 1).data;
        m.softmax.scale = load_matrix(w, "softmax.scale", d, 1).data;
        m.softmax.weight = load_matrix(w, "softmax.weight", 2, d);
        m.softmax.bias = load_matrix(w, "softmax.bias", 2, 1);
        break;
      case BaselineKind::DecisionTree: {
        const auto n = config.at("nodes").get<std::size_t>();
        const auto feature = load_matrix(w, "tree.feature", n, 1).data;
        const auto threshold = load_matrix(w, "tree.threshold", n, 1).data;
        const auto left = load_matrix(w, "tree.left", n, 1).data;
        const auto right = load_matrix(w, "tree.right", n, 1).data;
        const auto positive = load_matrix(w, "tree.positive", n, 1).data;
        const auto samples = load_matrix(w, "tree.samples", n, 1).data;
        if (n == 0) throw ShapeError("decision tree has no nodes");
        for (std::size_t k = 0; k < n; ++k) {
          TreeNode node;
          node.feature = static_cast<int>(feature[k]);
          node.threshold = threshold[k];
          node.left = static_cast<int>(left[k]);
          node.right = static_cast<int>(right[k]);
          node.positive = positive[k];
          node.samples = static_cast<std::size_t>(samples[k]);
          const auto valid_child = [n](int c) { return c > 0 && static_cast<std::size_t>(c) < n; };
          if (node.feature >= static_cast<int>(d) ||
              (node.feature >= 0 && (!valid_child(node.left) || !valid_child(node.right)))) {
            throw ShapeError("decision tree node " + std::to_string(k) + " is inconsistent");
          }
          m.tree.nodes.push_back(node);
        }
        break;
      }
    }
    p.graph = detail::graph_from_json_value(j.at("graph"));
    p.stats = detail::stats_from_json(j.at("train_stats"));
    return p;
  } catch (const json::exception& e) {
    throw CorruptFileError(std::string("baseline file is incomplete: ") + e.what());
  }
}

void save_baseline(const BaselinePipeline& pipeline, const std::string& path) {
  detail::write_file(path, baseline_to_json(pipeline));
}

BaselinePipeline load_baseline(const std::string& path) {
  return baseline_from_json(detail::read_file(path));
}

std::string model_file_kind(const std::string& path) {
  const auto j = detail::parse_envelope(detail::read_file(path));
  return j.value("kind", std::string("neural"));
}

}  // namespace defhyper
