#include <gtest/gtest.h>

#include <filesystem>

#include "defhyper/baselines.hpp"
#include "defhyper/error.hpp"
#include "defhyper/rng.hpp"
#include "defhyper/synth.hpp"

using namespace defhyper;

namespace {

std::vector<LabeledEncoding> xor_set(int copies) {
  std::vector<LabeledEncoding> out;
  for (int c = 0; c < copies; ++c) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) out.push_back({{double(a), double(b)}, a ^ b});
    }
  }
  return out;
}

double accuracy(const BaselineModel& m, const std::vector<LabeledEncoding>& data) {
  int ok = 0;
  for (const auto& e : data) ok += (predict_baseline(m, e.features) >= 0.5) == (e.label == 1);
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

const BaselineKind kAll[] = {BaselineKind::NaiveBayes, BaselineKind::SoftmaxRegression,
                             BaselineKind::DecisionTree};

}  // namespace

TEST(Baselines, Names) {
  for (auto k : kAll) EXPECT_EQ(baseline_from_name(baseline_name(k)), k);
  EXPECT_EQ(baseline_from_name("tree"), BaselineKind::DecisionTree);
  EXPECT_THROW(baseline_from_name("svm"), ConfigError);
}

TEST(Baselines, SoftmaxSeparatesLinearData) {
  std::vector<LabeledEncoding> data;
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
    if (std::abs(x + 2 * y) < 0.1) continue;
    data.push_back({{x, y}, x + 2 * y > 0 ? 1 : 0});
  }
  EXPECT_EQ(accuracy(train_baseline(BaselineKind::SoftmaxRegression, data), data), 1.0);
}

TEST(Baselines, XorTreeFitsSoftmaxCannot) {
  const auto data = xor_set(10);
  const auto tree = train_baseline(BaselineKind::DecisionTree, data);
  EXPECT_EQ(accuracy(tree, data), 1.0);
  // Depth of the fitted tree is at least 2.
  int depth = 0;
  const std::function<int(int)> d = [&](int n) {
    const auto& node = tree.tree.nodes[static_cast<std::size_t>(n)];
    return node.feature < 0 ? 0 : 1 + std::max(d(node.left), d(node.right));
  };
  depth = d(0);
  EXPECT_GE(depth, 2);
  EXPECT_LE(accuracy(train_baseline(BaselineKind::SoftmaxRegression, data), data), 0.75);
}

TEST(Baselines, ConstantFeaturesPredictMajority) {
  std::vector<LabeledEncoding> data;
  for (int k = 0; k < 30; ++k) data.push_back({{1.0, 2.0}, k < 20 ? 0 : 1});
  for (auto kind : kAll) {
    const auto m = train_baseline(kind, data);
    EXPECT_LT(predict_baseline(m, std::vector<double>{1.0, 2.0}), 0.5) << baseline_name(kind);
  }
  for (auto& e : data) e.label = 1 - e.label;
  for (auto kind : kAll) {
    EXPECT_GT(predict_baseline(train_baseline(kind, data), std::vector<double>{1.0, 2.0}), 0.5);
  }
}

TEST(Baselines, TrainingErrors) {
  for (auto kind : kAll) {
    EXPECT_THROW(train_baseline(kind, {}), Error);
    const std::vector<LabeledEncoding> one = {{{1.0}, 1}, {{2.0}, 1}};
    EXPECT_THROW(train_baseline(kind, one), Error);
  }
}

TEST(Baselines, NaiveBayesSymmetry) {
  const std::vector<LabeledEncoding> data = {{{-1.0}, 0}, {{-3.0}, 0}, {{1.0}, 1}, {{3.0}, 1}};
  const auto m = train_baseline(BaselineKind::NaiveBayes, data);
  EXPECT_NEAR(predict_baseline(m, std::vector<double>{0.0}), 0.5, 1e-12);
}

TEST(Baselines, TreeLeafFrequency) {
  BaselineModel m;
  m.kind = BaselineKind::DecisionTree;
  m.dimension = 1;
  TreeNode leaf;
  leaf.positive = 9.0 / 10.0;
  leaf.samples = 10;
  m.tree.nodes = {leaf};
  EXPECT_DOUBLE_EQ(predict_baseline(m, std::vector<double>{3.0}), 0.9);

  // Nine positives and one negative on one side of a split.
  std::vector<LabeledEncoding> data;
  for (int k = 0; k < 9; ++k) data.push_back({{0.0, double(k)}, 1});
  data.push_back({{0.0, 100.0}, 0});
  for (int k = 0; k < 10; ++k) data.push_back({{1.0, double(k)}, 0});
  BaselineHyper h;
  h.max_depth = 1;
  const auto t = train_baseline(BaselineKind::DecisionTree, data, h);
  EXPECT_DOUBLE_EQ(predict_baseline(t, std::vector<double>{0.0, 5.0}), 0.9);
}

TEST(Baselines, SoftmaxZeroWeightsIsHalf) {
  BaselineModel m;
  m.kind = BaselineKind::SoftmaxRegression;
  m.dimension = 2;
  m.softmax.mean = {0, 0};
  m.softmax.scale = {1, 1};
  m.softmax.weight = Matrix(2, 2);
  m.softmax.bias = Matrix(2, 1);
  EXPECT_EQ(predict_baseline(m, std::vector<double>{5.0, -3.0}), 0.5);
}

TEST(Baselines, ProbabilitiesValidAndShapeChecked) {
  Rng rng(3);
  std::vector<LabeledEncoding> data;
  for (int k = 0; k < 300; ++k) {
    data.push_back({{rng.uniform(-5, 5), rng.uniform(0, 1), double(rng.below(32))},
                    rng.bernoulli(0.3) ? 1 : 0});
  }
  for (auto kind : kAll) {
    const auto m = train_baseline(kind, data);
    for (int k = 0; k < 200; ++k) {
      const std::vector<double> x = {rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3),
                                     rng.uniform(-1e3, 1e3)};
      const double p = predict_baseline(m, x);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
    EXPECT_THROW(predict_baseline(m, std::vector<double>{1.0}), ShapeError);
  }
}

TEST(Baselines, DeterministicTraining) {
  Rng rng(8);
  std::vector<LabeledEncoding> data;
  for (int k = 0; k < 200; ++k) {
    data.push_back({{double(rng.below(5)), double(rng.below(5))}, rng.bernoulli(0.4) ? 1 : 0});
  }
  for (auto kind : kAll) {
    BaselinePipeline a, b;
    a.model = train_baseline(kind, data);
    b.model = train_baseline(kind, data);
    a.window = b.window = 0;
    EXPECT_EQ(baseline_to_json(a), baseline_to_json(b));
  }
}

TEST(Baselines, PipelineAndPersistence) {
  SynthConfig s;
  s.records = 300;
  s.vocabulary = 200;
  const Corpus c = synth_generate(s, 2);
  const auto graph = training_graph(c);
  const auto enc = encode_corpus(c, 3, TrainStats::from(c), graph);
  EXPECT_EQ(enc.size(), c.candidate_count());
  EXPECT_EQ(enc.front().features.size(), 2u * 3u + 4u);

  for (auto kind : kAll) {
    const auto p = train_baseline_pipeline(kind, c, graph, 3, 0.5);
    const auto pred = predict_baseline(c.definitions[0], p, 0.0);
    ASSERT_TRUE(pred.selected);
    for (const auto& cs : pred.candidates) EXPECT_EQ(cs.p_init, cs.p_final);

    const std::string path =
        (std::filesystem::temp_directory_path() / "defhyper_baseline.json").string();
    save_baseline(p, path);
    EXPECT_EQ(model_file_kind(path), baseline_name(kind));
    const auto back = load_baseline(path);
    EXPECT_EQ(baseline_to_json(back), baseline_to_json(p));
    EXPECT_EQ(predict_baseline(c.definitions[1], back, 0.0).candidates.size(),
              c.definitions[1].candidates.size());
    std::filesystem::remove(path);
  }
  const std::string text = baseline_to_json(train_baseline_pipeline(kAll[0], c, graph, 3, 0.5));
  EXPECT_THROW(baseline_from_json(text.substr(0, 40)), CorruptFileError);
}
