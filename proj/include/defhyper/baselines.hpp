#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "defhyper/cograph.hpp"
#include "defhyper/corpus.hpp"
#include "defhyper/features.hpp"
#include "defhyper/model.hpp"

namespace defhyper {

enum class BaselineKind { NaiveBayes, SoftmaxRegression, DecisionTree };

std::string_view baseline_name(BaselineKind k);
BaselineKind baseline_from_name(std::string_view name);

struct LabeledEncoding {
  std::vector<double> features;
  int label = 0;
};

struct GaussianNaiveBayes {
  double log_prior[2] = {0.0, 0.0};
  std::vector<double> mean[2];
  std::vector<double> variance[2];
};

struct SoftmaxRegression {
  // Features are standardized with the training mean/scale before use.
  std::vector<double> mean, scale;
  Matrix weight;  // 2 x D
  Matrix bias;    // 2 x 1
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;   // feature <= threshold
  int right = -1;  // feature > threshold
  double positive = 0.0;  // leaf: fraction of positive training instances
  std::size_t samples = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct BaselineHyper {
  double l2 = 1e-4;
  double learning_rate = 0.5;
  int iterations = 500;
  int max_depth = 12;
  std::size_t min_leaf = 5;
};

struct BaselineModel {
  BaselineKind kind = BaselineKind::NaiveBayes;
  std::size_t dimension = 0;
  GaussianNaiveBayes nb;
  SoftmaxRegression softmax;
  DecisionTree tree;
};

// Throws Error when data is empty or contains a single class.
BaselineModel train_baseline(BaselineKind kind, std::span<const LabeledEncoding> instances,
                             const BaselineHyper& hyper = {});

// Probability of the hypernym class. Throws ShapeError on a length mismatch.
double predict_baseline(const BaselineModel& model, std::span<const double> features);

// A baseline together with what it needs to featurize definitions.
struct BaselinePipeline {
  BaselineModel model;
  int window = 3;
  double threshold = 0.5;
  TrainStats stats;
  CooccurrenceGraph graph;
};

std::vector<LabeledEncoding> encode_corpus(const Corpus& corpus, int window, const TrainStats& stats,
                                           const CooccurrenceGraph& graph);

BaselinePipeline train_baseline_pipeline(BaselineKind kind, const Corpus& train,
                                         const CooccurrenceGraph& graph, int window,
                                         double threshold, const BaselineHyper& hyper = {});

// Scores each candidate and applies the same argmax-with-threshold rule as
// the neural pipeline (p_init == p_final).
Prediction predict_baseline(const Definition& definition, const BaselinePipeline& pipeline,
                            double threshold);

std::string baseline_to_json(const BaselinePipeline& pipeline);
BaselinePipeline baseline_from_json(std::string_view text);
void save_baseline(const BaselinePipeline& pipeline, const std::string& path);
BaselinePipeline load_baseline(const std::string& path);

// "neural", "naive-bayes", ... as stored in a model file; throws like load_model.
std::string model_file_kind(const std::string& path);

}  // namespace defhyper
