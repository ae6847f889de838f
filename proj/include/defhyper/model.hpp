#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "defhyper/cograph.hpp"
#include "defhyper/corpus.hpp"
#include "defhyper/features.hpp"
#include "defhyper/neural.hpp"

namespace defhyper {

enum class Mode { Pos, Word, HybridEmbed, HybridOneHot };

std::string_view mode_name(Mode m);
Mode mode_from_name(std::string_view name);

struct ModelConfig {
  Mode mode = Mode::Pos;
  int window = 3;
  int hidden = 64;
  int topk = 0;              // hybrid modes: |W_top|; word mode: vocabulary cap (0 = none)
  int embedding_dim = 100;   // embedded modes
  int min_word_count = 2;    // word mode: rarer training words share the UNK column
  double dropout = 0.5;
  double learning_rate = 1e-3;
  double decay = 0.9;
  double epsilon = 1e-8;
  int epochs = 30;
  int batch_size = 32;
  std::uint64_t seed = 42;
  double threshold = 0.5;
  bool refine = true;
  int refine_hidden = 8;
  double refine_learning_rate = 1e-2;  // stage 2 only
  double positive_weight = 1.0;
  bool parallel = true;  // use the OpenMP batch kernel when available

  // Throws ConfigError on any violated invariant.
  void validate() const;
  bool embedded() const { return mode == Mode::Word || mode == Mode::HybridEmbed; }
  RmsPropConfig optimizer() const { return {learning_rate, decay, epsilon}; }
};

// Maps the positions of a definition to input-token ids for the GRUs.
//   pos:     PoS index - 1 (0..15), padding = NULL
//   hybrid:  top-K word rank (0..K-1) or K + PoS index - 1, padding = K + 15
//   word:    0 = padding, 1 = UNK, 2 + vocabulary rank
struct InputEncoder {
  Mode mode = Mode::Pos;
  std::vector<std::string> vocabulary;
  std::unordered_map<std::string, int> index;

  static InputEncoder build(const ModelConfig& config, const Corpus& train);
  static InputEncoder from_vocabulary(Mode mode, std::vector<std::string> vocabulary);

  int input_size() const;
  int pad_id() const;
  std::vector<int> encode(const Definition& definition) const;
};

// Bidirectional GRU over the context window followed by a tanh hidden layer
// and a two-way softmax.
struct Stage1Params {
  Matrix embedding;  // d x |V| in embedded modes, empty otherwise
  GruParams positive;
  GruParams negative;
  DenseParams hidden;  // 2H -> H
  DenseParams output;  // H -> 2

  Stage1Params() = default;
  Stage1Params(const ModelConfig& config, int input_size);

  bool embedded() const { return embedding.size() != 0; }
  void init(Rng& rng);
  ParamList params(bool include_embedding = true);
  std::vector<const Matrix*> tensors(bool include_embedding = true) const;
};

// [P_init, position, capitalized, frequency, dc] -> tanh hidden -> sigmoid.
struct RefineParams {
  DenseParams hidden;
  DenseParams output;

  RefineParams() = default;
  explicit RefineParams(int hidden_size);

  void init(Rng& rng);
  ParamList params();
};

inline constexpr std::size_t kRefineInputs = 1 + RefinementFeatures::kCount;

struct Stage1Instance {
  IdWindow window;
  int label = 0;
};

// One candidate of one definition, as a stage-1 training instance.
std::vector<Stage1Instance> stage1_instances(const Corpus& corpus, const InputEncoder& encoder,
                                             int window);

// Scratch buffers for one forward/backward pass.
struct Stage1Workspace {
  std::vector<GruStepCache> pos_steps, neg_steps;
  std::vector<std::vector<double>> pos_inputs, neg_inputs;  // embedded modes: x per step
  std::vector<double> y, mask, y_dropped, hidden_pre, hidden_act, logits, probs;
  std::vector<double> az, ar, ah, daz, dar, dah, dh, dx, dy, dhidden;
};

// Gradient of one instance. The embedding gradient is kept sparse.
struct Stage1Gradient {
  Stage1Params dense;  // embedding left empty
  std::vector<std::pair<int, std::vector<double>>> embedding_rows;

  explicit Stage1Gradient(const Stage1Params& like);
  void zero();
};

// P(hypernym | window). mask == nullptr disables dropout.
double stage1_forward(const Stage1Params& p, const IdWindow& window, const double* mask,
                      Stage1Workspace& ws);

// Forward + backward for one instance; returns the weighted loss and writes
// the (weighted) gradient into grad, which must be zeroed by the caller.
double stage1_instance_gradient(const Stage1Params& p, const Stage1Instance& instance,
                                double weight, const double* mask, Stage1Workspace& ws,
                                Stage1Gradient& grad);

struct RefineInput {
  std::array<double, kRefineInputs> x{};
  int label = 0;
};

double refine_forward(const RefineParams& p, std::span<const double> x);
double refine_instance_gradient(const RefineParams& p, const RefineInput& in, double weight,
                                RefineParams& grad);

struct TrainingLog {
  std::vector<double> stage1_loss;  // mean loss per epoch
  std::vector<double> stage2_loss;
};

using EpochCallback = std::function<void(int stage, int epoch, double mean_loss)>;

struct Stage1Model {
  InputEncoder encoder;
  Stage1Params params;
  std::vector<double> loss_trace;
};

Stage1Model train_stage1(const Corpus& train, const ModelConfig& config,
                         const EpochCallback& on_epoch = {});

struct RefineModel {
  RefineParams params;
  std::vector<double> loss_trace;
};

// Everything the pipeline needs at prediction time.
struct ModelParams {
  ModelConfig config;
  InputEncoder encoder;
  Stage1Params stage1;
  std::optional<RefineParams> refine;
  TrainStats stats;
  CooccurrenceGraph graph;
  TrainingLog log;
};

std::array<double, kRefineInputs> refine_inputs(double p_init, const RefinementFeatures& f);

RefineModel train_refine(const Corpus& train, const Stage1Model& stage1, const TrainStats& stats,
                         const CooccurrenceGraph& graph, const ModelConfig& config,
                         const EpochCallback& on_epoch = {});

// Stage 1, then (if config.refine) stage 2 on the frozen stage-1 outputs.
// The graph must come from training data only.
ModelParams train_model(const Corpus& train, const CooccurrenceGraph& graph,
                        const ModelConfig& config, const EpochCallback& on_epoch = {});

// Graph from the training split: tag partners mapped through training labels.
CooccurrenceGraph training_graph(const Corpus& train,
                                 const std::vector<TagSet>& extra_tag_sets = {});

struct CandidateScore {
  int position = 0;
  double p_init = 0.0;
  double p_final = 0.0;
};

struct Prediction {
  std::vector<CandidateScore> candidates;
  std::optional<int> selected;
};

// Argmax of p_final (earliest position on ties), kept only if >= threshold.
std::optional<int> select_candidate(std::span<const CandidateScore> scores, double threshold);

Prediction predict(const Definition& definition, const ModelParams& model);
Prediction predict(const Definition& definition, const ModelParams& model, double threshold);
std::vector<Prediction> predict_corpus(const Corpus& corpus, const ModelParams& model,
                                       double threshold);

inline constexpr int kModelFormatVersion = 1;

std::string model_to_json(const ModelParams& model);
ModelParams model_from_json(std::string_view text);
void save_model(const ModelParams& model, const std::string& path);
ModelParams load_model(const std::string& path);

}  // namespace defhyper
