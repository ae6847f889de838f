#include "defhyper/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "defhyper/error.hpp"
#include "defhyper/kernels.hpp"

namespace defhyper {

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Pos:
      return "pos";
    case Mode::Word:
      return "word";
    case Mode::HybridEmbed:
      return "hybrid-embed";
    case Mode::HybridOneHot:
      return "hybrid-onehot";
  }
  return "pos";
}

Mode mode_from_name(std::string_view name) {
  if (name == "pos") return Mode::Pos;
  if (name == "word") return Mode::Word;
  if (name == "hybrid-embed") return Mode::HybridEmbed;
  if (name == "hybrid-onehot") return Mode::HybridOneHot;
  throw ConfigError("unknown mode: " + std::string(name));
}

void ModelConfig::validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(window >= 1, "window must be >= 1");
  require(hidden >= 1, "hidden size must be >= 1");
  require(topk >= 0, "topk must be >= 0");
  require(embedding_dim >= 1, "embedding dimension must be >= 1");
  require(min_word_count >= 1, "min word count must be >= 1");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(learning_rate > 0.0, "learning rate must be positive");
  require(decay >= 0.0 && decay < 1.0, "decay must lie in [0, 1)");
  require(epsilon > 0.0, "epsilon must be positive");
  require(epochs >= 0, "epochs must be >= 0");
  require(batch_size >= 1, "batch size must be >= 1");
  require(threshold >= 0.0 && threshold <= 1.0, "threshold must lie in [0, 1]");
  require(refine_hidden >= 1, "refinement hidden size must be >= 1");
  require(refine_learning_rate > 0.0, "refinement learning rate must be positive");
  require(positive_weight > 0.0, "positive weight must be positive");
}

// ---------------------------------------------------------------------------
// Input encoding

InputEncoder InputEncoder::from_vocabulary(Mode mode, std::vector<std::string> vocabulary) {
  InputEncoder enc;
  enc.mode = mode;
  enc.vocabulary = std::move(vocabulary);
  for (std::size_t r = 0; r < enc.vocabulary.size(); ++r) {
    enc.index.emplace(enc.vocabulary[r], static_cast<int>(r));
  }
  return enc;
}

InputEncoder InputEncoder::build(const ModelConfig& config, const Corpus& train) {
  switch (config.mode) {
    case Mode::Pos:
      return from_vocabulary(Mode::Pos, {});
    case Mode::HybridEmbed:
    case Mode::HybridOneHot:
      return from_vocabulary(config.mode,
                             build_topk(train, static_cast<std::size_t>(config.topk)).words);
    case Mode::Word: {
      // Frequency order, ties lexicographic; words below min count map to UNK.
      const auto ranked = build_topk(train, train.frequency.size());
      std::vector<std::string> vocab;
      for (const auto& w : ranked.words) {
        if (train.frequency.at(w) < config.min_word_count) continue;
        if (config.topk > 0 && vocab.size() >= static_cast<std::size_t>(config.topk)) break;
        vocab.push_back(w);
      }
      return from_vocabulary(Mode::Word, std::move(vocab));
    }
  }
  throw ConfigError("unknown mode");
}

int InputEncoder::input_size() const {
  const int v = static_cast<int>(vocabulary.size());
  switch (mode) {
    case Mode::Pos:
      return static_cast<int>(kPosCount);
    case Mode::HybridEmbed:
    case Mode::HybridOneHot:
      return v + static_cast<int>(kPosCount);
    case Mode::Word:
      return v + 2;
  }
  return 0;
}

int InputEncoder::pad_id() const {
  switch (mode) {
    case Mode::Pos:
      return pos_index(PosType::Null) - 1;
    case Mode::HybridEmbed:
    case Mode::HybridOneHot:
      return static_cast<int>(vocabulary.size()) + pos_index(PosType::Null) - 1;
    case Mode::Word:
      return 0;
  }
  return 0;
}

std::vector<int> InputEncoder::encode(const Definition& definition) const {
  std::vector<int> ids;
  ids.reserve(definition.size());
  const int k = static_cast<int>(vocabulary.size());
  for (std::size_t n = 0; n < definition.size(); ++n) {
    const int pos_id = pos_index(definition.tags[n]) - 1;
    switch (mode) {
      case Mode::Pos:
        ids.push_back(pos_id);
        break;
      case Mode::HybridEmbed:
      case Mode::HybridOneHot: {
        const auto it = index.find(to_lower(definition.words[n]));
        ids.push_back(it != index.end() ? it->second : k + pos_id);
        break;
      }
      case Mode::Word: {
        const auto it = index.find(to_lower(definition.words[n]));
        ids.push_back(it != index.end() ? 2 + it->second : 1);
        break;
      }
    }
  }
  return ids;
}

// ---------------------------------------------------------------------------
// Parameter blocks

Stage1Params::Stage1Params(const ModelConfig& config, int input_size) {
  const auto h = static_cast<std::size_t>(config.hidden);
  std::size_t d = static_cast<std::size_t>(input_size);
  if (config.embedded()) {
    embedding = Matrix(static_cast<std::size_t>(config.embedding_dim), d);
    d = static_cast<std::size_t>(config.embedding_dim);
  }
  positive = GruParams(d, h);
  negative = GruParams(d, h);
  hidden = DenseParams(2 * h, h);
  output = DenseParams(h, 2);
}

void Stage1Params::init(Rng& rng) {
  if (embedded()) {
    Rng r = rng.derive("embedding");
    glorot_init(embedding, embedding.cols, embedding.rows, r);
  }
  Rng rp = rng.derive("gru-positive");
  positive.init(rp);
  Rng rn = rng.derive("gru-negative");
  negative.init(rn);
  Rng rh = rng.derive("head-hidden");
  hidden.init(rh);
  Rng ro = rng.derive("head-output");
  output.init(ro);
}

ParamList Stage1Params::params(bool include_embedding) {
  ParamList list;
  if (include_embedding && embedded()) list.emplace_back("embedding", &embedding);
  positive.append_to(list, "gru_positive");
  negative.append_to(list, "gru_negative");
  hidden.append_to(list, "head.hidden");
  output.append_to(list, "head.output");
  return list;
}

std::vector<const Matrix*> Stage1Params::tensors(bool include_embedding) const {
  std::vector<const Matrix*> out;
  for (const auto& [name, m] : const_cast<Stage1Params*>(this)->params(include_embedding)) {
    out.push_back(m);
  }
  return out;
}

RefineParams::RefineParams(int hidden_size)
    : hidden(kRefineInputs, static_cast<std::size_t>(hidden_size)),
      output(static_cast<std::size_t>(hidden_size), 1) {}

void RefineParams::init(Rng& rng) {
  Rng rh = rng.derive("refine-hidden");
  hidden.init(rh);
  Rng ro = rng.derive("refine-output");
  output.init(ro);
}

ParamList RefineParams::params() {
  ParamList list;
  hidden.append_to(list, "refine.hidden");
  output.append_to(list, "refine.output");
  return list;
}

Stage1Gradient::Stage1Gradient(const Stage1Params& like) {
  dense.positive = GruParams(like.positive.input(), like.positive.hidden());
  dense.negative = GruParams(like.negative.input(), like.negative.hidden());
  dense.hidden = DenseParams(like.hidden.in(), like.hidden.out());
  dense.output = DenseParams(like.output.in(), like.output.out());
}

void Stage1Gradient::zero() {
  for (auto& [name, m] : dense.params(false)) m->zero();
  embedding_rows.clear();
}

std::vector<Stage1Instance> stage1_instances(const Corpus& corpus, const InputEncoder& encoder,
                                             int window) {
  std::vector<Stage1Instance> out;
  out.reserve(corpus.candidate_count());
  const int pad = encoder.pad_id();
  for (const auto& d : corpus.definitions) {
    const auto ids = encoder.encode(d);
    for (const auto& c : d.candidates) {
      out.push_back({id_window(ids, c.position, window, pad), d.is_gold(c.position) ? 1 : 0});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage-1 forward / backward

namespace {

// Input projections W* x for one token id.
void project(const Stage1Params& p, const GruParams& g, int id, std::vector<double>& x,
             Stage1Workspace& ws) {
  const std::size_t h = g.hidden();
  ws.az.assign(h, 0.0);
  ws.ar.assign(h, 0.0);
  ws.ah.assign(h, 0.0);
  const auto col = static_cast<std::size_t>(id);
  if (p.embedded()) {
    x.resize(p.embedding.rows);
    for (std::size_t r = 0; r < p.embedding.rows; ++r) x[r] = p.embedding(r, col);
    gemv_add(g.wz, x.data(), ws.az.data());
    gemv_add(g.wr, x.data(), ws.ar.data());
    gemv_add(g.wh, x.data(), ws.ah.data());
  } else {
    if (col >= g.input()) throw ShapeError("input id outside one-hot dimension");
    for (std::size_t k = 0; k < h; ++k) {
      ws.az[k] = g.wz(k, col);
      ws.ar[k] = g.wr(k, col);
      ws.ah[k] = g.wh(k, col);
    }
  }
}

// Runs one direction over `ids` (already in reading order); result in h.
DEFHYPER_HOT void run_direction(const Stage1Params& p, const GruParams& g, const std::vector<int>& ids,
                   bool reversed, std::vector<GruStepCache>& steps,
                   std::vector<std::vector<double>>& inputs, Stage1Workspace& ws,
                   std::span<double> h_out) {
  const std::size_t n = ids.size();
  const std::size_t hn = g.hidden();
  steps.resize(n);
  inputs.resize(n);
  std::vector<double> h(hn, 0.0), next(hn);
  for (std::size_t t = 0; t < n; ++t) {
    const int id = reversed ? ids[n - 1 - t] : ids[t];
    project(p, g, id, inputs[t], ws);
    gru_step(g, ws.az.data(), ws.ar.data(), ws.ah.data(), h, steps[t], next);
    h.swap(next);
  }
  std::copy(h.begin(), h.end(), h_out.begin());
}

DEFHYPER_HOT void backprop_direction(const Stage1Params& p, const GruParams& g, GruParams& gg,
                        const std::vector<int>& ids, bool reversed,
                        const std::vector<GruStepCache>& steps,
                        const std::vector<std::vector<double>>& inputs, std::span<const double> dh_in,
                        Stage1Workspace& ws, Stage1Gradient& grad) {
  const std::size_t n = ids.size();
  const std::size_t hn = g.hidden();
  ws.dh.assign(dh_in.begin(), dh_in.end());
  ws.daz.resize(hn);
  ws.dar.resize(hn);
  ws.dah.resize(hn);
  for (std::size_t t = n; t-- > 0;) {
    const int id = reversed ? ids[n - 1 - t] : ids[t];
    gru_step_backward(g, steps[t], ws.dh, gg, ws.daz.data(), ws.dar.data(), ws.dah.data());
    const auto col = static_cast<std::size_t>(id);
    if (p.embedded()) {
      const auto& x = inputs[t];
      outer_add(gg.wz, ws.daz.data(), x.data());
      outer_add(gg.wr, ws.dar.data(), x.data());
      outer_add(gg.wh, ws.dah.data(), x.data());
      std::vector<double> dx(x.size(), 0.0);
      gemv_t_add(g.wz, ws.daz.data(), dx.data());
      gemv_t_add(g.wr, ws.dar.data(), dx.data());
      gemv_t_add(g.wh, ws.dah.data(), dx.data());
      grad.embedding_rows.emplace_back(id, std::move(dx));
    } else {
      for (std::size_t k = 0; k < hn; ++k) {
        gg.wz(k, col) += ws.daz[k];
        gg.wr(k, col) += ws.dar[k];
        gg.wh(k, col) += ws.dah[k];
      }
    }
  }
}

}  // namespace

double stage1_forward(const Stage1Params& p, const IdWindow& window, const double* mask,
                      Stage1Workspace& ws) {
  const std::size_t hn = p.positive.hidden();
  ws.y.assign(2 * hn, 0.0);
  run_direction(p, p.positive, window.pre, false, ws.pos_steps, ws.pos_inputs, ws,
                std::span<double>(ws.y.data(), hn));
  run_direction(p, p.negative, window.post, true, ws.neg_steps, ws.neg_inputs, ws,
                std::span<double>(ws.y.data() + hn, hn));
  ws.y_dropped = ws.y;
  if (mask != nullptr) {
    for (std::size_t k = 0; k < ws.y.size(); ++k) ws.y_dropped[k] *= mask[k];
  }
  ws.hidden_pre.resize(p.hidden.out());
  dense_forward(p.hidden, ws.y_dropped, ws.hidden_pre);
  ws.hidden_act.resize(ws.hidden_pre.size());
  for (std::size_t k = 0; k < ws.hidden_pre.size(); ++k) ws.hidden_act[k] = std::tanh(ws.hidden_pre[k]);
  ws.logits.resize(p.output.out());
  dense_forward(p.output, ws.hidden_act, ws.logits);
  ws.probs = softmax(ws.logits);
  return ws.probs[1];
}

double stage1_instance_gradient(const Stage1Params& p, const Stage1Instance& instance,
                                double weight, const double* mask, Stage1Workspace& ws,
                                Stage1Gradient& grad) {
  const double prob = stage1_forward(p, instance.window, mask, ws);
  const double loss = weight * cross_entropy(prob, instance.label);

  const std::size_t hn = p.positive.hidden();
  std::vector<double> dlogits(2);
  dlogits[0] = weight * (ws.probs[0] - (instance.label == 0 ? 1.0 : 0.0));
  dlogits[1] = weight * (ws.probs[1] - (instance.label == 1 ? 1.0 : 0.0));

  ws.dhidden.assign(p.hidden.out(), 0.0);
  dense_backward(p.output, ws.hidden_act, dlogits, grad.dense.output, ws.dhidden);
  for (std::size_t k = 0; k < ws.dhidden.size(); ++k) {
    ws.dhidden[k] *= 1.0 - ws.hidden_act[k] * ws.hidden_act[k];
  }
  ws.dy.assign(2 * hn, 0.0);
  dense_backward(p.hidden, ws.y_dropped, ws.dhidden, grad.dense.hidden, ws.dy);
  if (mask != nullptr) {
    for (std::size_t k = 0; k < ws.dy.size(); ++k) ws.dy[k] *= mask[k];
  }
  const std::vector<double> dy = ws.dy;
  backprop_direction(p, p.negative, grad.dense.negative, instance.window.post, true, ws.neg_steps,
                     ws.neg_inputs, std::span<const double>(dy.data() + hn, hn), ws, grad);
  backprop_direction(p, p.positive, grad.dense.positive, instance.window.pre, false, ws.pos_steps,
                     ws.pos_inputs, std::span<const double>(dy.data(), hn), ws, grad);
  return loss;
}

// ---------------------------------------------------------------------------
// Stage-2

double refine_forward(const RefineParams& p, std::span<const double> x) {
  std::vector<double> pre(p.hidden.out());
  dense_forward(p.hidden, x, pre);
  for (auto& v : pre) v = std::tanh(v);
  double logit = 0.0;
  dense_forward(p.output, pre, std::span<double>(&logit, 1));
  return sigmoid(logit);
}

double refine_instance_gradient(const RefineParams& p, const RefineInput& in, double weight,
                                RefineParams& grad) {
  std::vector<double> act(p.hidden.out());
  dense_forward(p.hidden, in.x, act);
  for (auto& v : act) v = std::tanh(v);
  double logit = 0.0;
  dense_forward(p.output, act, std::span<double>(&logit, 1));
  const double prob = sigmoid(logit);
  const double dlogit = weight * (prob - static_cast<double>(in.label));
  std::vector<double> dact(act.size(), 0.0);
  dense_backward(p.output, act, std::span<const double>(&dlogit, 1), grad.output, dact);
  for (std::size_t k = 0; k < act.size(); ++k) dact[k] *= 1.0 - act[k] * act[k];
  dense_backward(p.hidden, in.x, dact, grad.hidden, {});
  return weight * cross_entropy(prob, in.label);
}

std::array<double, kRefineInputs> refine_inputs(double p_init, const RefinementFeatures& f) {
  return {p_init, f.position, f.capitalized, f.frequency, f.dc};
}

// ---------------------------------------------------------------------------
// Training

namespace {

// The kernels agree bit for bit; with one thread the serial one is faster.
bool want_parallel(const ModelConfig& config) {
  return config.parallel && parallel_kernels_available() && parallel_thread_count() > 1;
}

std::vector<const Matrix*> const_view(const ParamList& list) {
  std::vector<const Matrix*> out;
  out.reserve(list.size());
  for (const auto& [name, m] : list) out.push_back(m);
  return out;
}

}  // namespace

Stage1Model train_stage1(const Corpus& train, const ModelConfig& config,
                         const EpochCallback& on_epoch) {
  config.validate();
  Stage1Model model;
  model.encoder = InputEncoder::build(config, train);
  model.params = Stage1Params(config, model.encoder.input_size());
  const Rng master(config.seed);
  Rng init = master.derive("stage1-init");
  model.params.init(init);

  const auto instances = stage1_instances(train, model.encoder, config.window);
  if (instances.empty()) throw Error("training corpus has no candidates");

  Stage1Params grad(config, model.encoder.input_size());
  ParamList params = model.params.params();
  ParamList grad_list = grad.params();
  const auto grads = const_view(grad_list);
  OptimizerState opt = make_optimizer(params, config.optimizer());

  const BatchSpec spec{config.dropout, config.positive_weight};
  const bool use_parallel = want_parallel(config);
  const Rng shuffle_stream = master.derive("stage1-shuffle");
  const Rng dropout_stream = master.derive("stage1-dropout");
  const std::size_t n = instances.size();
  const auto batch = static_cast<std::size_t>(config.batch_size);

  std::vector<std::size_t> order(n);
  std::vector<BatchItem> items;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffler = shuffle_stream.derive(static_cast<std::uint64_t>(epoch));
    shuffler.shuffle(order.begin(), order.end());
    const Rng epoch_masks = dropout_stream.derive(static_cast<std::uint64_t>(epoch));

    double total = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      items.clear();
      for (std::size_t k = start; k < end; ++k) {
        items.push_back({order[k], epoch_masks.derive(k).next()});
      }
      const double loss =
          use_parallel ? batch_gradient_parallel(model.params, instances, items, spec, grad)
                       : batch_gradient_serial(model.params, instances, items, spec, grad);
      total += loss;
      const double scale = 1.0 / static_cast<double>(items.size());
      for (auto& [name, m] : grad_list) {
        for (auto& v : m->data) v *= scale;
      }
      rmsprop_step(params, grads, opt);
    }
    const double mean = total / static_cast<double>(n);
    model.loss_trace.push_back(mean);
    if (on_epoch) on_epoch(1, epoch + 1, mean);
  }
  return model;
}

RefineModel train_refine(const Corpus& train, const Stage1Model& stage1, const TrainStats& stats,
                         const CooccurrenceGraph& graph, const ModelConfig& config,
                         const EpochCallback& on_epoch) {
  config.validate();
  const auto instances = stage1_instances(train, stage1.encoder, config.window);
  if (instances.empty()) throw Error("training corpus has no candidates");
  const auto p_init = want_parallel(config)
                          ? stage1_probabilities_parallel(stage1.params, instances)
                          : stage1_probabilities_serial(stage1.params, instances);

  std::vector<RefineInput> inputs;
  inputs.reserve(instances.size());
  std::size_t k = 0;
  for (const auto& d : train.definitions) {
    for (const auto& c : d.candidates) {
      RefineInput in;
      in.x = refine_inputs(p_init[k++], refinement_features(c, d, stats, graph));
      in.label = d.is_gold(c.position) ? 1 : 0;
      inputs.push_back(in);
    }
  }

  RefineModel model;
  model.params = RefineParams(config.refine_hidden);
  const Rng master(config.seed);
  Rng init = master.derive("stage2-init");
  model.params.init(init);

  RefineParams grad(config.refine_hidden);
  ParamList params = model.params.params();
  ParamList grad_list = grad.params();
  const auto grads = const_view(grad_list);
  RmsPropConfig rms = config.optimizer();
  rms.learning_rate = config.refine_learning_rate;
  OptimizerState opt = make_optimizer(params, rms);

  const Rng shuffle_stream = master.derive("stage2-shuffle");
  const std::size_t n = inputs.size();
  const auto batch = static_cast<std::size_t>(config.batch_size);
  std::vector<std::size_t> order(n);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffler = shuffle_stream.derive(static_cast<std::uint64_t>(epoch));
    shuffler.shuffle(order.begin(), order.end());
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      for (auto& [name, m] : grad_list) m->zero();
      for (std::size_t j = start; j < end; ++j) {
        const auto& in = inputs[order[j]];
        const double w = in.label == 1 ? config.positive_weight : 1.0;
        total += refine_instance_gradient(model.params, in, w, grad);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (auto& [name, m] : grad_list) {
        for (auto& v : m->data) v *= scale;
      }
      rmsprop_step(params, grads, opt);
    }
    const double mean = total / static_cast<double>(n);
    model.loss_trace.push_back(mean);
    if (on_epoch) on_epoch(2, epoch + 1, mean);
  }
  return model;
}

CooccurrenceGraph training_graph(const Corpus& train, const std::vector<TagSet>& extra_tag_sets) {
  auto sets = tag_sets_from(train);
  sets.insert(sets.end(), extra_tag_sets.begin(), extra_tag_sets.end());
  return build_graph(sets, hypernym_map_from(train));
}

ModelParams train_model(const Corpus& train, const CooccurrenceGraph& graph,
                        const ModelConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  ModelParams model;
  model.config = config;
  model.stats = TrainStats::from(train);
  model.graph = graph;
  Stage1Model s1 = train_stage1(train, config, on_epoch);
  if (config.refine) {
    RefineModel s2 = train_refine(train, s1, model.stats, graph, config, on_epoch);
    model.refine = std::move(s2.params);
    model.log.stage2_loss = std::move(s2.loss_trace);
  }
  model.encoder = std::move(s1.encoder);
  model.stage1 = std::move(s1.params);
  model.log.stage1_loss = std::move(s1.loss_trace);
  return model;
}

// ---------------------------------------------------------------------------
// Prediction

std::optional<int> select_candidate(std::span<const CandidateScore> scores, double threshold) {
  if (scores.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    const bool higher = scores[k].p_final > scores[best].p_final;
    const bool tie_earlier =
        scores[k].p_final == scores[best].p_final && scores[k].position < scores[best].position;
    if (higher || tie_earlier) best = k;
  }
  if (scores[best].p_final < threshold) return std::nullopt;
  return scores[best].position;
}

namespace {

Prediction finish_prediction(const Definition& d, const ModelParams& model,
                             std::span<const double> p_init, double threshold) {
  Prediction pred;
  for (std::size_t k = 0; k < d.candidates.size(); ++k) {
    const auto& c = d.candidates[k];
    CandidateScore s{c.position, p_init[k], p_init[k]};
    if (model.refine) {
      const auto x = refine_inputs(p_init[k], refinement_features(c, d, model.stats, model.graph));
      s.p_final = refine_forward(*model.refine, x);
    }
    pred.candidates.push_back(s);
  }
  pred.selected = select_candidate(pred.candidates, threshold);
  return pred;
}

}  // namespace

Prediction predict(const Definition& definition, const ModelParams& model, double threshold) {
  const auto ids = model.encoder.encode(definition);
  Stage1Workspace ws;
  std::vector<double> p_init;
  for (const auto& c : definition.candidates) {
    const auto w = id_window(ids, c.position, model.config.window, model.encoder.pad_id());
    p_init.push_back(stage1_forward(model.stage1, w, nullptr, ws));
  }
  return finish_prediction(definition, model, p_init, threshold);
}

Prediction predict(const Definition& definition, const ModelParams& model) {
  return predict(definition, model, model.config.threshold);
}

std::vector<Prediction> predict_corpus(const Corpus& corpus, const ModelParams& model,
                                       double threshold) {
  const auto instances = stage1_instances(corpus, model.encoder, model.config.window);
  const auto p_init = want_parallel(model.config)
                          ? stage1_probabilities_parallel(model.stage1, instances)
                          : stage1_probabilities_serial(model.stage1, instances);
  std::vector<Prediction> out;
  out.reserve(corpus.definitions.size());
  std::size_t offset = 0;
  for (const auto& d : corpus.definitions) {
    out.push_back(finish_prediction(
        d, model, std::span<const double>(p_init.data() + offset, d.candidates.size()), threshold));
    offset += d.candidates.size();
  }
  return out;
}

}  // namespace defhyper
