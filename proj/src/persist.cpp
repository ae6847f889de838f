#include <cstdint>

#include "defhyper/error.hpp"
#include "defhyper/model.hpp"
#include "json_io.hpp"

namespace defhyper {
namespace {

using detail::json;

json config_to_json(const ModelConfig& c) {
  json j;
  j["mode"] = std::string(mode_name(c.mode));
  j["window"] = c.window;
  j["hidden"] = c.hidden;
  j["topk"] = c.topk;
  j["embedding_dim"] = c.embedding_dim;
  j["min_word_count"] = c.min_word_count;
  j["dropout"] = c.dropout;
  j["learning_rate"] = c.learning_rate;
  j["decay"] = c.decay;
  j["epsilon"] = c.epsilon;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["seed"] = c.seed;
  j["threshold"] = c.threshold;
  j["refine"] = c.refine;
  j["refine_hidden"] = c.refine_hidden;
  j["refine_learning_rate"] = c.refine_learning_rate;
  j["positive_weight"] = c.positive_weight;
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.mode = mode_from_name(j.at("mode").get<std::string>());
  c.window = j.at("window").get<int>();
  c.hidden = j.at("hidden").get<int>();
  c.topk = j.at("topk").get<int>();
  c.embedding_dim = j.at("embedding_dim").get<int>();
  c.min_word_count = j.at("min_word_count").get<int>();
  c.dropout = j.at("dropout").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.decay = j.at("decay").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.threshold = j.at("threshold").get<double>();
  c.refine = j.at("refine").get<bool>();
  c.refine_hidden = j.at("refine_hidden").get<int>();
  c.refine_learning_rate = j.at("refine_learning_rate").get<double>();
  c.positive_weight = j.at("positive_weight").get<double>();
  c.validate();
  return c;
}

void read_weights(const json& weights, const ParamList& params) {
  for (const auto& [name, m] : params) {
    if (!weights.contains(name)) throw ShapeError("model file lacks weight '" + name + "'");
    detail::matrix_from_json(weights.at(name), *m, name);
  }
}

}  // namespace

std::string model_to_json(const ModelParams& model) {
  json j;
  j["version"] = kModelFormatVersion;
  j["kind"] = "neural";
  j["config"] = config_to_json(model.config);
  json weights = json::object();
  auto& stage1 = const_cast<Stage1Params&>(model.stage1);
  for (const auto& [name, m] : stage1.params()) weights[name] = detail::matrix_to_json(*m);
  if (model.refine) {
    auto& refine = const_cast<RefineParams&>(*model.refine);
    for (const auto& [name, m] : refine.params()) weights[name] = detail::matrix_to_json(*m);
  }
  j["weights"] = std::move(weights);
  j["vocab"] = model.encoder.vocabulary;
  j["graph"] = detail::graph_to_json_value(model.graph);
  j["train_stats"] = detail::stats_to_json(model.stats);
  json meta;
  meta["stage1_loss"] = model.log.stage1_loss;
  meta["stage2_loss"] = model.log.stage2_loss;
  meta["epochs_run"] = model.log.stage1_loss.size();
  meta["final_loss"] = model.log.stage1_loss.empty() ? 0.0 : model.log.stage1_loss.back();
  j["metadata"] = std::move(meta);
  return j.dump();
}

ModelParams model_from_json(std::string_view text) {
  const json j = detail::parse_envelope(text);
  try {
    if (j.value("kind", std::string("neural")) != "neural") {
      throw CorruptFileError("not a neural model file (kind '" + j["kind"].get<std::string>() + "')");
    }
    ModelParams model;
    model.config = config_from_json(j.at("config"));
    model.encoder = InputEncoder::from_vocabulary(model.config.mode,
                                                  j.at("vocab").get<std::vector<std::string>>());
    if (model.config.mode == Mode::Pos && !model.encoder.vocabulary.empty()) {
      throw ShapeError("pos-mode model carries a vocabulary");
    }
    model.stage1 = Stage1Params(model.config, model.encoder.input_size());
    const auto& weights = j.at("weights");
    read_weights(weights, model.stage1.params());
    if (model.config.refine) {
      model.refine = RefineParams(model.config.refine_hidden);
      read_weights(weights, model.refine->params());
    }
    model.graph = detail::graph_from_json_value(j.at("graph"));
    model.stats = detail::stats_from_json(j.at("train_stats"));
    const auto& meta = j.at("metadata");
    model.log.stage1_loss = meta.at("stage1_loss").get<std::vector<double>>();
    model.log.stage2_loss = meta.at("stage2_loss").get<std::vector<double>>();
    return model;
  } catch (const json::exception& e) {
    throw CorruptFileError(std::string("model file is incomplete: ") + e.what());
  }
}

void save_model(const ModelParams& model, const std::string& path) {
  detail::write_file(path, model_to_json(model));
}

ModelParams load_model(const std::string& path) { return model_from_json(detail::read_file(path)); }

}  // namespace defhyper
