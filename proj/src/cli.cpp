#include "defhyper/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "defhyper/baselines.hpp"
#include "defhyper/error.hpp"
#include "defhyper/eval.hpp"
#include "defhyper/model.hpp"
#include "defhyper/synth.hpp"

namespace defhyper {
namespace {

struct UsageError : Error {
  using Error::Error;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  return f;
}

struct ModelFlags {
  std::string mode = "pos";
  ModelConfig config;
  bool no_refine = false;
  bool serial = false;
  CLI::Option* topk = nullptr;

  void add_to(CLI::App* app) {
    app->add_option("--mode", mode, "pos | word | hybrid-embed | hybrid-onehot")
        ->check(CLI::IsMember({"pos", "word", "hybrid-embed", "hybrid-onehot"}));
    app->add_option("--window", config.window, "context window L");
    app->add_option("--hidden", config.hidden, "GRU hidden size H");
    topk = app->add_option("--topk", config.topk, "top-K words kept (hybrid), vocabulary cap (word)");
    app->add_option("--embedding-dim", config.embedding_dim);
    app->add_option("--min-count", config.min_word_count, "word mode: rarer words become UNK");
    app->add_option("--epochs", config.epochs);
    app->add_option("--batch", config.batch_size);
    app->add_option("--lr", config.learning_rate);
    app->add_option("--dropout", config.dropout);
    app->add_option("--seed", config.seed);
    app->add_option("--threshold", config.threshold, "abstention threshold");
    app->add_option("--positive-weight", config.positive_weight);
    app->add_flag("--no-refine", no_refine, "train stage 1 only");
    app->add_flag("--serial", serial, "disable the parallel batch kernel");
  }

  ModelConfig resolve() const {
    ModelConfig c = config;
    c.mode = mode_from_name(mode);
    c.refine = !no_refine;
    c.parallel = !serial;
    if ((c.mode == Mode::HybridEmbed || c.mode == Mode::HybridOneHot) && topk->count() == 0) {
      throw UsageError("--mode " + mode + " requires --topk");
    }
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

struct SplitFlags {
  double train_frac = 0.0;
  std::uint64_t split_seed = 42;

  void add_to(CLI::App* app, const char* what) {
    app->add_option("--train-frac", train_frac, what);
    app->add_option("--split-seed", split_seed, "seed of the train/test shuffle");
  }
};

Corpus load_annotated(const std::string& path, std::ostream& err) {
  auto r = load_corpus_file(path);
  if (!r.rejected.empty()) {
    err << "warning: " << r.rejected.size() << " record(s) of " << path << " rejected\n";
  }
  return std::move(r.corpus);
}

std::string join_gold(const Definition& d) {
  std::string s;
  for (int g : d.gold) {
    if (!s.empty()) s += '|';
    s += d.word_at(g);
  }
  return s.empty() ? "-" : s;
}

// Scores a corpus with either kind of model file.
struct AnyModel {
  std::optional<ModelParams> neural;
  std::optional<BaselinePipeline> baseline;

  static AnyModel load(const std::string& path) {
    AnyModel m;
    if (model_file_kind(path) == "neural") {
      m.neural = load_model(path);
    } else {
      m.baseline = load_baseline(path);
    }
    return m;
  }

  double default_threshold() const {
    return neural ? neural->config.threshold : baseline->threshold;
  }

  std::vector<Prediction> predict_all(const Corpus& c, double threshold) const {
    if (neural) return predict_corpus(c, *neural, threshold);
    std::vector<Prediction> out;
    for (const auto& d : c.definitions) out.push_back(predict_baseline(d, *baseline, threshold));
    return out;
  }

  Prediction predict_one(const Definition& d, double threshold) const {
    return neural ? predict(d, *neural, threshold) : predict_baseline(d, *baseline, threshold);
  }
};

void write_loss_csv(const std::string& path, const TrainingLog& log) {
  auto f = open_out(path);
  f << "stage,epoch,loss\n";
  for (std::size_t e = 0; e < log.stage1_loss.size(); ++e) {
    f << "1," << e + 1 << ',' << format_fixed(log.stage1_loss[e], 6) << '\n';
  }
  for (std::size_t e = 0; e < log.stage2_loss.size(); ++e) {
    f << "2," << e + 1 << ',' << format_fixed(log.stage2_loss[e], 6) << '\n';
  }
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad sweep value '" + item + "'");
    }
  }
  if (v.empty()) throw UsageError("--values is empty");
  return v;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const CliEnvironment& env) {
  CLI::App app{"Hypernym extraction from definition sentences"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic annotated corpus");
  SynthConfig synth_config;
  std::string synth_out;
  std::uint64_t synth_seed = 42;
  synth->add_option("--output,-o", synth_out)->required();
  synth->add_option("--records", synth_config.records);
  synth->add_option("--vocabulary", synth_config.vocabulary);
  synth->add_option("--zipf", synth_config.zipf_exponent);
  synth->add_option("--singleton-fraction", synth_config.singleton_fraction);
  synth->add_option("--misleading", synth_config.misleading_fraction);
  synth->add_option("--hypernym-pool", synth_config.hypernym_pool);
  synth->add_option("--partners", synth_config.partners);
  synth->add_option("--seed", synth_seed);

  // prepare
  auto* prepare = app.add_subcommand("prepare", "preprocess raw JSONL into a corpus");
  std::string prep_in, prep_out, prep_report;
  bool allow_unannotated = false;
  prepare->add_option("--input,-i", prep_in)->required();
  prepare->add_option("--output,-o", prep_out)->required();
  prepare->add_option("--rejects", prep_report, "rejection report (default <output>.rejected.txt)");
  prepare->add_flag("--allow-unannotated", allow_unannotated, "keep records without gold");

  // train
  auto* train = app.add_subcommand("train", "train the two-stage model");
  std::string train_corpus, train_out, train_loss, train_tagsets;
  ModelFlags train_flags;
  SplitFlags train_split;
  train->add_option("--corpus,-c", train_corpus)->required();
  train->add_option("--output,-o", train_out)->required();
  train->add_option("--loss-csv", train_loss, "per-epoch loss (default <output>.loss.csv)");
  train->add_option("--tag-sets", train_tagsets, "extra co-occurrence groups for the graph");
  train_flags.add_to(train);
  train_split.add_to(train, "train on this share of a seeded split (0 = whole corpus)");

  // eval
  auto* evalc = app.add_subcommand("eval", "score a model on a corpus");
  std::string eval_model, eval_corpus, eval_metrics, eval_tsv;
  std::optional<double> eval_threshold;
  SplitFlags eval_split;
  evalc->add_option("--model,-m", eval_model)->required();
  evalc->add_option("--corpus,-c", eval_corpus)->required();
  evalc->add_option("--threshold", eval_threshold);
  evalc->add_option("--metrics-csv", eval_metrics);
  evalc->add_option("--predictions", eval_tsv, "per-definition TSV");
  eval_split.add_to(evalc, "evaluate on the held-out part of the same seeded split");

  // predict
  auto* pred = app.add_subcommand("predict", "extract the hypernym of one sentence");
  std::string pred_model, pred_sentence, pred_tags, pred_term;
  std::optional<double> pred_threshold;
  pred->add_option("--model,-m", pred_model)->required();
  pred->add_option("--sentence,-s", pred_sentence, "default: read standard input");
  pred->add_option("--tags", pred_tags, "space-separated Penn tags (default: fallback tagger)");
  pred->add_option("--term", pred_term, "defined term (default: first token)");
  pred->add_option("--threshold", pred_threshold);

  // stats
  auto* stats = app.add_subcommand("stats", "PoS neighbour statistics of candidate nouns");
  std::string stats_corpus, stats_out, stats_part = "train";
  SplitFlags stats_split;
  stats_split.train_frac = 0.8;
  stats->add_option("--corpus,-c", stats_corpus)->required();
  stats->add_option("--output,-o", stats_out);
  stats->add_option("--part", stats_part)->check(CLI::IsMember({"train", "test", "all"}));
  stats_split.add_to(stats, "split used for --part train/test");

  // sweep
  auto* sweepc = app.add_subcommand("sweep", "train/evaluate over one hyperparameter");
  std::string sweep_corpus, sweep_axis, sweep_values, sweep_out;
  ModelFlags sweep_flags;
  SplitFlags sweep_split;
  sweep_split.train_frac = 0.8;
  sweepc->add_option("--corpus,-c", sweep_corpus)->required();
  sweepc->add_option("--axis", sweep_axis)->required()->check(
      CLI::IsMember({"window", "hidden", "train-ratio"}));
  sweepc->add_option("--values", sweep_values, "comma-separated")->required();
  sweepc->add_option("--output,-o", sweep_out);
  sweep_flags.add_to(sweepc);
  sweep_split.add_to(sweepc, "train share for window/hidden sweeps");

  // baseline
  auto* base = app.add_subcommand("baseline", "train a traditional classifier");
  std::string base_kind, base_corpus, base_out;
  int base_window = 3;
  double base_threshold = 0.5;
  SplitFlags base_split;
  base->add_option("--kind", base_kind)->required()->check(
      CLI::IsMember({"naive-bayes", "softmax-regression", "decision-tree"}));
  base->add_option("--corpus,-c", base_corpus)->required();
  base->add_option("--output,-o", base_out)->required();
  base->add_option("--window", base_window);
  base->add_option("--threshold", base_threshold);
  base_split.add_to(base, "train on this share of a seeded split (0 = whole corpus)");

  // fetch-so
  auto* fetch = app.add_subcommand("fetch-so", "fetch Stack Overflow tag-wiki excerpts");
  std::string fetch_tags, fetch_out, fetch_cache;
  bool fetch_offline = false, fetch_annotate = false;
  fetch->add_option("--tags", fetch_tags, "tag list, one co-listed group per line")->required();
  fetch->add_option("--output,-o", fetch_out)->required();
  fetch->add_option("--cache-dir", fetch_cache, "default $DEFHYPER_CACHE or .defhyper-cache");
  fetch->add_flag("--offline", fetch_offline, "serve from the cache only");
  fetch->add_flag("--annotate-pattern", fetch_annotate,
                  "pre-fill gold with the first noun after 'is a/an/the' (heuristic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      const Corpus c = synth_generate(synth_config, synth_seed);
      auto f = open_out(synth_out);
      write_corpus(c, f);
      out << "wrote " << c.definitions.size() << " definitions to " << synth_out << '\n';
      return 0;
    }

    if (*prepare) {
      ParseOptions opts;
      opts.require_gold = !allow_unannotated;
      const auto r = load_corpus_file(prep_in, opts);
      {
        auto f = open_out(prep_out);
        write_corpus(r.corpus, f);
      }
      const std::string report = prep_report.empty() ? prep_out + ".rejected.txt" : prep_report;
      {
        auto f = open_out(report);
        for (const auto& rej : r.rejected) f << "line " << rej.line << ": " << rej.reason << '\n';
      }
      if (r.lines_read == 0) err << "warning: " << prep_in << " contains no records\n";
      out << "loaded " << r.corpus.definitions.size() << ", rejected " << r.rejected.size() << '\n';
      return 0;
    }

    if (*train) {
      const ModelConfig config = train_flags.resolve();
      Corpus corpus = load_annotated(train_corpus, err);
      if (train_split.train_frac > 0.0) {
        corpus = split(corpus, train_split.train_frac, train_split.split_seed).first;
      }
      std::vector<TagSet> extra;
      if (!train_tagsets.empty()) extra = read_tag_sets_file(train_tagsets);
      const auto graph = training_graph(corpus, extra);
      const auto model = train_model(corpus, graph, config);
      save_model(model, train_out);
      write_loss_csv(train_loss.empty() ? train_out + ".loss.csv" : train_loss, model.log);
      out << "trained on " << corpus.definitions.size() << " definitions; final loss "
          << format_fixed(model.log.stage1_loss.back(), 6) << '\n';
      return 0;
    }

    if (*evalc) {
      const AnyModel model = AnyModel::load(eval_model);
      Corpus corpus = load_annotated(eval_corpus, err);
      if (eval_split.train_frac > 0.0) {
        corpus = split(corpus, eval_split.train_frac, eval_split.split_seed).second;
      }
      const double threshold = eval_threshold.value_or(model.default_threshold());
      if (!(threshold >= 0.0 && threshold <= 1.0)) throw UsageError("--threshold must lie in [0,1]");
      const auto preds = model.predict_all(corpus, threshold);
      const Metrics m = score(preds, corpus.definitions);
      if (!eval_metrics.empty()) {
        auto f = open_out(eval_metrics);
        const SweepRow row{threshold, m, {}};
        write_metrics_csv(f, std::span(&row, 1));
      }
      if (!eval_tsv.empty()) {
        auto f = open_out(eval_tsv);
        f << "term\tpredicted\tgold\tcorrect\n";
        for (std::size_t k = 0; k < preds.size(); ++k) {
          const auto& d = corpus.definitions[k];
          const auto& sel = preds[k].selected;
          f << d.term << '\t' << (sel ? d.word_at(*sel) : "-") << '\t' << join_gold(d) << '\t'
            << (sel && d.is_gold(*sel) ? 1 : 0) << '\n';
        }
      }
      out << "definitions " << corpus.definitions.size() << "  predicted " << m.predicted
          << "  correct " << m.correct << '\n'
          << "precision " << format_fixed(m.precision) << "  recall " << format_fixed(m.recall)
          << "  f1 " << format_fixed(m.f1) << '\n';
      return 0;
    }

    if (*pred) {
      const AnyModel model = AnyModel::load(pred_model);
      std::string sentence = pred_sentence;
      if (sentence.empty()) {
        std::istream& in = env.in ? *env.in : std::cin;
        std::getline(in, sentence);
      }
      const auto tokens = tokenize_excerpt(sentence);
      if (tokens.empty()) throw UsageError("empty sentence");
      std::vector<std::string> tags;
      if (!pred_tags.empty()) {
        std::istringstream ts(pred_tags);
        for (std::string t; ts >> t;) tags.push_back(t);
        if (tags.size() != tokens.size()) throw UsageError("--tags and sentence differ in length");
      } else {
        tags = fallback_tag(tokens);
      }
      std::vector<RawToken> raw;
      for (std::size_t k = 0; k < tokens.size(); ++k) raw.push_back({tokens[k], tags[k]});
      ParseOptions opts;
      opts.require_gold = false;
      const Definition d =
          build_definition(pred_term.empty() ? tokens.front() : pred_term, raw, 0, {}, {}, opts);
      const auto p = model.predict_one(d, pred_threshold.value_or(model.default_threshold()));
      out << "position\tword\tp_init\tp_final\n";
      for (const auto& c : p.candidates) {
        out << c.position << '\t' << d.word_at(c.position) << '\t' << format_fixed(c.p_init) << '\t'
            << format_fixed(c.p_final) << '\n';
      }
      out << "selected\t" << (p.selected ? d.word_at(*p.selected) : "none") << '\n';
      return 0;
    }

    if (*stats) {
      Corpus corpus = load_annotated(stats_corpus, err);
      if (stats_part != "all") {
        auto parts = split(corpus, stats_split.train_frac, stats_split.split_seed);
        corpus = stats_part == "train" ? std::move(parts.first) : std::move(parts.second);
      }
      const auto table = pos_position_stats(corpus);
      if (stats_out.empty()) {
        write_position_csv(out, table);
      } else {
        auto f = open_out(stats_out);
        write_position_csv(f, table);
      }
      return 0;
    }

    if (*sweepc) {
      const ModelConfig config = sweep_flags.resolve();
      const auto values = parse_values(sweep_values);
      const Corpus corpus = load_annotated(sweep_corpus, err);
      const auto rows = sweep(axis_from_name(sweep_axis), values, config, corpus,
                              {sweep_split.train_frac, sweep_split.split_seed});
      bool all_ok = true;
      for (const auto& r : rows) {
        if (!r.metrics) {
          err << "warning: cell " << format_fixed(r.value) << " failed: " << r.error << '\n';
          all_ok = false;
        }
      }
      if (sweep_out.empty()) {
        write_metrics_csv(out, rows);
      } else {
        auto f = open_out(sweep_out);
        write_metrics_csv(f, rows);
      }
      return all_ok ? 0 : 1;
    }

    if (*base) {
      if (!(base_threshold >= 0.0 && base_threshold <= 1.0)) {
        throw UsageError("--threshold must lie in [0,1]");
      }
      if (base_window < 1) throw UsageError("--window must be >= 1");
      Corpus corpus = load_annotated(base_corpus, err);
      if (base_split.train_frac > 0.0) {
        corpus = split(corpus, base_split.train_frac, base_split.split_seed).first;
      }
      const auto graph = training_graph(corpus);
      const auto p = train_baseline_pipeline(baseline_from_name(base_kind), corpus, graph,
                                             base_window, base_threshold);
      save_baseline(p, base_out);
      out << "trained " << base_kind << " on " << corpus.definitions.size() << " definitions\n";
      return 0;
    }

    if (*fetch) {
      std::ifstream tag_file(fetch_tags);
      if (!tag_file) throw Error("cannot read " + fetch_tags);
      const auto tags = read_tag_list(tag_file);
      FetchOptions opts;
      opts.cache_dir = resolve_cache_dir(fetch_cache);
      opts.offline = fetch_offline;
      opts.annotate_pattern = fetch_annotate;
      const auto report = fetch_tag_wikis(tags, opts, env.transport ? env.transport : https_transport(),
                                          env.sleeper ? env.sleeper : real_sleeper());
      {
        auto f = open_out(fetch_out);
        for (const auto& r : report.records) f << r << '\n';
      }
      for (const auto& w : report.warnings) err << "warning: " << w << '\n';
      out << "records " << report.records.size() << "  requests " << report.requests
          << "  cache hits " << report.cache_hits << '\n';
      return report.quota_exhausted ? 3 : 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace defhyper
