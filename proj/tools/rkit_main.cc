// rkit: detect crisis signals in short posts and generate contiguous
// explanation spans for positive detections.
//
// Subcommands: prep, synth, train, detect, explain, train-parser,
// evaluate, visualize.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rkit/checkpoint.h"
#include "rkit/corpus.h"
#include "rkit/depparse.h"
#include "rkit/embed.h"
#include "rkit/eval.h"
#include "rkit/explain.h"
#include "rkit/lime.h"
#include "rkit/linear.h"
#include "rkit/nn.h"
#include "rkit/records.h"
#include "rkit/runconfig.h"
#include "rkit/seeds.h"
#include "rkit/util.h"
#include "rkit/viz.h"

using nlohmann::json;

namespace {

using namespace rkit;

long parse_long(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad integer for " + key + ": '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad number for " + key + ": '" + s + "'");
  }
}

// flag > config file > default
template <typename T>
T eff(const std::optional<T>& flag, const RunConfig& cfg,
      const std::string& key, T def) {
  if (flag) return *flag;
  if (!cfg.has(key)) return def;
  if constexpr (std::is_same_v<T, std::string>) {
    return cfg.get(key);
  } else if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(parse_double(cfg.get(key), key));
  } else {
    return static_cast<T>(parse_long(cfg.get(key), key));
  }
}

std::string required(const std::optional<std::string>& flag,
                     const RunConfig& cfg, const std::string& key) {
  std::string v = eff<std::string>(flag, cfg, key, "");
  if (v.empty())
    throw std::runtime_error("missing required option --" + key);
  return v;
}

std::string meta_line(const std::string& command, const json& config,
                      const std::vector<std::pair<std::string, std::string>>&
                          input_files) {
  json inputs = json::object();
  for (const auto& [name, path] : input_files)
    inputs[name] = to_hex(file_fnv1a(path));
  json meta = {{"tool", "rkit"},
               {"command", command},
               {"config", config},
               {"inputs", inputs}};
  return json{{"_meta", meta}}.dump();
}

std::unique_ptr<Detector> load_detector(const std::string& path) {
  Checkpoint ckpt = read_checkpoint(path);
  std::string kind = ckpt.config.value("kind", "");
  if (kind == "neural") {
    auto [model, vocab] = load_model(path);
    return std::make_unique<NeuralDetector>(std::move(model), std::move(vocab));
  }
  if (kind == "logistic") {
    auto [model, vocab] = load_logistic(path);
    return std::make_unique<LogisticDetector>(std::move(model),
                                              std::move(vocab));
  }
  throw std::runtime_error(path + ": unknown checkpoint kind '" + kind + "'");
}

// ---------------- synth ----------------

struct SynthOpts {
  std::string config_path;
  std::optional<long> n;
  std::optional<double> crisis_rate;
  std::optional<long> seed;
  std::optional<std::string> out;
  std::optional<std::string> emb_out;
  std::optional<long> emb_dim;
};

int cmd_synth(const SynthOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = RunConfig::load_file(o.config_path);
  long n = eff<long>(o.n, cfg, "n", 1000);
  double rate = eff<double>(o.crisis_rate, cfg, "crisis-rate", 0.2);
  long seed = eff<long>(o.seed, cfg, "seed", 1);
  std::string out = required(o.out, cfg, "out");

  std::vector<Post> posts =
      synthesize_corpus(static_cast<int>(n), rate,
                        static_cast<std::uint64_t>(seed));
  json config = {{"n", n}, {"crisis_rate", rate}, {"seed", seed}};
  write_jsonl(posts, out, meta_line("synth", config, {}));
  std::fprintf(stderr, "synth: wrote %zu posts to %s\n", posts.size(),
               out.c_str());

  if (o.emb_out) {
    long dim = eff<long>(o.emb_dim, cfg, "embed-dim", 200);
    std::vector<std::string> words;
    {
      std::vector<Post> dummy(posts);
      Vocabulary v = Vocabulary::build(dummy, 1);
      for (std::size_t i = 2; i < v.tokens().size(); ++i)
        words.push_back(v.tokens()[i]);
    }
    write_random_embeddings(*o.emb_out, words, static_cast<int>(dim),
                            static_cast<std::uint64_t>(seed));
    std::fprintf(stderr, "synth: wrote %zu embedding rows to %s\n",
                 words.size(), o.emb_out->c_str());
  }
  return 0;
}

// ---------------- prep ----------------

struct PrepOpts {
  std::string config_path;
  std::optional<std::string> data;
  std::optional<std::string> out;
  std::optional<std::string> vocab_out;
  std::optional<long> min_count;
};

int cmd_prep(const PrepOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = RunConfig::load_file(o.config_path);
  std::string data = required(o.data, cfg, "data");
  std::string out = required(o.out, cfg, "out");
  long min_count = eff<long>(o.min_count, cfg, "min-count", 1);

  std::vector<Post> posts = load_jsonl(data);
  Vocabulary vocab = Vocabulary::build(posts, static_cast<int>(min_count));

  long labeled = 0, positive = 0, with_expl = 0, tokens = 0, max_tokens = 0;
  for (const Post& p : posts) {
    if (p.label) ++labeled;
    if (p.label && *p.label == 1) ++positive;
    if (p.gold_explanation) ++with_expl;
    tokens += static_cast<long>(p.tokens.size());
    max_tokens = std::max(max_tokens, static_cast<long>(p.tokens.size()));
  }

  json config = {{"data", data}, {"min_count", min_count}};
  json report = {
      {"meta", json::parse(meta_line("prep", config, {{"data", data}}))["_meta"]},
      {"posts", posts.size()},
      {"labeled", labeled},
      {"positive", positive},
      {"with_explanation", with_expl},
      {"vocab_size", vocab.size()},
      {"mean_tokens",
       posts.empty() ? 0.0
                     : static_cast<double>(tokens) /
                           static_cast<double>(posts.size())},
      {"max_tokens", max_tokens}};
  write_file(out, report.dump(2) + "\n");

  if (o.vocab_out) {
    std::string listing;
    for (const std::string& t : vocab.tokens()) listing += t + "\n";
    write_file(*o.vocab_out, listing);
  }
  std::fprintf(stderr, "prep: %zu posts, vocab %zu, report in %s\n",
               posts.size(), vocab.size(), out.c_str());
  return 0;
}

// ---------------- train ----------------

struct TrainOpts {
  std::string config_path;
  std::optional<std::string> model, architecture, data, embeddings, out;
  std::optional<long> embed_dim, hidden, max_len, batch_size, epochs, seed,
      min_count, logistic_epochs, logistic_batch;
  std::optional<double> dropout, attention_l2, lr, val_fraction, logistic_l2,
      logistic_lr;
};

int cmd_train(const TrainOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = RunConfig::load_file(o.config_path);
  std::string model_kind = eff<std::string>(o.model, cfg, "model", "neural");
  std::string data = required(o.data, cfg, "data");
  std::string out = required(o.out, cfg, "out");
  double val_fraction = eff<double>(o.val_fraction, cfg, "val-fraction", 0.1);
  long min_count = eff<long>(o.min_count, cfg, "min-count", 1);
  long seed = eff<long>(o.seed, cfg, "seed", 1);

  std::vector<Post> posts = load_jsonl(data);
  for (const Post& p : posts)
    if (!p.label)
      throw std::runtime_error("train: post " + p.id + " has no label");
  auto [train_posts, val_posts] =
      split(posts, val_fraction, static_cast<std::uint64_t>(seed));
  Vocabulary vocab = Vocabulary::build(train_posts, static_cast<int>(min_count));

  if (model_kind == "neural") {
    std::string embeddings = required(o.embeddings, cfg, "embeddings");
    ModelConfig mc;
    mc.embed_dim = static_cast<int>(eff<long>(o.embed_dim, cfg, "embed-dim", 200));
    mc.hidden = static_cast<int>(eff<long>(o.hidden, cfg, "hidden", 100));
    mc.max_len = static_cast<int>(eff<long>(o.max_len, cfg, "max-len", 150));
    mc.dropout_rate = eff<double>(o.dropout, cfg, "dropout", 0.1);
    mc.attention_l2_lambda =
        eff<double>(o.attention_l2, cfg, "attention-l2", 1e-4);
    mc.learning_rate = eff<double>(o.lr, cfg, "lr", 1e-3);
    mc.batch_size = static_cast<int>(eff<long>(o.batch_size, cfg, "batch-size", 256));
    mc.epochs = static_cast<int>(eff<long>(o.epochs, cfg, "epochs", 20));
    mc.architecture = architecture_from_name(
        eff<std::string>(o.architecture, cfg, "architecture", "bi_attention"));
    mc.rng_seed = static_cast<std::uint64_t>(seed);

    EmbeddingTable table = load_embeddings(embeddings, vocab, mc.embed_dim);
    TrainResult result = train(mc, table, vocab, train_posts, val_posts);

    json config = mc.to_json();
    config["model"] = "neural";
    config["data"] = data;
    config["embeddings"] = embeddings;
    config["val_fraction"] = val_fraction;
    config["min_count"] = min_count;
    json meta = json::parse(meta_line(
        "train", config, {{"data", data}, {"embeddings", embeddings}}))["_meta"];

    json epochs_log = json::array();
    for (const EpochStats& st : result.log)
      epochs_log.push_back({{"epoch", st.epoch},
                            {"train_loss", st.train_loss},
                            {"val_precision", st.val_precision},
                            {"val_recall", st.val_recall},
                            {"val_f1", st.val_f1}});
    json log = {{"meta", meta},
                {"selected_epoch", result.best_epoch},
                {"epochs", epochs_log}};
    write_file(out + ".log.json", log.dump(2) + "\n");
    save_model(result.model, vocab, out, json{{"meta", meta}});
    std::fprintf(stderr, "train: best epoch %d (val F1 %.4f), checkpoint %s\n",
                 result.best_epoch,
                 result.log[static_cast<std::size_t>(result.best_epoch - 1)].val_f1,
                 out.c_str());
    return 0;
  }

  if (model_kind == "logistic") {
    double l2 = eff<double>(o.logistic_l2, cfg, "logistic-l2", 1e-4);
    long epochs = eff<long>(o.logistic_epochs, cfg, "logistic-epochs", 50);
    double lr = eff<double>(o.logistic_lr, cfg, "logistic-lr", 0.5);
    long batch = eff<long>(o.logistic_batch, cfg, "logistic-batch", 64);

    LogisticModel model = train_logistic(
        train_posts, vocab, l2, static_cast<int>(epochs), lr,
        static_cast<std::uint64_t>(seed), static_cast<int>(batch));

    std::vector<std::pair<int, double>> val_pairs;
    for (const Post& p : val_posts)
      val_pairs.emplace_back(*p.label, predict_prob(model, p, vocab));
    DetectionReport rep = detection_report(val_pairs, 0.5);

    json config = {{"model", "logistic"}, {"data", data},
                   {"l2", l2},            {"epochs", epochs},
                   {"lr", lr},            {"batch_size", batch},
                   {"seed", seed},        {"val_fraction", val_fraction},
                   {"min_count", min_count}};
    json meta = json::parse(meta_line("train", config, {{"data", data}}))["_meta"];
    json log = {{"meta", meta},
                {"val", {{"precision", rep.precision},
                         {"recall", rep.recall},
                         {"f1", rep.f1}}}};
    write_file(out + ".log.json", log.dump(2) + "\n");
    save_logistic(model, vocab, out, json{{"meta", meta}});
    std::fprintf(stderr, "train: logistic val F1 %.4f, checkpoint %s\n", rep.f1,
                 out.c_str());
    return 0;
  }

  throw std::runtime_error("unknown model kind: " + model_kind);
}

// ---------------- detect ----------------

struct DetectOpts {
  std::string config_path;
  std::optional<std::string> checkpoint, data, out;
  std::optional<double> threshold;
};

int cmd_detect(const DetectOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = RunConfig::load_file(o.config_path);
  std::string checkpoint = required(o.checkpoint, cfg, "checkpoint");
  std::string data = required(o.data, cfg, "data");
  std::string out = required(o.out, cfg, "out");
  double threshold = eff<double>(o.threshold, cfg, "threshold", 0.5);

  std::unique_ptr<Detector> detector = load_detector(checkpoint);
  std::vector<Post> posts = load_jsonl(data);
  std::vector<DetectionRecord> records;
  records.reserve(posts.size());
  for (const Post& p : posts) {
    DetectionRecord r;
    r.id = p.id;
    r.prob = detector->score_tokens(p.lower_tokens());
    r.predicted_label = r.prob >= threshold ? 1 : 0;
    records.push_back(std::move(r));
  }
  json config = {{"checkpoint", checkpoint},
                 {"data", data},
                 {"threshold", threshold},
                 {"detector", detector->kind()}};
  write_detections(records, out,
                   meta_line("detect", config,
                             {{"checkpoint", checkpoint}, {"data", data}}));
  std::fprintf(stderr, "detect: scored %zu posts to %s\n", records.size(),
               out.c_str());
  return 0;
}

// ---------------- explain ----------------

struct ExplainOpts {
  std::string config_path;
  std::optional<std::string> checkpoint, parser_model, data, out, mechanism,
      policy;
  std::optional<double> threshold, lime_kernel_width, lime_ridge;
  std::optional<long> k, lime_samples, lime_seed;
};

int cmd_explain(const ExplainOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = RunConfig::load_file(o.config_path);
  std::string checkpoint = required(o.checkpoint, cfg, "checkpoint");
  std::string parser_path = required(o.parser_model, cfg, "parser-model");
  std::string data = required(o.data, cfg, "data");
  std::string out = required(o.out, cfg, "out");
  std::string mechanism = eff<std::string>(o.mechanism, cfg, "mechanism", "lime");
  std::string policy_name = eff<std::string>(o.policy, cfg, "policy", "depth");
  double threshold = eff<double>(o.threshold, cfg, "threshold", 0.5);
  long k = eff<long>(o.k, cfg, "k", kDefaultSeedK);

  LimeConfig lime_cfg;
  lime_cfg.num_samples =
      static_cast<int>(eff<long>(o.lime_samples, cfg, "lime-samples", 1000));
  lime_cfg.kernel_width =
      eff<double>(o.lime_kernel_width, cfg, "lime-kernel-width", 0.0);
  lime_cfg.ridge_l2 = eff<double>(o.lime_ridge, cfg, "lime-ridge", 1.0);
  lime_cfg.rng_seed =
      static_cast<std::uint64_t>(eff<long>(o.lime_seed, cfg, "lime-seed", 0));
  lime_cfg.num_features = static_cast<int>(k);

  HighestSeedPolicy policy;
  if (policy_name == "depth") policy = HighestSeedPolicy::kDepth;
  else if (policy_name == "score") policy = HighestSeedPolicy::kScore;
  else throw std::runtime_error("unknown policy: " + policy_name);

  std::unique_ptr<Detector> detector = load_detector(checkpoint);
  auto [parser, tagger] = load_parser(parser_path);
  Seeder seeder = get_seeder(mechanism, *detector, lime_cfg);

  std::vector<Post> posts = load_jsonl(data);
  std::vector<ExplanationRecord> records;
  records.reserve(posts.size());
  long explained = 0, fallbacks = 0;
  for (const Post& p : posts) {
    ExplanationRecord r;
    r.id = p.id;
    r.mechanism = mechanism;
    r.prob_setup : ;
    r.label_prob = detector->score_tokens(p.lower_tokens());
    r.predicted_label = r.label_prob >= threshold ? 1 : 0;
    if (r.predicted_label == 1 && !p.tokens.empty()) {
      SeedSet seeds = seeder(p, static_cast<int>(k));
      ExplanationSpan span;
      if (seeds.empty()) {
        span = fallback_explanation(p, *detector);
        ++fallbacks;
      } else {
        std::vector<DepTree> trees;
        for (int s = 0; s < p.num_sentences(); ++s) {
          auto [lo, hi] = p.sentence_range(s);
          std::vector<std::string> forms;
          for (int t = lo; t < hi; ++t)
            forms.push_back(p.tokens[static_cast<std::size_t>(t)].surface);
          trees.push_back(parse_sentence(parser, tagger, forms));
        }
        span = generate_explanation(p, seeds, trees, policy);
      }
      r.explanation_text = span.text;
      r.token_start = span.start;
      r.token_end = span.end;
      r.sentence_index = span.sentence_index;
      r.fallback = span.fallback;
      ++explained;
    }
    records.push_back(std::move(r));
  }

  json config = {{"checkpoint", checkpoint},
                 {"parser_model", parser_path},
                 {"data", data},
                 {"mechanism", mechanism},
                 {"k", k},
                 {"threshold", threshold},
                 {"policy", policy_name},
                 {"lime_samples", lime_cfg.num_samples},
                 {"lime_kernel_width", lime_cfg.kernel_width},
                 {"lime_ridge", lime_cfg.ridge_l2},
                 {"lime_seed", lime_cfg.rng_seed},
                 {"detector", detector->kind()}};
  write_explanations(records, out,
                     meta_line("explain", config,
                               {{"checkpoint", checkpoint},
                                {"parser_model", parser_path},
                                {"data", data}}));
  std::fprintf(stderr,
               "explain: %ld positive detections explained (%ld fallback) of "
               "%zu posts, output %s\n",
               explained, fallbacks, posts.size(), out.c_str());
  return 0;
}

// ---------------- train-parser ----------------

struct TrainParserOpts {
  std::string config_path;
  std::optional<std::string> treebank, out;
  std::optional<long> iterations, seed, synth_sentences, heldout;
};

int cmd_train_parser(const TrainParserOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = RunConfig::load_file(o.config_path);
  std::string out = required(o.out, cfg, "out");
  long iterations = eff<long>(o.iterations, cfg, "iterations", 5);
  long seed = eff<long>(o.seed, cfg, "seed", 1);
  long heldout = eff<long>(o.heldout, cfg, "heldout", 0);
  std::string treebank = eff<std::string>(o.treebank, cfg, "treebank", "");
  long synth_sentences =
      eff<long>(o.synth_sentences, cfg, "synth-sentences", 0);

  std::vector<DepTree> trees;
  std::vector<std::pair<std::string, std::string>> inputs;
  if (!treebank.empty()) {
    trees = read_conllu(treebank);
    inputs.emplace_back("treebank", treebank);
  } else {
    if (synth_sentences <= 0) synth_sentences = 1200;
    trees = synthesize_treebank(static_cast<int>(synth_sentences),
                                static_cast<std::uint64_t>(seed));
  }
  if (static_cast<long>(trees.size()) <= heldout)
    throw std::runtime_error("train-parser: not enough sentences");

  std::vector<DepTree> train_trees(trees.begin(),
                                   trees.end() - static_cast<long>(heldout));
  std::vector<DepTree> held(trees.end() - static_cast<long>(heldout),
                            trees.end());

  TaggerModel tagger = train_tagger(train_trees, static_cast<int>(iterations),
                                    static_cast<std::uint64_t>(seed));
  ParserModel parser = train_parser(train_trees, static_cast<int>(iterations),
                                    static_cast<std::uint64_t>(seed) + 1);

  json config = {{"treebank", treebank},
                 {"synth_sentences", treebank.empty() ? synth_sentences : 0},
                 {"iterations", iterations},
                 {"seed", seed},
                 {"heldout", heldout},
                 {"train_sentences", train_trees.size()},
                 {"dropped_nonprojective", parser.dropped_nonprojective}};
  if (!held.empty()) {
    double uas = parser_uas(parser, tagger, held);
    config["heldout_uas"] = uas;
    std::fprintf(stderr, "train-parser: held-out UAS %.4f on %zu sentences\n",
                 uas, held.size());
  }
  json meta = json::parse(meta_line("train-parser", config, inputs))["_meta"];
  save_parser(parser, tagger, out, json{{"meta", meta}});
  std::fprintf(stderr, "train-parser: %zu sentences, checkpoint %s\n",
               train_trees.size(), out.c_str());
  return 0;
}

// ---------------- evaluate ----------------

struct EvaluateOpts {
  std::string config_path;
  std::string kind;
  std::optional<std::string> gold, pred, out;
  std::optional<double> threshold;
};

int cmd_evaluate(const EvaluateOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = RunConfig::load_file(o.config_path);
  std::string gold_path = required(o.gold, cfg, "data");
  std::string pred_path = required(o.pred, cfg, "checkpoint");
  std::string out = required(o.out, cfg, "out");

  std::vector<Post> gold = load_jsonl(gold_path);

  if (o.kind == "detection") {
    double threshold = eff<double>(o.threshold, cfg, "threshold", 0.5);
    std::vector<DetectionRecord> preds = load_detections(pred_path);
    std::map<std::string, double> by_id;
    for (const DetectionRecord& r : preds) by_id[r.id] = r.prob;

    std::vector<std::string> missing;
    std::vector<std::pair<int, double>> pairs;
    long matched = 0;
    for (const Post& p : gold) {
      if (!p.label) continue;
      auto it = by_id.find(p.id);
      if (it == by_id.end()) {
        missing.push_back(p.id);
        continue;
      }
      pairs.emplace_back(*p.label, it->second);
      ++matched;
    }
    if (matched == 0)
      throw std::runtime_error("evaluate: no overlapping ids between gold and "
                               "predictions");
    if (!missing.empty()) {
      std::string msg = "evaluate: missing predictions for ids:";
      for (const std::string& id : missing) msg += " " + id;
      throw std::runtime_error(msg);
    }
    DetectionReport rep = detection_report(pairs, threshold);

    json config = {{"kind", "detection"},
                   {"gold", gold_path},
                   {"pred", pred_path},
                   {"threshold", threshold}};
    json meta = json::parse(meta_line(
        "evaluate", config, {{"gold", gold_path}, {"pred", pred_path}}))["_meta"];
    json report = {{"meta", meta},
                   {"tp", rep.tp},
                   {"fp", rep.fp},
                   {"tn", rep.tn},
                   {"fn", rep.fn},
                   {"precision", rep.precision},
                   {"recall", rep.recall},
                   {"f1", rep.f1},
                   {"threshold", rep.threshold}};
    write_file(out, report.dump(2) + "\n");

    char table[512];
    std::snprintf(table, sizeof(table),
                  "%-12s %9s %9s %9s\n%-12s %9.3f %9.3f %9.3f\n",
                  "", "Precision", "Recall", "F1", "detection", rep.precision,
                  rep.recall, rep.f1);
    write_file(out + ".txt", table);
    std::fprintf(stderr, "%s", table);
    return 0;
  }

  if (o.kind == "explanation") {
    std::vector<ExplanationRecord> records = load_explanations(pred_path);
    CorpusRouge r1 = explanation_report(records, gold, 1);
    CorpusRouge r2 = explanation_report(records, gold, 2);

    json config = {{"kind", "explanation"},
                   {"gold", gold_path},
                   {"pred", pred_path}};
    json meta = json::parse(meta_line(
        "evaluate", config, {{"gold", gold_path}, {"pred", pred_path}}))["_meta"];
    json report = {{"meta", meta},
                   {"samples", r1.n_scored},
                   {"rouge1",
                    {{"precision", r1.mean.precision},
                     {"recall", r1.mean.recall},
                     {"f1", r1.mean.f1}}},
                   {"rouge2",
                    {{"precision", r2.mean.precision},
                     {"recall", r2.mean.recall},
                     {"f1", r2.mean.f1}}}};
    write_file(out, report.dump(2) + "\n");

    char table[512];
    std::snprintf(table, sizeof(table),
                  "%-12s %9s %9s %9s\n%-12s %9.3f %9.3f %9.3f\n"
                  "%-12s %9.3f %9.3f %9.3f\n",
                  "", "Precision", "Recall", "F1", "ROUGE-1",
                  r1.mean.precision, r1.mean.recall, r1.mean.f1, "ROUGE-2",
                  r2.mean.precision, r2.mean.recall, r2.mean.f1);
    write_file(out + ".txt", table);
    std::fprintf(stderr, "%s", table);
    return 0;
  }

  throw std::runtime_error("evaluate: kind must be 'detection' or 'explanation'");
}

// ---------------- visualize ----------------

struct VisualizeOpts {
  std::string config_path;
  std::optional<std::string> checkpoint, data, out;
};

int cmd_visualize(const VisualizeOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = RunConfig::load_file(o.config_path);
  std::string checkpoint = required(o.checkpoint, cfg, "checkpoint");
  std::string data = required(o.data, cfg, "data");
  std::string out = required(o.out, cfg, "out");

  std::unique_ptr<Detector> detector = load_detector(checkpoint);
  auto* neural = dynamic_cast<NeuralDetector*>(detector.get());
  if (!neural)
    throw std::runtime_error("visualize: checkpoint is not a neural model");
  std::vector<Post> posts = load_jsonl(data);

  json config = {{"checkpoint", checkpoint}, {"data", data}};
  json meta = json::parse(meta_line(
      "visualize", config, {{"checkpoint", checkpoint}, {"data", data}}))["_meta"];
  write_attention_html(*neural, posts, out, meta.dump());
  std::fprintf(stderr, "visualize: wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crisis detection and explanation toolkit"};
  app.require_subcommand(1);

  SynthOpts synth_opts;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--config", synth_opts.config_path, "key=value config file");
  synth->add_option("--n", synth_opts.n, "number of posts");
  synth->add_option("--crisis-rate", synth_opts.crisis_rate, "crisis rate");
  synth->add_option("--seed", synth_opts.seed, "rng seed");
  synth->add_option("--out", synth_opts.out, "output JSONL");
  synth->add_option("--emb-out", synth_opts.emb_out,
                    "also write a seeded random embedding file");
  synth->add_option("--emb-dim", synth_opts.emb_dim, "embedding dimension");

  PrepOpts prep_opts;
  auto* prep = app.add_subcommand("prep", "validate a dataset, report stats");
  prep->add_option("--config", prep_opts.config_path, "key=value config file");
  prep->add_option("--data", prep_opts.data, "dataset JSONL");
  prep->add_option("--out", prep_opts.out, "report JSON path");
  prep->add_option("--vocab-out", prep_opts.vocab_out, "vocabulary listing");
  prep->add_option("--min-count", prep_opts.min_count, "vocabulary cutoff");

  TrainOpts train_opts;
  auto* train_cmd = app.add_subcommand("train", "train a detector");
  train_cmd->add_option("--config", train_opts.config_path, "config file");
  train_cmd->add_option("--model", train_opts.model, "neural | logistic");
  train_cmd->add_option("--architecture", train_opts.architecture,
                        "bi_attention | forward_last");
  train_cmd->add_option("--data", train_opts.data, "dataset JSONL");
  train_cmd->add_option("--embeddings", train_opts.embeddings,
                        "embedding text file (.gz ok)");
  train_cmd->add_option("--out", train_opts.out, "checkpoint path");
  train_cmd->add_option("--embed-dim", train_opts.embed_dim, "embedding dim");
  train_cmd->add_option("--hidden", train_opts.hidden, "GRU hidden size");
  train_cmd->add_option("--max-len", train_opts.max_len, "padding length");
  train_cmd->add_option("--dropout", train_opts.dropout, "dropout rate");
  train_cmd->add_option("--attention-l2", train_opts.attention_l2,
                        "attention L2 penalty lambda");
  train_cmd->add_option("--lr", train_opts.lr, "learning rate");
  train_cmd->add_option("--batch-size", train_opts.batch_size, "batch size");
  train_cmd->add_option("--epochs", train_opts.epochs, "training epochs");
  train_cmd->add_option("--seed", train_opts.seed, "rng seed");
  train_cmd->add_option("--val-fraction", train_opts.val_fraction,
                        "validation fraction");
  train_cmd->add_option("--min-count", train_opts.min_count, "vocab cutoff");
  train_cmd->add_option("--logistic-l2", train_opts.logistic_l2,
                        "logistic L2 strength");
  train_cmd->add_option("--logistic-epochs", train_opts.logistic_epochs,
                        "logistic epochs");
  train_cmd->add_option("--logistic-lr", train_opts.logistic_lr, "logistic lr");
  train_cmd->add_option("--logistic-batch", train_opts.logistic_batch,
                        "logistic batch size");

  DetectOpts detect_opts;
  auto* detect = app.add_subcommand("detect", "score posts with a checkpoint");
  detect->add_option("--config", detect_opts.config_path, "config file");
  detect->add_option("--checkpoint", detect_opts.checkpoint, "model checkpoint");
  detect->add_option("--data", detect_opts.data, "dataset JSONL");
  detect->add_option("--out", detect_opts.out, "detections JSONL");
  detect->add_option("--threshold", detect_opts.threshold, "decision threshold");

  ExplainOpts explain_opts;
  auto* explain = app.add_subcommand("explain", "generate explanation spans");
  explain->add_option("--config", explain_opts.config_path, "config file");
  explain->add_option("--checkpoint", explain_opts.checkpoint, "model checkpoint");
  explain->add_option("--parser-model", explain_opts.parser_model,
                      "parser checkpoint (train-parser output)");
  explain->add_option("--data", explain_opts.data, "dataset JSONL");
  explain->add_option("--out", explain_opts.out, "explanations JSONL");
  explain->add_option("--mechanism", explain_opts.mechanism,
                      "coef | attention | lime");
  explain->add_option("--k", explain_opts.k, "seed words per post");
  explain->add_option("--threshold", explain_opts.threshold, "detection threshold");
  explain->add_option("--policy", explain_opts.policy,
                      "highest-seed policy: depth | score");
  explain->add_option("--lime-samples", explain_opts.lime_samples,
                      "LIME perturbation samples");
  explain->add_option("--lime-kernel-width", explain_opts.lime_kernel_width,
                      "LIME kernel width (0 = auto)");
  explain->add_option("--lime-ridge", explain_opts.lime_ridge,
                      "LIME ridge strength");
  explain->add_option("--lime-seed", explain_opts.lime_seed, "LIME rng seed");

  TrainParserOpts tp_opts;
  auto* tp = app.add_subcommand("train-parser",
                                "train the tagger and dependency parser");
  tp->add_option("--config", tp_opts.config_path, "config file");
  tp->add_option("--treebank", tp_opts.treebank, "CoNLL-U treebank");
  tp->add_option("--synth-sentences", tp_opts.synth_sentences,
                 "synthesize this many sentences instead of reading a treebank");
  tp->add_option("--iterations", tp_opts.iterations, "perceptron iterations");
  tp->add_option("--seed", tp_opts.seed, "rng seed");
  tp->add_option("--heldout", tp_opts.heldout, "held-out sentences for UAS");
  tp->add_option("--out", tp_opts.out, "parser checkpoint path");

  EvaluateOpts eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "score detections or explanations");
  evaluate->add_option("--config", eval_opts.config_path, "config file");
  evaluate->add_option("kind", eval_opts.kind, "detection | explanation")
      ->required();
  evaluate->add_option("--gold", eval_opts.gold, "gold dataset JSONL");
  evaluate->add_option("--pred", eval_opts.pred, "predictions JSONL");
  evaluate->add_option("--out", eval_opts.out, "report JSON path");
  evaluate->add_option("--threshold", eval_opts.threshold, "decision threshold");

  VisualizeOpts viz_opts;
  auto* visualize = app.add_subcommand("visualize", "attention heatmap HTML");
  visualize->add_option("--config", viz_opts.config_path, "config file");
  visualize->add_option("--checkpoint", viz_opts.checkpoint, "neural checkpoint");
  visualize->add_option("--data", viz_opts.data, "dataset JSONL");
  visualize->add_option("--out", viz_opts.out, "output HTML path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_opts);
    if (prep->parsed()) return cmd_prep(prep_opts);
    if (train_cmd->parsed()) return cmd_train(train_opts);
    if (detect->parsed()) return cmd_detect(detect_opts);
    if (explain->parsed()) return cmd_explain(explain_opts);
    if (tp->parsed()) return cmd_train_parser(tp_opts);
    if (evaluate->parsed()) return cmd_evaluate(eval_opts);
    if (visualize->parsed()) return cmd_visualize(viz_opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rkit: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
