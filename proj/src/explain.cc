#include "rkit/explain.h"

#include <algorithm>

namespace rkit {

namespace {

int node_depth(const DepTree& tree, int node) {
  int depth = 0, v = node;
  while (tree.heads[static_cast<std::size_t>(v)] >= 0) {
    v = tree.heads[static_cast<std::size_t>(v)];
    ++depth;
    if (depth > tree.size())
      throw std::runtime_error("cycle while computing node depth");
  }
  return depth;
}

bool is_verbal(const std::string& upos) {
  return upos == "VERB" || upos == "AUX";
}

ExplanationSpan sentence_span(const Post& post, int sentence) {
  auto [lo, hi] = post.sentence_range(sentence);
  ExplanationSpan span;
  span.sentence_index = sentence;
  span.start = lo;
  span.end = hi;
  span.chosen_node = lo;
  std::vector<std::string> toks;
  for (int t = lo; t < hi; ++t)
    toks.push_back(post.tokens[static_cast<std::size_t>(t)].surface);
  span.text = detokenize(toks);
  span.fallback = true;
  return span;
}

}  // namespace

ExplanationSpan generate_explanation(const Post& post, const SeedSet& seed_set,
                                     const std::vector<DepTree>& trees,
                                     HighestSeedPolicy policy) {
  if (seed_set.empty())
    throw std::runtime_error(
        "generate_explanation: empty seed set, use fallback_explanation");
  const int n_sents = post.num_sentences();
  if (static_cast<int>(trees.size()) != n_sents)
    throw std::runtime_error("generate_explanation: need one tree per sentence");
  for (int s = 0; s < n_sents; ++s) {
    auto [lo, hi] = post.sentence_range(s);
    if (trees[static_cast<std::size_t>(s)].size() != hi - lo)
      throw std::runtime_error(
          "generate_explanation: tree does not match sentence " +
          std::to_string(s));
    if (!trees[static_cast<std::size_t>(s)].is_projective())
      throw std::runtime_error(
          "generate_explanation: non-projective tree for sentence " +
          std::to_string(s));
  }
  for (const Seed& sd : seed_set.seeds)
    if (sd.position < 0 || sd.position >= static_cast<int>(post.tokens.size()))
      throw std::runtime_error("generate_explanation: seed position out of range");

  // 1. sentence with the most seeds; ties go to the sentence holding the
  //    highest-scoring seed, then the earliest sentence
  std::vector<int> count(static_cast<std::size_t>(n_sents), 0);
  for (const Seed& sd : seed_set.seeds)
    ++count[static_cast<std::size_t>(
        post.tokens[static_cast<std::size_t>(sd.position)].sent_index)];
  int max_count = *std::max_element(count.begin(), count.end());
  int sentence = -1;
  double sent_best = 0.0;
  for (const Seed& sd : seed_set.seeds) {
    int s = post.tokens[static_cast<std::size_t>(sd.position)].sent_index;
    if (count[static_cast<std::size_t>(s)] != max_count) continue;
    if (sentence < 0 || sd.score > sent_best) {
      sentence = s;
      sent_best = sd.score;
    } else if (sd.score == sent_best && s < sentence) {
      sentence = s;
    }
  }

  auto [sent_lo, sent_hi] = post.sentence_range(sentence);
  const DepTree& tree = trees[static_cast<std::size_t>(sentence)];

  // 2. highest seed within the sentence
  int chosen_local = -1, chosen_depth = 0;
  double chosen_score = 0.0;
  for (const Seed& sd : seed_set.seeds) {
    if (sd.position < sent_lo || sd.position >= sent_hi) continue;
    int local = sd.position - sent_lo;
    int depth = node_depth(tree, local);
    bool better;
    if (chosen_local < 0) {
      better = true;
    } else if (policy == HighestSeedPolicy::kDepth) {
      better = depth < chosen_depth ||
               (depth == chosen_depth && sd.score > chosen_score) ||
               (depth == chosen_depth && sd.score == chosen_score &&
                local < chosen_local);
    } else {
      better = sd.score > chosen_score ||
               (sd.score == chosen_score && depth < chosen_depth) ||
               (sd.score == chosen_score && depth == chosen_depth &&
                local < chosen_local);
    }
    if (better) {
      chosen_local = local;
      chosen_depth = depth;
      chosen_score = sd.score;
    }
  }

  // 3. promote a non-verb, non-root node to its head, once
  ExplanationSpan span;
  int node = chosen_local;
  if (!is_verbal(tree.upos[static_cast<std::size_t>(node)]) &&
      tree.heads[static_cast<std::size_t>(node)] >= 0) {
    node = tree.heads[static_cast<std::size_t>(node)];
    span.promoted = true;
  }

  // 4. subtree span of the resulting node
  auto [lo, hi] = subtree_span(tree, node);
  span.sentence_index = sentence;
  span.start = sent_lo + lo;
  span.end = sent_lo + hi;
  span.chosen_node = sent_lo + node;
  std::vector<std::string> toks;
  for (int t = span.start; t < span.end; ++t)
    toks.push_back(post.tokens[static_cast<std::size_t>(t)].surface);
  span.text = detokenize(toks);
  return span;
}

ExplanationSpan fallback_explanation(const Post& post,
                                     const Detector& detector) {
  if (post.tokens.empty())
    throw std::runtime_error("fallback_explanation: empty post");
  const int n_sents = post.num_sentences();
  std::vector<double> mass(static_cast<std::size_t>(n_sents), 0.0);

  if (const auto* neural = dynamic_cast<const NeuralDetector*>(&detector)) {
    if (neural->model().config.architecture == Architecture::kBiAttention) {
      Prediction pred = neural->predict_post(post);
      const Eigen::VectorXd& a = *pred.alphas;
      for (int t = 0; t < a.size(); ++t)
        mass[static_cast<std::size_t>(
            post.tokens[static_cast<std::size_t>(t)].sent_index)] += a[t];
    }
    // forward_last offers no per-token scores: uniform mass, earliest wins
  } else if (const auto* logistic =
                 dynamic_cast<const LogisticDetector*>(&detector)) {
    for (const Token& t : post.tokens) {
      double w = logistic->model().weights[logistic->vocab().index_of(t.lower)];
      if (w > 0.0) mass[static_cast<std::size_t>(t.sent_index)] += w;
    }
  }

  int best = 0;
  for (int s = 1; s < n_sents; ++s)
    if (mass[static_cast<std::size_t>(s)] > mass[static_cast<std::size_t>(best)])
      best = s;
  return sentence_span(post, best);
}

}  // namespace rkit
