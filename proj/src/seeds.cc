#include "rkit/seeds.h"

#include <algorithm>

#include "rkit/util.h"

namespace rkit {

double LogisticDetector::score_tokens(
    const std::vector<std::string>& tokens) const {
  double z = model_.bias;
  for (const std::string& t : tokens) z += model_.weights[vocab_.index_of(t)];
  return sigmoid(z);
}

double LogisticDetector::score_post(const Post& post) const {
  return predict_prob(model_, post, vocab_);
}

double NeuralDetector::score_tokens(
    const std::vector<std::string>& tokens) const {
  if (tokens.empty()) return sigmoid(model_.params.out_b(0, 0));
  EncodedPost e;
  e.true_length = std::min<int>(static_cast<int>(tokens.size()),
                                model_.config.max_len);
  e.ids.assign(static_cast<std::size_t>(model_.config.max_len),
               Vocabulary::kPad);
  for (int t = 0; t < e.true_length; ++t)
    e.ids[static_cast<std::size_t>(t)] =
        vocab_.index_of(tokens[static_cast<std::size_t>(t)]);
  return predict(model_, e).p;
}

Prediction NeuralDetector::predict_post(const Post& post) const {
  return predict(model_, encode(post, vocab_, model_.config.max_len));
}

SeedSet attention_seeds(const NeuralDetector& detector, const Post& post,
                        int k) {
  if (k < 1) throw std::invalid_argument("attention_seeds: k must be >= 1");
  if (detector.model().config.architecture != Architecture::kBiAttention)
    throw std::runtime_error(
        "attention_seeds: forward_last model has no attention");
  if (post.tokens.empty())
    throw std::runtime_error("attention_seeds: empty post");

  Prediction pred = detector.predict_post(post);
  const Eigen::VectorXd& a = *pred.alphas;
  SeedSet out;
  out.k_requested = k;
  out.mechanism = "attention";
  std::vector<Seed> ranked;
  for (int t = 0; t < a.size(); ++t) ranked.push_back({t, a[t]});
  std::sort(ranked.begin(), ranked.end(), [](const Seed& x, const Seed& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.position < y.position;
  });
  if (static_cast<int>(ranked.size()) > k)
    ranked.resize(static_cast<std::size_t>(k));
  out.seeds = std::move(ranked);
  return out;
}

Seeder get_seeder(const std::string& mechanism, const Detector& detector,
                  const LimeConfig& lime_config) {
  if (mechanism == "coef") {
    const auto* logistic = dynamic_cast<const LogisticDetector*>(&detector);
    if (!logistic)
      throw std::runtime_error(
          "seed mechanism 'coef' requires a logistic detector");
    return [logistic](const Post& post, int k) {
      return coef_seeds(logistic->model(), logistic->vocab(), post, k);
    };
  }
  if (mechanism == "attention") {
    const auto* neural = dynamic_cast<const NeuralDetector*>(&detector);
    if (!neural || neural->model().config.architecture !=
                       Architecture::kBiAttention)
      throw std::runtime_error(
          "seed mechanism 'attention' requires a bi_attention neural detector");
    return [neural](const Post& post, int k) {
      return attention_seeds(*neural, post, k);
    };
  }
  if (mechanism == "lime") {
    const Detector* d = &detector;
    LimeConfig cfg = lime_config;
    return [d, cfg](const Post& post, int k) {
      BlackBox bb = [d](const std::vector<std::string>& toks) {
        return d->score_tokens(toks);
      };
      return lime_seeds(bb, post, k, cfg);
    };
  }
  throw std::runtime_error("unknown seed mechanism: " + mechanism);
}

}  // namespace rkit
