#include "rkit/linear.h"

#include <algorithm>
#include <cmath>

#include "rkit/checkpoint.h"
#include "rkit/util.h"

namespace rkit {

std::map<int, long> featurize(const Post& post, const Vocabulary& vocab) {
  std::map<int, long> counts;
  for (const Token& t : post.tokens) ++counts[vocab.index_of(t.lower)];
  return counts;
}

double predict_prob(const LogisticModel& model,
                    const std::map<int, long>& counts) {
  double z = model.bias;
  for (const auto& [idx, cnt] : counts)
    z += model.weights[idx] * static_cast<double>(cnt);
  return sigmoid(z);
}

double predict_prob(const LogisticModel& model, const Post& post,
                    const Vocabulary& vocab) {
  return predict_prob(model, featurize(post, vocab));
}

LogisticModel train_logistic(const std::vector<Post>& train_set,
                             const Vocabulary& vocab, double l2, int epochs,
                             double lr, std::uint64_t rng_seed,
                             int batch_size) {
  if (train_set.empty()) throw std::runtime_error("train_logistic: empty set");
  const long V = static_cast<long>(vocab.size());
  LogisticModel model;
  model.weights = Eigen::VectorXd::Zero(V);
  model.l2 = l2;

  struct Item {
    std::map<int, long> counts;
    int y;
  };
  std::vector<Item> items;
  items.reserve(train_set.size());
  for (const Post& p : train_set) {
    if (!p.label)
      throw std::runtime_error("train_logistic: post " + p.id + " has no label");
    items.push_back({featurize(p, vocab), *p.label});
  }

  Rng rng(rng_seed);
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(batch_size)) {
      std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(batch_size));
      double inv = 1.0 / static_cast<double>(stop - start);
      std::map<int, double> gw;
      double gb = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const Item& it = items[order[k]];
        double p = predict_prob(model, it.counts);
        double diff = (p - static_cast<double>(it.y)) * inv;
        for (const auto& [idx, cnt] : it.counts)
          gw[idx] += diff * static_cast<double>(cnt);
        gb += diff;
        double pc = std::min(1.0 - 1e-12, std::max(1e-12, p));
        loss_sum += -static_cast<double>(it.y) * std::log(pc) -
                    (1.0 - static_cast<double>(it.y)) * std::log(1.0 - pc);
      }
      // w -= lr * (batch grad + 2 l2 w); PAD weight never receives features
      model.weights *= (1.0 - 2.0 * lr * l2);
      for (const auto& [idx, g] : gw) model.weights[idx] -= lr * g;
      model.bias -= lr * gb;
    }
    if (!std::isfinite(loss_sum) || !std::isfinite(model.bias))
      throw std::runtime_error("train_logistic diverged at epoch " +
                               std::to_string(epoch));
  }
  model.weights[Vocabulary::kPad] = 0.0;
  return model;
}

SeedSet coef_seeds(const LogisticModel& model, const Vocabulary& vocab,
                   const Post& post, int k) {
  if (k < 1) throw std::invalid_argument("coef_seeds: k must be >= 1");
  SeedSet out;
  out.k_requested = k;
  out.mechanism = "coef";
  if (post.tokens.empty()) return out;

  // activated types with their first occurrence
  std::map<int, int> first_pos;  // vocab index -> position
  for (int t = 0; t < static_cast<int>(post.tokens.size()); ++t) {
    int idx = vocab.index_of(post.tokens[static_cast<std::size_t>(t)].lower);
    if (!first_pos.count(idx)) first_pos[idx] = t;
  }
  std::vector<Seed> ranked;
  for (const auto& [idx, pos] : first_pos)
    ranked.push_back({pos, model.weights[idx]});
  std::sort(ranked.begin(), ranked.end(), [](const Seed& a, const Seed& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position < b.position;
  });
  if (static_cast<int>(ranked.size()) > k)
    ranked.resize(static_cast<std::size_t>(k));
  out.seeds = std::move(ranked);
  return out;
}

void save_logistic(const LogisticModel& model, const Vocabulary& vocab,
                   const std::string& path, const nlohmann::json& extra_meta) {
  Checkpoint ckpt;
  ckpt.vocab_hash = vocab.hash();
  NamedTensor w;
  w.name = "logistic.weights";
  w.dims = {static_cast<std::uint64_t>(model.weights.size())};
  w.data.assign(model.weights.data(),
                model.weights.data() + model.weights.size());
  ckpt.tensors.push_back(std::move(w));
  NamedTensor b;
  b.name = "logistic.bias";
  b.dims = {1};
  b.data = {model.bias};
  ckpt.tensors.push_back(std::move(b));
  ckpt.config["kind"] = "logistic";
  ckpt.config["l2"] = model.l2;
  ckpt.config["vocab"] = vocab.tokens();
  for (auto& [k, v] : extra_meta.items()) ckpt.config[k] = v;
  write_checkpoint(ckpt, path);
}

std::pair<LogisticModel, Vocabulary> load_logistic(const std::string& path) {
  Checkpoint ckpt = read_checkpoint(path);
  if (ckpt.config.value("kind", "") != "logistic")
    throw std::runtime_error(path + " is not a logistic checkpoint");
  Vocabulary vocab = Vocabulary::from_tokens(
      ckpt.config.at("vocab").get<std::vector<std::string>>());
  if (vocab.hash() != ckpt.vocab_hash)
    throw std::runtime_error("vocabulary hash mismatch in " + path);
  const NamedTensor& w = ckpt.tensor("logistic.weights");
  if (w.dims.size() != 1 || w.dims[0] != vocab.size())
    throw std::runtime_error("logistic.weights shape mismatch in " + path);
  LogisticModel model;
  model.weights =
      Eigen::Map<const Eigen::VectorXd>(w.data.data(),
                                        static_cast<long>(w.data.size()));
  model.bias = ckpt.tensor("logistic.bias").data.at(0);
  model.l2 = ckpt.config.value("l2", 1e-4);
  return {std::move(model), std::move(vocab)};
}

}  // namespace rkit
