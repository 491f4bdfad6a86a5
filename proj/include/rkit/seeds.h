#ifndef RKIT_SEEDS_H
#define RKIT_SEEDS_H

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rkit/corpus.h"
#include "rkit/lime.h"
#include "rkit/linear.h"
#include "rkit/nn.h"
#include "rkit/seedset.h"

namespace rkit {

inline constexpr int kDefaultSeedK = 5;

// Uniform scoring surface over both detector families. score_tokens must be
// total: the empty sequence gets the model's bias probability.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual double score_tokens(const std::vector<std::string>& tokens) const = 0;
  virtual std::string kind() const = 0;  // "logistic" | "neural"
};

class LogisticDetector : public Detector {
 public:
  LogisticDetector(LogisticModel model, Vocabulary vocab)
      : model_(std::move(model)), vocab_(std::move(vocab)) {}
  double score_tokens(const std::vector<std::string>& tokens) const override;
  std::string kind() const override { return "logistic"; }
  double score_post(const Post& post) const;
  const LogisticModel& model() const { return model_; }
  const Vocabulary& vocab() const { return vocab_; }

 private:
  LogisticModel model_;
  Vocabulary vocab_;
};

class NeuralDetector : public Detector {
 public:
  NeuralDetector(AttentionModel model, Vocabulary vocab)
      : model_(std::move(model)), vocab_(std::move(vocab)) {}
  double score_tokens(const std::vector<std::string>& tokens) const override;
  std::string kind() const override { return "neural"; }
  Prediction predict_post(const Post& post) const;
  const AttentionModel& model() const { return model_; }
  const Vocabulary& vocab() const { return vocab_; }

 private:
  AttentionModel model_;
  Vocabulary vocab_;
};

// Top-k positions by attention weight; requires the bi_attention
// architecture.
SeedSet attention_seeds(const NeuralDetector& detector, const Post& post, int k);

using Seeder = std::function<SeedSet(const Post&, int)>;

// mechanism in {"coef", "attention", "lime"}; coef requires a logistic
// detector, attention a bi_attention neural one, lime accepts any.
Seeder get_seeder(const std::string& mechanism, const Detector& detector,
                  const LimeConfig& lime_config = {});

}  // namespace rkit

#endif  // RKIT_SEEDS_H
