#ifndef RKIT_LINEAR_H
#define RKIT_LINEAR_H

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include <json.hpp>

#include "rkit/corpus.h"
#include "rkit/seedset.h"

namespace rkit {

struct LogisticModel {
  Eigen::VectorXd weights;  // over vocabulary indices, PAD weight stays 0
  double bias = 0.0;
  double l2 = 1e-4;
};

// Term-frequency counts of lower forms; OOV tokens count under UNK.
std::map<int, long> featurize(const Post& post, const Vocabulary& vocab);

double predict_prob(const LogisticModel& model, const std::map<int, long>& counts);
double predict_prob(const LogisticModel& model, const Post& post,
                    const Vocabulary& vocab);

// Seeded mini-batch gradient descent on mean BCE + l2 * ||w||^2.
LogisticModel train_logistic(const std::vector<Post>& train_set,
                             const Vocabulary& vocab, double l2, int epochs,
                             double lr, std::uint64_t rng_seed,
                             int batch_size = 64);

// Top-k activated word types by descending signed weight (crisis-positive
// direction), each mapped to its first occurrence; ties break toward the
// earlier position.
SeedSet coef_seeds(const LogisticModel& model, const Vocabulary& vocab,
                   const Post& post, int k);

void save_logistic(const LogisticModel& model, const Vocabulary& vocab,
                   const std::string& path,
                   const nlohmann::json& extra_meta = nlohmann::json::object());
std::pair<LogisticModel, Vocabulary> load_logistic(const std::string& path);

}  // namespace rkit

#endif  // RKIT_LINEAR_H
