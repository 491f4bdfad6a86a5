#ifndef RKIT_LIME_H
#define RKIT_LIME_H

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rkit/corpus.h"
#include "rkit/seedset.h"

namespace rkit {

struct LimeConfig {
  int num_samples = 1000;
  int num_features = 5;      // k
  double kernel_width = 0.0; // 0 = auto: 0.75 * sqrt(#distinct word types)
  double ridge_l2 = 1.0;
  std::uint64_t rng_seed = 0;
};

// A perturbation: mask over the post's distinct word types (first-occurrence
// order) and the token sequence with the masked-out types deleted.
struct LimeSample {
  std::vector<std::uint8_t> mask;
  std::vector<std::string> tokens;  // lower forms
};

// Sample 0 is the unperturbed post. Every other sample deletes a uniform
// subset of types, the subset size uniform in [1, types-1]. A one-type post
// yields just the identity mask plus the empty mask.
std::vector<LimeSample> perturb(const Post& post, int n, std::uint64_t rng_seed);

struct LocalSurrogate {
  std::vector<std::string> types;  // first-occurrence order
  std::vector<int> first_positions;
  Eigen::VectorXd importance;      // per type
  double intercept = 0.0;
  double r2 = 0.0;
};

// Black boxes consume raw token sequences and must return a probability for
// any input, the empty sequence included.
using BlackBox = std::function<double(const std::vector<std::string>&)>;

// Proximity-weighted ridge fit of black-box outputs on deletion masks;
// proximity = exp(-d^2 / kernel_width^2) with d the cosine distance between
// the mask and the all-ones vector.
LocalSurrogate explain_instance(const BlackBox& black_box, const Post& post,
                                const LimeConfig& config);

// Top-k types by descending positive importance, mapped to first-occurrence
// positions, ties toward the earlier position.
SeedSet lime_seeds(const BlackBox& black_box, const Post& post, int k,
                   const LimeConfig& config);

}  // namespace rkit

#endif  // RKIT_LIME_H
