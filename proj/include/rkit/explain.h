#ifndef RKIT_EXPLAIN_H
#define RKIT_EXPLAIN_H

#include <string>
#include <vector>

#include "rkit/corpus.h"
#include "rkit/depparse.h"
#include "rkit/seeds.h"

namespace rkit {

struct ExplanationSpan {
  int sentence_index = 0;
  int start = 0, end = 0;  // token range in post coordinates
  std::string text;        // detokenized span
  int chosen_node = 0;     // post coordinates
  bool promoted = false;   // head-promotion rule fired
  bool fallback = false;
};

// "highest seed" reading: shallowest in the tree (default) or highest score.
enum class HighestSeedPolicy { kDepth, kScore };

// Selects the sentence with the most seeds, walks to the highest seed in its
// dependency tree, promotes a non-verb non-root node to its head once, and
// returns the node's subtree span. trees holds one parse per sentence.
ExplanationSpan generate_explanation(
    const Post& post, const SeedSet& seed_set,
    const std::vector<DepTree>& trees,
    HighestSeedPolicy policy = HighestSeedPolicy::kDepth);

// Whole-sentence fallback for seedless inputs: the sentence with the largest
// attention mass (neural) or largest summed positive coefficients (logistic);
// earliest sentence on ties or when the detector offers no per-token scores.
ExplanationSpan fallback_explanation(const Post& post, const Detector& detector);

}  // namespace rkit

#endif  // RKIT_EXPLAIN_H
