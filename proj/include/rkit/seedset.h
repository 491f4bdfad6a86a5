#ifndef RKIT_SEEDSET_H
#define RKIT_SEEDSET_H

#include <string>
#include <vector>

namespace rkit {

struct Seed {
  int position = 0;  // token index into the post
  double score = 0.0;
};

// Ordered by nonincreasing score; positions are distinct and valid.
struct SeedSet {
  std::vector<Seed> seeds;
  int k_requested = 0;
  std::string mechanism;  // "coef" | "attention" | "lime"

  bool empty() const { return seeds.empty(); }
  std::size_t size() const { return seeds.size(); }
};

}  // namespace rkit

#endif  // RKIT_SEEDSET_H
