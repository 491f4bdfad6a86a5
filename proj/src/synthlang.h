#ifndef RKIT_SYNTHLANG_H
#define RKIT_SYNTHLANG_H

#include <string>
#include <vector>

#include "rkit/util.h"

// Abstract template grammar shared by the synthetic corpus generator and
// the synthetic treebank generator. Clauses are single sentences ending in
// '.', with gold UPOS tags and projective head assignments.
namespace rkit::synthlang {

struct Clause {
  std::vector<std::string> forms;
  std::vector<std::string> upos;
  std::vector<int> heads;  // clause-local indices, -1 marks the root
};

// kind: neutral background clause or trigger clause. A negated clause
// carries "never"/"not" immediately before its verb.
enum class ClauseKind { kNeutral, kTrigger };

Clause sample_clause(Rng& rng, ClauseKind kind, bool negated);

// Mixed sample for treebank synthesis (neutral, pronoun, trigger and
// negated-trigger shapes all appear).
Clause sample_treebank_clause(Rng& rng);

// Fraction of neutral clauses that carry a negation word; keeps bag-of-words
// detectors from reading "never"/"not" as a pure negative-label signal.
inline constexpr double kNeutralNegationRate = 0.18;

}  // namespace rkit::synthlang

#endif  // RKIT_SYNTHLANG_H
