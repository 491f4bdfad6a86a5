#ifndef RKIT_EVAL_H
#define RKIT_EVAL_H

#include <string>
#include <utility>
#include <vector>

#include "rkit/corpus.h"
#include "rkit/records.h"

namespace rkit {

struct DetectionReport {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  double threshold = 0.5;
};

// pairs of (gold label, probability); positive iff probability >= threshold.
// P = 0 with no predicted positives, R = 0 with no gold positives, F1 = 0
// when both are 0.
DetectionReport detection_report(
    const std::vector<std::pair<int, double>>& gold_prob, double threshold);

struct RougeScore {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Clipped n-gram overlap; both sides tokenized with the corpus tokenizer
// and lower-cased, no stemming or stopword removal. Any side with zero
// n-grams scores 0 across the board.
RougeScore rouge_n(const std::string& candidate, const std::string& reference,
                   int n);

struct CorpusRouge {
  int n = 1;
  RougeScore mean;   // arithmetic mean of per-sample scores
  long n_scored = 0; // gold-positive posts scored
};

// Scores gold-positive posts only; a record with no span contributes an
// empty candidate. Gold posts without a matching record id are an error.
CorpusRouge explanation_report(const std::vector<ExplanationRecord>& records,
                               const std::vector<Post>& gold_posts, int n);

}  // namespace rkit

#endif  // RKIT_EVAL_H
