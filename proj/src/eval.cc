#include "rkit/eval.h"

#include <map>
#include <sstream>
#include <unordered_map>

namespace rkit {

DetectionReport detection_report(
    const std::vector<std::pair<int, double>>& gold_prob, double threshold) {
  if (gold_prob.empty())
    throw std::runtime_error("detection_report: no samples");
  DetectionReport r;
  r.threshold = threshold;
  for (const auto& [gold, prob] : gold_prob) {
    bool pred = prob >= threshold;
    if (pred && gold == 1) ++r.tp;
    else if (pred && gold == 0) ++r.fp;
    else if (!pred && gold == 1) ++r.fn;
    else ++r.tn;
  }
  r.precision = (r.tp + r.fp) > 0
                    ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp)
                    : 0.0;
  r.recall = (r.tp + r.fn) > 0
                 ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn)
                 : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

namespace {

std::vector<std::string> rouge_tokens(const std::string& text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text)) out.push_back(t.lower);
  return out;
}

std::map<std::string, long> ngram_counts(const std::vector<std::string>& toks,
                                         int n) {
  std::map<std::string, long> counts;
  if (static_cast<int>(toks.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k > 0) key += '\x1f';
      key += toks[i + static_cast<std::size_t>(k)];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

RougeScore rouge_n(const std::string& candidate, const std::string& reference,
                   int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("rouge_n: n must be 1 or 2");
  auto cand = ngram_counts(rouge_tokens(candidate), n);
  auto ref = ngram_counts(rouge_tokens(reference), n);
  long cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [g, c] : cand) {
    (void)g;
    cand_total += c;
  }
  for (const auto& [g, c] : ref) {
    ref_total += c;
    auto it = cand.find(g);
    if (it != cand.end()) overlap += std::min(c, it->second);
  }
  RougeScore s;
  if (cand_total == 0 || ref_total == 0) return s;  // all zero by convention
  s.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
  s.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

CorpusRouge explanation_report(const std::vector<ExplanationRecord>& records,
                               const std::vector<Post>& gold_posts, int n) {
  std::unordered_map<std::string, const ExplanationRecord*> by_id;
  for (const ExplanationRecord& r : records) by_id[r.id] = &r;

  CorpusRouge out;
  out.n = n;
  std::vector<std::string> missing;
  double sp = 0.0, sr = 0.0, sf = 0.0;
  for (const Post& p : gold_posts) {
    if (!p.label || *p.label != 1 || !p.gold_explanation) continue;
    auto it = by_id.find(p.id);
    if (it == by_id.end()) {
      missing.push_back(p.id);
      continue;
    }
    auto [s, e] = *p.gold_explanation;
    std::size_t lo = p.tokens[static_cast<std::size_t>(s)].char_start;
    std::size_t hi = p.tokens[static_cast<std::size_t>(e - 1)].char_end;
    std::string reference = p.raw.substr(lo, hi - lo);
    std::string candidate;
    if (it->second->predicted_label == 1 && it->second->explanation_text)
      candidate = *it->second->explanation_text;
    RougeScore rs = rouge_n(candidate, reference, n);
    sp += rs.precision;
    sr += rs.recall;
    sf += rs.f1;
    ++out.n_scored;
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "explanation_report: no record for " << missing.size()
        << " gold post id(s):";
    for (const std::string& id : missing) msg << ' ' << id;
    throw std::runtime_error(msg.str());
  }
  if (out.n_scored == 0)
    throw std::runtime_error("explanation_report: no gold-positive posts");
  out.mean.precision = sp / static_cast<double>(out.n_scored);
  out.mean.recall = sr / static_cast<double>(out.n_scored);
  out.mean.f1 = sf / static_cast<double>(out.n_scored);
  return out;
}

}  // namespace rkit
