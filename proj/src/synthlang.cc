#include "synthlang.h"

namespace rkit::synthlang {

namespace {

const std::vector<std::string> kDet = {"the", "a", "this", "every", "some"};
const std::vector<std::string> kAdj = {"amber",  "pale",    "quiet",
                                       "crimson", "silver", "distant",
                                       "hollow",  "gentle"};
const std::vector<std::string> kNoun = {
    "kite",   "lantern", "harbor", "pier",   "meadow",
    "heron",  "river",   "garden", "orchard", "valley",
    "window", "bell",    "tide",   "forest",  "lighthouse"};
const std::vector<std::string> kVerb = {
    "drifts", "sways",   "rests",  "waits", "hums",  "gleams",
    "settles", "wanders", "fades",  "sleeps", "turns", "lingers"};
const std::vector<std::string> kAdv = {"slowly", "softly", "often", "quietly",
                                       "gently"};
const std::vector<std::string> kAdp = {"above", "beside", "beyond",
                                       "near",  "under",  "across"};
const std::vector<std::string> kPronSubj = {"i", "you", "we", "they", "it"};
const std::vector<std::string> kPronObj = {"myself", "yourself", "itself",
                                           "themselves"};
const std::vector<std::string> kNeg = {"never", "not"};
const std::vector<std::string> kTrigNoun = {"siren", "klaxon", "beacon"};
const std::vector<std::string> kTrigVerb = {"howls", "blares", "wails"};

const std::string& pick(Rng& rng, const std::vector<std::string>& pool) {
  return pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(pool.size()) - 1))];
}

struct Builder {
  Clause c;
  int add(const std::string& form, const std::string& pos, int head) {
    c.forms.push_back(form);
    c.upos.push_back(pos);
    c.heads.push_back(head);
    return static_cast<int>(c.forms.size()) - 1;
  }
  void set_head(int i, int h) { c.heads[static_cast<std::size_t>(i)] = h; }
};

// det (adj) noun, attached to a head fixed later; returns the noun index.
int add_np(Builder& b, Rng& rng, const std::string& noun, bool allow_adj) {
  int det = b.add(pick(rng, kDet), "DET", -2);
  int adj = -1;
  if (allow_adj && rng.bernoulli(0.5)) adj = b.add(pick(rng, kAdj), "ADJ", -2);
  int n = b.add(noun, "NOUN", -2);
  b.set_head(det, n);
  if (adj >= 0) b.set_head(adj, n);
  return n;
}

}  // namespace

Clause sample_clause(Rng& rng, ClauseKind kind, bool negated) {
  Builder b;
  bool trig = kind == ClauseKind::kTrigger;

  // shape: 0 intransitive, 1 oblique (ADP NP), 2 transitive, 3 adverbial
  long shape = rng.uniform_int(0, 3);

  const std::string& subj_noun =
      trig ? pick(rng, kTrigNoun) : pick(rng, kNoun);
  int subj = add_np(b, rng, subj_noun, true);

  if (shape == 3) {
    int adv = b.add(pick(rng, kAdv), "ADV", -2);
    b.set_head(adv, -3);  // fixed to verb below
  }
  int neg = -1;
  if (negated) neg = b.add(pick(rng, kNeg), "PART", -2);

  int verb = b.add(trig ? pick(rng, kTrigVerb) : pick(rng, kVerb), "VERB", -1);
  b.set_head(subj, verb);
  if (neg >= 0) b.set_head(neg, verb);
  for (std::size_t i = 0; i < b.c.heads.size(); ++i)
    if (b.c.heads[i] == -3) b.c.heads[i] = verb;

  if (shape == 1) {
    int adp = b.add(pick(rng, kAdp), "ADP", -2);
    int obj = add_np(b, rng, pick(rng, kNoun), false);
    b.set_head(adp, obj);
    b.set_head(obj, verb);
  } else if (shape == 2) {
    int obj = add_np(b, rng, pick(rng, kNoun), true);
    b.set_head(obj, verb);
  }

  int dot = b.add(".", "PUNCT", -2);
  b.set_head(dot, verb);
  return b.c;
}

Clause sample_treebank_clause(Rng& rng) {
  long r = rng.uniform_int(0, 9);
  if (r < 2) {
    // pronoun clause: pron (neg) verb pron .
    Builder b;
    int s = b.add(pick(rng, kPronSubj), "PRON", -2);
    int neg = rng.bernoulli(0.2) ? b.add(pick(rng, kNeg), "PART", -2) : -1;
    int v = b.add(pick(rng, kVerb), "VERB", -1);
    int o = b.add(pick(rng, kPronObj), "PRON", v);
    (void)o;
    b.set_head(s, v);
    if (neg >= 0) b.set_head(neg, v);
    int dot = b.add(".", "PUNCT", v);
    (void)dot;
    return b.c;
  }
  if (r < 4)
    return sample_clause(rng, ClauseKind::kTrigger, r == 3);
  return sample_clause(rng, ClauseKind::kNeutral,
                       rng.bernoulli(kNeutralNegationRate));
}

}  // namespace rkit::synthlang
