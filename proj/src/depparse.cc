#include "rkit/depparse.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rkit/checkpoint.h"
#include "rkit/util.h"
#include "synthlang.h"

namespace rkit {

namespace {

std::string lower_ascii(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  return out;
}

std::vector<std::vector<int>> children_of(const DepTree& t) {
  std::vector<std::vector<int>> ch(static_cast<std::size_t>(t.size()));
  for (int i = 0; i < t.size(); ++i) {
    int h = t.heads[static_cast<std::size_t>(i)];
    if (h >= 0 && h < t.size()) ch[static_cast<std::size_t>(h)].push_back(i);
  }
  return ch;
}

}  // namespace

int DepTree::root() const {
  int r = -1;
  for (int i = 0; i < size(); ++i)
    if (heads[static_cast<std::size_t>(i)] < 0) {
      if (r >= 0) throw std::runtime_error("tree has multiple roots");
      r = i;
    }
  if (r < 0) throw std::runtime_error("tree has no root");
  return r;
}

void DepTree::validate() const {
  if (size() == 0) throw std::runtime_error("empty tree");
  if (upos.size() != forms.size() || heads.size() != forms.size())
    throw std::runtime_error("tree field lengths disagree");
  int r = root();
  for (int i = 0; i < size(); ++i) {
    int h = heads[static_cast<std::size_t>(i)];
    if (h >= size() || h == i)
      throw std::runtime_error("bad head index at token " + std::to_string(i));
  }
  // reachability from the root covers everything iff acyclic + connected
  auto ch = children_of(*this);
  std::vector<int> stack = {r};
  long seen = 0;
  std::vector<bool> visited(static_cast<std::size_t>(size()), false);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (visited[static_cast<std::size_t>(v)])
      throw std::runtime_error("cycle in tree at token " + std::to_string(v));
    visited[static_cast<std::size_t>(v)] = true;
    ++seen;
    for (int c : ch[static_cast<std::size_t>(v)]) stack.push_back(c);
  }
  if (seen != size())
    throw std::runtime_error("tree is disconnected (cyclic heads)");
}

bool DepTree::is_projective() const {
  auto ch = children_of(*this);
  // subtree size and interval per node, computed bottom-up
  std::vector<int> lo(static_cast<std::size_t>(size())),
      hi(static_cast<std::size_t>(size())), cnt(static_cast<std::size_t>(size()), 1);
  for (int i = 0; i < size(); ++i) {
    lo[static_cast<std::size_t>(i)] = i;
    hi[static_cast<std::size_t>(i)] = i;
  }
  // process in topological (post) order via DFS
  int r;
  try {
    r = root();
  } catch (const std::exception&) {
    return false;
  }
  std::vector<std::pair<int, std::size_t>> stack{{r, 0}};
  std::vector<int> order;
  while (!stack.empty()) {
    auto& [v, k] = stack.back();
    if (k < ch[static_cast<std::size_t>(v)].size()) {
      int c = ch[static_cast<std::size_t>(v)][k++];
      stack.emplace_back(c, 0);
    } else {
      order.push_back(v);
      stack.pop_back();
    }
  }
  if (static_cast<int>(order.size()) != size()) return false;
  for (int v : order) {
    for (int c : ch[static_cast<std::size_t>(v)]) {
      lo[static_cast<std::size_t>(v)] = std::min(lo[static_cast<std::size_t>(v)], lo[static_cast<std::size_t>(c)]);
      hi[static_cast<std::size_t>(v)] = std::max(hi[static_cast<std::size_t>(v)], hi[static_cast<std::size_t>(c)]);
      cnt[static_cast<std::size_t>(v)] += cnt[static_cast<std::size_t>(c)];
    }
    if (hi[static_cast<std::size_t>(v)] - lo[static_cast<std::size_t>(v)] + 1 !=
        cnt[static_cast<std::size_t>(v)])
      return false;
  }
  return true;
}

std::vector<DepTree> read_conllu(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open treebank: " + path);
  std::vector<DepTree> trees;
  DepTree cur;
  std::vector<long> head_col;  // 1-based heads until sentence is flushed
  std::string line;
  long lineno = 0, sent_start = 1;

  auto flush = [&]() {
    if (cur.forms.empty()) return;
    cur.heads.resize(head_col.size());
    for (std::size_t i = 0; i < head_col.size(); ++i) {
      long h = head_col[i];
      if (h < 0 || h > static_cast<long>(cur.forms.size()))
        throw std::runtime_error(path + ": sentence at line " +
                                 std::to_string(sent_start) +
                                 ": head index out of range");
      cur.heads[i] = static_cast<int>(h) - 1;  // 0 (root) becomes -1
    }
    try {
      cur.validate();
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": sentence at line " +
                               std::to_string(sent_start) + ": " + e.what());
    }
    trees.push_back(std::move(cur));
    cur = DepTree{};
    head_col.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      sent_start = lineno + 1;
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        cols.push_back(line.substr(pos));
        break;
      }
      cols.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (cols.size() != 10)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 10 columns, got " +
                               std::to_string(cols.size()));
    const std::string& id = cols[0];
    if (id.find('-') != std::string::npos ||
        id.find('.') != std::string::npos)
      continue;  // multiword range or empty node
    long head;
    try {
      head = std::stol(cols[6]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad HEAD field '" + cols[6] + "'");
    }
    if (cur.forms.empty()) sent_start = lineno;
    cur.forms.push_back(cols[1]);
    cur.upos.push_back(cols[3]);
    head_col.push_back(head);
  }
  flush();
  return trees;
}

void write_conllu(const std::vector<DepTree>& trees, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write treebank: " + path);
  for (const DepTree& t : trees) {
    for (int i = 0; i < t.size(); ++i) {
      out << (i + 1) << '\t' << t.forms[static_cast<std::size_t>(i)] << "\t_\t"
          << t.upos[static_cast<std::size_t>(i)] << "\t_\t_\t"
          << (t.heads[static_cast<std::size_t>(i)] + 1) << "\t_\t_\t_\n";
    }
    out << '\n';
  }
}

// ---------------- tagger ----------------

namespace {

void tagger_features(const std::vector<std::string>& forms, int i,
                     const std::string& prev_tag,
                     std::vector<std::string>& out) {
  const std::string& w = forms[static_cast<std::size_t>(i)];
  std::string lw = lower_ascii(w);
  out.clear();
  out.push_back("b");
  out.push_back("w=" + w);
  out.push_back("lw=" + lw);
  for (std::size_t p = 1; p <= 3 && p <= lw.size(); ++p) {
    out.push_back("p" + std::to_string(p) + "=" + lw.substr(0, p));
    out.push_back("s" + std::to_string(p) + "=" + lw.substr(lw.size() - p));
  }
  out.push_back("pt=" + prev_tag);
  out.push_back("pw=" + (i > 0 ? lower_ascii(forms[static_cast<std::size_t>(i - 1)])
                                : std::string("<s>")));
  out.push_back("nw=" + (i + 1 < static_cast<int>(forms.size())
                             ? lower_ascii(forms[static_cast<std::size_t>(i + 1)])
                             : std::string("</s>")));
}

int argmax_tag(const TaggerModel& model,
               const std::vector<std::string>& feats) {
  const int n = static_cast<int>(model.tags.size());
  std::vector<double> score(static_cast<std::size_t>(n), 0.0);
  for (const std::string& f : feats) {
    auto it = model.weights.find(f);
    if (it == model.weights.end()) continue;
    for (int t = 0; t < n; ++t) score[static_cast<std::size_t>(t)] += it->second[static_cast<std::size_t>(t)];
  }
  int best = 0;
  for (int t = 1; t < n; ++t)
    if (score[static_cast<std::size_t>(t)] > score[static_cast<std::size_t>(best)]) best = t;
  return best;
}

}  // namespace

TaggerModel train_tagger(const std::vector<DepTree>& treebank, int iterations,
                         std::uint64_t rng_seed) {
  if (treebank.empty()) throw std::runtime_error("train_tagger: empty treebank");
  TaggerModel model;
  for (const DepTree& t : treebank)
    for (const std::string& u : t.upos) model.tags.push_back(u);
  std::sort(model.tags.begin(), model.tags.end());
  model.tags.erase(std::unique(model.tags.begin(), model.tags.end()),
                   model.tags.end());
  const int n_tags = static_cast<int>(model.tags.size());
  std::unordered_map<std::string, int> tag_id;
  for (int t = 0; t < n_tags; ++t) tag_id[model.tags[static_cast<std::size_t>(t)]] = t;

  std::unordered_map<std::string, std::vector<double>> acc, stamp;
  auto update = [&](const std::string& f, int tag, double delta, double t_now) {
    auto& w = model.weights[f];
    auto& a = acc[f];
    auto& s = stamp[f];
    if (w.empty()) {
      w.assign(static_cast<std::size_t>(n_tags), 0.0);
      a.assign(static_cast<std::size_t>(n_tags), 0.0);
      s.assign(static_cast<std::size_t>(n_tags), 0.0);
    }
    a[static_cast<std::size_t>(tag)] +=
        (t_now - s[static_cast<std::size_t>(tag)]) * w[static_cast<std::size_t>(tag)];
    s[static_cast<std::size_t>(tag)] = t_now;
    w[static_cast<std::size_t>(tag)] += delta;
  };

  Rng rng(rng_seed);
  std::vector<std::size_t> order(treebank.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  double t_now = 0.0;
  std::vector<std::string> feats;
  for (int it = 0; it < iterations; ++it) {
    rng.shuffle(order);
    for (std::size_t si : order) {
      const DepTree& sent = treebank[si];
      std::string prev = "<s>";
      for (int i = 0; i < sent.size(); ++i) {
        t_now += 1.0;
        tagger_features(sent.forms, i, prev, feats);
        int pred = argmax_tag(model, feats);
        int gold = tag_id.at(sent.upos[static_cast<std::size_t>(i)]);
        if (pred != gold) {
          for (const std::string& f : feats) {
            update(f, gold, 1.0, t_now);
            update(f, pred, -1.0, t_now);
          }
        }
        prev = model.tags[static_cast<std::size_t>(pred)];
      }
    }
  }
  // finish averaging
  for (auto& [f, w] : model.weights) {
    auto& a = acc[f];
    auto& s = stamp[f];
    for (int t = 0; t < n_tags; ++t) {
      a[static_cast<std::size_t>(t)] +=
          (t_now - s[static_cast<std::size_t>(t)]) * w[static_cast<std::size_t>(t)];
      w[static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(t)] / t_now;
    }
  }
  return model;
}

std::vector<std::string> tag_sentence(const TaggerModel& tagger,
                                      const std::vector<std::string>& forms) {
  std::vector<std::string> tags;
  tags.reserve(forms.size());
  std::string prev = "<s>";
  std::vector<std::string> feats;
  for (int i = 0; i < static_cast<int>(forms.size()); ++i) {
    tagger_features(forms, i, prev, feats);
    int pred = argmax_tag(tagger, feats);
    prev = tagger.tags[static_cast<std::size_t>(pred)];
    tags.push_back(prev);
  }
  return tags;
}

// ---------------- parser ----------------

namespace {

enum Transition { kShift = 0, kLeftArc = 1, kRightArc = 2 };

struct ParseState {
  std::vector<int> stack;
  int buffer = 0;  // next input index
  int n = 0;
  std::vector<int> heads;
  std::vector<int> leftmost, rightmost;  // child extremes per node

  explicit ParseState(int n_)
      : n(n_),
        heads(static_cast<std::size_t>(n_), -1),
        leftmost(static_cast<std::size_t>(n_), -1),
        rightmost(static_cast<std::size_t>(n_), -1) {}

  bool done() const { return buffer >= n && stack.size() == 1; }
  bool can(int tr) const {
    if (tr == kShift) return buffer < n;
    return stack.size() >= 2;
  }
  void apply(int tr) {
    if (tr == kShift) {
      stack.push_back(buffer++);
      return;
    }
    int s0 = stack[stack.size() - 1];
    int s1 = stack[stack.size() - 2];
    if (tr == kLeftArc) {
      heads[static_cast<std::size_t>(s1)] = s0;
      if (leftmost[static_cast<std::size_t>(s0)] < 0 || s1 < leftmost[static_cast<std::size_t>(s0)])
        leftmost[static_cast<std::size_t>(s0)] = s1;
      if (s1 > rightmost[static_cast<std::size_t>(s0)]) rightmost[static_cast<std::size_t>(s0)] = s1;
      stack.erase(stack.end() - 2);
    } else {
      heads[static_cast<std::size_t>(s0)] = s1;
      if (leftmost[static_cast<std::size_t>(s1)] < 0 || s0 < leftmost[static_cast<std::size_t>(s1)])
        leftmost[static_cast<std::size_t>(s1)] = s0;
      if (s0 > rightmost[static_cast<std::size_t>(s1)]) rightmost[static_cast<std::size_t>(s1)] = s0;
      stack.pop_back();
    }
  }
};

void parser_features(const ParseState& st, const std::vector<std::string>& forms,
                     const std::vector<std::string>& upos,
                     std::vector<std::string>& out) {
  out.clear();
  auto word = [&](int i) -> const std::string& {
    static const std::string none = "<none>";
    return i >= 0 && i < st.n ? forms[static_cast<std::size_t>(i)] : none;
  };
  auto tag = [&](int i) -> const std::string& {
    static const std::string none = "<none>";
    return i >= 0 && i < st.n ? upos[static_cast<std::size_t>(i)] : none;
  };
  int s0 = st.stack.size() >= 1 ? st.stack[st.stack.size() - 1] : -1;
  int s1 = st.stack.size() >= 2 ? st.stack[st.stack.size() - 2] : -1;
  int b0 = st.buffer < st.n ? st.buffer : -1;
  int b1 = st.buffer + 1 < st.n ? st.buffer + 1 : -1;
  int b2 = st.buffer + 2 < st.n ? st.buffer + 2 : -1;
  int s0l = s0 >= 0 ? st.leftmost[static_cast<std::size_t>(s0)] : -1;
  int s0r = s0 >= 0 ? st.rightmost[static_cast<std::size_t>(s0)] : -1;
  int s1l = s1 >= 0 ? st.leftmost[static_cast<std::size_t>(s1)] : -1;
  int s1r = s1 >= 0 ? st.rightmost[static_cast<std::size_t>(s1)] : -1;

  out.push_back("b");
  out.push_back("s0w=" + word(s0));
  out.push_back("s0t=" + tag(s0));
  out.push_back("s0wt=" + word(s0) + "|" + tag(s0));
  out.push_back("s1w=" + word(s1));
  out.push_back("s1t=" + tag(s1));
  out.push_back("s1wt=" + word(s1) + "|" + tag(s1));
  out.push_back("b0w=" + word(b0));
  out.push_back("b0t=" + tag(b0));
  out.push_back("b0wt=" + word(b0) + "|" + tag(b0));
  out.push_back("b1w=" + word(b1));
  out.push_back("b1t=" + tag(b1));
  out.push_back("b2t=" + tag(b2));
  out.push_back("s0t,s1t=" + tag(s0) + "|" + tag(s1));
  out.push_back("s0w,s1w=" + word(s0) + "|" + word(s1));
  out.push_back("s0t,b0t=" + tag(s0) + "|" + tag(b0));
  out.push_back("s0w,s1t=" + word(s0) + "|" + tag(s1));
  out.push_back("s1w,s0t=" + word(s1) + "|" + tag(s0));
  out.push_back("s0t,s1t,b0t=" + tag(s0) + "|" + tag(s1) + "|" + tag(b0));
  out.push_back("s0lt=" + tag(s0l));
  out.push_back("s0rt=" + tag(s0r));
  out.push_back("s1lt=" + tag(s1l));
  out.push_back("s1rt=" + tag(s1r));
  out.push_back("s0t,s1t,s1rt=" + tag(s0) + "|" + tag(s1) + "|" + tag(s1r));
  out.push_back("s0t,s0lt,s1t=" + tag(s0) + "|" + tag(s0l) + "|" + tag(s1));
  if (s0 >= 0 && s1 >= 0) {
    int d = s0 - s1;
    if (d > 4) d = 5;
    out.push_back("dist=" + std::to_string(d));
    out.push_back("s0t,s1t,dist=" + tag(s0) + "|" + tag(s1) + "|" +
                  std::to_string(d));
  }
}

int best_valid(const ParserModel& model, const ParseState& st,
               const std::vector<std::string>& feats) {
  double best_score = 0.0;
  int best = -1;
  std::array<double, 3> score{0.0, 0.0, 0.0};
  for (const std::string& f : feats) {
    auto it = model.weights.find(f);
    if (it == model.weights.end()) continue;
    for (int a = 0; a < 3; ++a) score[static_cast<std::size_t>(a)] += it->second[static_cast<std::size_t>(a)];
  }
  for (int a = 0; a < 3; ++a) {
    if (!st.can(a)) continue;
    if (best < 0 || score[static_cast<std::size_t>(a)] > best_score) {
      best = a;
      best_score = score[static_cast<std::size_t>(a)];
    }
  }
  return best;
}

// static oracle for arc-standard over a projective gold tree
int oracle_transition(const ParseState& st, const std::vector<int>& gold,
                      const std::vector<int>& pending_children) {
  if (st.stack.size() >= 2) {
    int s0 = st.stack[st.stack.size() - 1];
    int s1 = st.stack[st.stack.size() - 2];
    if (gold[static_cast<std::size_t>(s1)] == s0 &&
        pending_children[static_cast<std::size_t>(s1)] == 0)
      return kLeftArc;
    if (gold[static_cast<std::size_t>(s0)] == s1 &&
        pending_children[static_cast<std::size_t>(s0)] == 0)
      return kRightArc;
  }
  return kShift;
}

}  // namespace

ParserModel train_parser(const std::vector<DepTree>& treebank, int iterations,
                         std::uint64_t rng_seed) {
  std::vector<const DepTree*> usable;
  long dropped = 0;
  for (const DepTree& t : treebank) {
    if (t.is_projective())
      usable.push_back(&t);
    else
      ++dropped;
  }
  if (usable.empty())
    throw std::runtime_error("train_parser: no projective sentences");

  ParserModel model;
  model.dropped_nonprojective = dropped;
  std::unordered_map<std::string, std::array<double, 3>> acc, stamp;
  auto update = [&](const std::string& f, int a, double delta, double t_now) {
    auto& w = model.weights[f];
    auto& ac = acc[f];
    auto& s = stamp[f];
    ac[static_cast<std::size_t>(a)] +=
        (t_now - s[static_cast<std::size_t>(a)]) * w[static_cast<std::size_t>(a)];
    s[static_cast<std::size_t>(a)] = t_now;
    w[static_cast<std::size_t>(a)] += delta;
  };

  Rng rng(rng_seed);
  std::vector<std::size_t> order(usable.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  double t_now = 0.0;
  std::vector<std::string> feats;

  for (int it = 0; it < iterations; ++it) {
    rng.shuffle(order);
    for (std::size_t si : order) {
      const DepTree& sent = *usable[si];
      const int n = sent.size();
      std::vector<int> pending(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n; ++i)
        if (sent.heads[static_cast<std::size_t>(i)] >= 0)
          ++pending[static_cast<std::size_t>(sent.heads[static_cast<std::size_t>(i)])];
      ParseState st(n);
      while (!st.done()) {
        t_now += 1.0;
        parser_features(st, sent.forms, sent.upos, feats);
        int gold = oracle_transition(st, sent.heads, pending);
        if (!st.can(gold))
          throw std::runtime_error("train_parser: oracle stuck (bad tree)");
        int pred = best_valid(model, st, feats);
        if (pred != gold) {
          for (const std::string& f : feats) {
            update(f, gold, 1.0, t_now);
            update(f, pred, -1.0, t_now);
          }
        }
        if (gold != kShift) {
          int child = gold == kLeftArc ? st.stack[st.stack.size() - 2]
                                       : st.stack[st.stack.size() - 1];
          --pending[static_cast<std::size_t>(sent.heads[static_cast<std::size_t>(child)])];
        }
        st.apply(gold);
      }
    }
  }
  for (auto& [f, w] : model.weights) {
    auto& ac = acc[f];
    auto& s = stamp[f];
    for (int a = 0; a < 3; ++a) {
      ac[static_cast<std::size_t>(a)] +=
          (t_now - s[static_cast<std::size_t>(a)]) * w[static_cast<std::size_t>(a)];
      w[static_cast<std::size_t>(a)] = ac[static_cast<std::size_t>(a)] / t_now;
    }
  }
  return model;
}

std::vector<int> parse_heads(const ParserModel& parser,
                             const std::vector<std::string>& forms,
                             const std::vector<std::string>& upos) {
  if (forms.empty()) throw std::runtime_error("parse_heads: empty sentence");
  ParseState st(static_cast<int>(forms.size()));
  std::vector<std::string> feats;
  while (!st.done()) {
    parser_features(st, forms, upos, feats);
    int a = best_valid(parser, st, feats);
    st.apply(a);
  }
  return st.heads;
}

DepTree parse_sentence(const ParserModel& parser, const TaggerModel& tagger,
                       const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw std::runtime_error("parse_sentence: empty input");
  DepTree t;
  t.forms = tokens;
  t.upos = tag_sentence(tagger, tokens);
  t.heads = parse_heads(parser, t.forms, t.upos);
  return t;
}

std::pair<int, int> subtree_span(const DepTree& tree, int node) {
  if (node < 0 || node >= tree.size())
    throw std::out_of_range("subtree_span: bad node index");
  auto ch = children_of(tree);
  int lo = node, hi = node;
  std::vector<int> stack = {node};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    for (int c : ch[static_cast<std::size_t>(v)]) stack.push_back(c);
  }
  return {lo, hi + 1};
}

std::vector<DepTree> synthesize_treebank(int n, std::uint64_t rng_seed) {
  if (n < 1) throw std::invalid_argument("synthesize_treebank: n must be >= 1");
  Rng rng(rng_seed);
  std::vector<DepTree> trees;
  trees.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    synthlang::Clause c = synthlang::sample_treebank_clause(rng);
    DepTree t;
    t.forms = std::move(c.forms);
    t.upos = std::move(c.upos);
    t.heads = std::move(c.heads);
    trees.push_back(std::move(t));
  }
  return trees;
}

double parser_uas(const ParserModel& parser, const TaggerModel& tagger,
                  const std::vector<DepTree>& gold) {
  long correct = 0, total = 0;
  for (const DepTree& g : gold) {
    DepTree pred = parse_sentence(parser, tagger, g.forms);
    for (int i = 0; i < g.size(); ++i) {
      if (pred.heads[static_cast<std::size_t>(i)] == g.heads[static_cast<std::size_t>(i)])
        ++correct;
      ++total;
    }
  }
  return total > 0 ? static_cast<double>(correct) / static_cast<double>(total)
                   : 0.0;
}

namespace {

NamedTensor map_to_tensor(
    const std::string& name, const std::vector<std::string>& features,
    const std::unordered_map<std::string, std::vector<double>>& weights,
    int classes) {
  NamedTensor t;
  t.name = name;
  t.dims = {static_cast<std::uint64_t>(features.size()),
            static_cast<std::uint64_t>(classes)};
  t.data.reserve(features.size() * static_cast<std::size_t>(classes));
  for (const std::string& f : features) {
    const auto& w = weights.at(f);
    for (int c = 0; c < classes; ++c) t.data.push_back(w[static_cast<std::size_t>(c)]);
  }
  return t;
}

}  // namespace

void save_parser(const ParserModel& parser, const TaggerModel& tagger,
                 const std::string& path, const nlohmann::json& extra_meta) {
  Checkpoint ckpt;
  ckpt.vocab_hash = fnv1a("");  // parser checkpoints carry no vocabulary

  std::vector<std::string> tfeats;
  for (const auto& [f, w] : tagger.weights) {
    (void)w;
    tfeats.push_back(f);
  }
  std::sort(tfeats.begin(), tfeats.end());
  ckpt.tensors.push_back(map_to_tensor("tagger.weights", tfeats, tagger.weights,
                                       static_cast<int>(tagger.tags.size())));

  std::vector<std::string> pfeats;
  std::unordered_map<std::string, std::vector<double>> pweights;
  for (const auto& [f, w] : parser.weights) {
    pfeats.push_back(f);
    pweights[f] = {w[0], w[1], w[2]};
  }
  std::sort(pfeats.begin(), pfeats.end());
  ckpt.tensors.push_back(map_to_tensor("parser.weights", pfeats, pweights, 3));

  ckpt.config["kind"] = "parser";
  ckpt.config["tagger"] = {{"features", tfeats}, {"tags", tagger.tags}};
  ckpt.config["parser"] = {{"features", pfeats},
                           {"transitions", {"SHIFT", "LEFT-ARC", "RIGHT-ARC"}},
                           {"dropped_nonprojective", parser.dropped_nonprojective}};
  for (auto& [k, v] : extra_meta.items()) ckpt.config[k] = v;
  write_checkpoint(ckpt, path);
}

std::pair<ParserModel, TaggerModel> load_parser(const std::string& path) {
  Checkpoint ckpt = read_checkpoint(path);
  if (ckpt.config.value("kind", "") != "parser")
    throw std::runtime_error(path + " is not a parser checkpoint");

  TaggerModel tagger;
  tagger.tags = ckpt.config.at("tagger").at("tags").get<std::vector<std::string>>();
  auto tfeats =
      ckpt.config.at("tagger").at("features").get<std::vector<std::string>>();
  const NamedTensor& tw = ckpt.tensor("tagger.weights");
  if (tw.dims.size() != 2 || tw.dims[0] != tfeats.size() ||
      tw.dims[1] != tagger.tags.size())
    throw std::runtime_error("tagger.weights shape mismatch in " + path);
  const int n_tags = static_cast<int>(tagger.tags.size());
  for (std::size_t i = 0; i < tfeats.size(); ++i) {
    std::vector<double> w(static_cast<std::size_t>(n_tags));
    for (int c = 0; c < n_tags; ++c)
      w[static_cast<std::size_t>(c)] = tw.data[i * static_cast<std::size_t>(n_tags) + static_cast<std::size_t>(c)];
    tagger.weights[tfeats[i]] = std::move(w);
  }

  ParserModel parser;
  auto pfeats =
      ckpt.config.at("parser").at("features").get<std::vector<std::string>>();
  const NamedTensor& pw = ckpt.tensor("parser.weights");
  if (pw.dims.size() != 2 || pw.dims[0] != pfeats.size() || pw.dims[1] != 3)
    throw std::runtime_error("parser.weights shape mismatch in " + path);
  for (std::size_t i = 0; i < pfeats.size(); ++i)
    parser.weights[pfeats[i]] = {pw.data[i * 3], pw.data[i * 3 + 1],
                                 pw.data[i * 3 + 2]};
  parser.dropped_nonprojective =
      ckpt.config.at("parser").value("dropped_nonprojective", 0L);
  return {std::move(parser), std::move(tagger)};
}

}  // namespace rkit
