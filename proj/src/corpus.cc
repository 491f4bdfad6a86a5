#include "rkit/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rkit/util.h"
#include "synthlang.h"

namespace rkit {

namespace {

bool is_ws(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Non-ASCII bytes count as word material; punctuation is ASCII-only.
bool is_word_char(unsigned char c) {
  if (c >= 0x80) return true;
  return std::isalnum(c) != 0;
}

bool is_punct_char(unsigned char c) { return c < 0x80 && std::ispunct(c); }

std::string ascii_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  return out;
}

bool is_terminator(const std::string& tok) {
  return tok == "." || tok == "!" || tok == "?";
}

}  // namespace

std::vector<Token> tokenize(const std::string& raw) {
  std::vector<Token> tokens;
  const std::size_t n = raw.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(raw[i]);
    if (is_ws(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_word_char(c)) {
      while (i < n) {
        unsigned char d = static_cast<unsigned char>(raw[i]);
        if (is_word_char(d)) {
          ++i;
        } else if (d == '\'' && i > start && i + 1 < n &&
                   is_word_char(static_cast<unsigned char>(raw[i + 1]))) {
          // contraction apostrophe stays inside the word
          ++i;
        } else {
          break;
        }
      }
    } else {
      ++i;  // single punctuation character
    }
    Token t;
    t.surface = raw.substr(start, i - start);
    t.lower = ascii_lower(t.surface);
    t.char_start = start;
    t.char_end = i;
    tokens.push_back(std::move(t));
  }

  int sent = 0;
  bool pending = false;
  std::size_t prev_end = 0;
  for (Token& t : tokens) {
    for (std::size_t k = prev_end; k < t.char_start; ++k)
      if (raw[k] == '\n') pending = true;
    bool term = is_terminator(t.surface);
    if (pending && !term) {
      ++sent;
      pending = false;
    }
    t.sent_index = sent;
    if (term) pending = true;
    prev_end = t.char_end;
  }
  return tokens;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (i > 0) {
      bool punct = tok.size() == 1 &&
                   is_punct_char(static_cast<unsigned char>(tok[0]));
      bool after_apos = tokens[i - 1] == "'";
      if (!punct && !after_apos) out += ' ';
    }
    out += tok;
  }
  return out;
}

int Post::num_sentences() const {
  return tokens.empty() ? 0 : tokens.back().sent_index + 1;
}

TokenRange Post::sentence_range(int s) const {
  int start = -1, end = -1;
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    if (tokens[static_cast<std::size_t>(i)].sent_index == s) {
      if (start < 0) start = i;
      end = i + 1;
    }
  }
  if (start < 0) throw std::out_of_range("sentence index out of range");
  return {start, end};
}

std::vector<std::string> Post::lower_tokens() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.lower);
  return out;
}

std::vector<std::string> Post::surface_tokens() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.surface);
  return out;
}

Post make_post(std::string id, std::string raw, std::optional<int> label) {
  Post p;
  p.id = std::move(id);
  p.raw = std::move(raw);
  p.tokens = tokenize(p.raw);
  p.label = label;
  return p;
}

Vocabulary::Vocabulary() {
  index_to_token_ = {"<pad>", "<unk>"};
  token_to_index_ = {{"<pad>", kPad}, {"<unk>", kUnk}};
}

Vocabulary Vocabulary::build(const std::vector<Post>& posts, int min_count) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  Vocabulary v;
  for (const Post& p : posts)
    for (const Token& t : p.tokens) ++v.counts_[t.lower];
  std::vector<std::pair<std::string, long>> items;
  for (const auto& [tok, cnt] : v.counts_)
    if (cnt >= min_count) items.emplace_back(tok, cnt);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [tok, cnt] : items) {
    (void)cnt;
    v.token_to_index_[tok] = static_cast<int>(v.index_to_token_.size());
    v.index_to_token_.push_back(tok);
  }
  return v;
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  if (tokens.size() < 2 || tokens[0] != "<pad>" || tokens[1] != "<unk>")
    throw std::runtime_error("vocabulary list must start with <pad>, <unk>");
  Vocabulary v;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (v.token_to_index_.count(tokens[i]))
      throw std::runtime_error("duplicate vocabulary token: " + tokens[i]);
    v.token_to_index_[tokens[i]] = static_cast<int>(i);
    v.index_to_token_.push_back(tokens[i]);
  }
  return v;
}

int Vocabulary::index_of(const std::string& lower) const {
  auto it = token_to_index_.find(lower);
  return it == token_to_index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int index) const {
  if (index < 0 || index >= static_cast<int>(index_to_token_.size()))
    throw std::out_of_range("vocabulary index out of range");
  return index_to_token_[static_cast<std::size_t>(index)];
}

long Vocabulary::count(const std::string& lower) const {
  auto it = counts_.find(lower);
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < index_to_token_.size(); ++i) {
    if (i > 0) h = fnv1a("\n", h);
    h = fnv1a(index_to_token_[i], h);
  }
  return h;
}

EncodedPost encode(const Post& post, const Vocabulary& vocab, int max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  EncodedPost e;
  e.true_length = std::min<int>(static_cast<int>(post.tokens.size()), max_len);
  e.ids.assign(static_cast<std::size_t>(max_len), Vocabulary::kPad);
  for (int t = 0; t < e.true_length; ++t)
    e.ids[static_cast<std::size_t>(t)] =
        vocab.index_of(post.tokens[static_cast<std::size_t>(t)].lower);
  return e;
}

std::pair<std::vector<Post>, std::vector<Post>> split(
    const std::vector<Post>& posts, double val_fraction,
    std::uint64_t rng_seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw std::invalid_argument("val_fraction must be in (0, 1)");
  const long n = static_cast<long>(posts.size());
  if (n < 2) throw std::runtime_error("corpus too small to split (< 2 posts)");
  long n_val = std::llround(static_cast<double>(n) * val_fraction);
  n_val = std::max(1L, std::min(n - 1, n_val));

  std::vector<std::size_t> idx(posts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(rng_seed);
  rng.shuffle(idx);
  std::vector<std::size_t> val_idx(idx.begin(), idx.begin() + n_val);
  std::vector<std::size_t> train_idx(idx.begin() + n_val, idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  std::pair<std::vector<Post>, std::vector<Post>> out;
  for (std::size_t i : train_idx) out.first.push_back(posts[i]);
  for (std::size_t i : val_idx) out.second.push_back(posts[i]);
  return out;
}

std::vector<Post> synthesize_corpus(int n, double crisis_rate,
                                    std::uint64_t rng_seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(crisis_rate > 0.0 && crisis_rate < 1.0))
    throw std::invalid_argument("crisis_rate must be in (0, 1)");
  using synthlang::Clause;
  using synthlang::ClauseKind;

  Rng rng(rng_seed);
  std::vector<Post> posts;
  posts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    long n_bg = rng.uniform_int(1, 5);
    std::vector<Clause> clauses;
    for (long k = 0; k < n_bg; ++k)
      clauses.push_back(
          sample_clause(rng, ClauseKind::kNeutral,
                        rng.bernoulli(synthlang::kNeutralNegationRate)));

    bool crisis = rng.bernoulli(crisis_rate);
    int trigger_at = -1;
    if (crisis) {
      trigger_at = static_cast<int>(rng.uniform_int(0, n_bg));
      clauses.insert(clauses.begin() + trigger_at,
                     sample_clause(rng, ClauseKind::kTrigger, false));
    } else if (rng.bernoulli(0.2)) {
      long at = rng.uniform_int(0, n_bg);
      clauses.insert(clauses.begin() + at,
                     sample_clause(rng, ClauseKind::kTrigger, true));
    }

    std::vector<std::string> forms;
    int gold_start = -1, gold_end = -1;
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      if (static_cast<int>(c) == trigger_at) {
        gold_start = static_cast<int>(forms.size());
        // the trigger clause minus its final period
        gold_end = gold_start + static_cast<int>(clauses[c].forms.size()) - 1;
      }
      forms.insert(forms.end(), clauses[c].forms.begin(),
                   clauses[c].forms.end());
    }

    std::ostringstream id;
    id << "synth-" << rng_seed << "-" << i;
    Post p = make_post(id.str(), detokenize(forms), crisis ? 1 : 0);
    if (crisis) p.gold_explanation = TokenRange{gold_start, gold_end};
    posts.push_back(std::move(p));
  }
  return posts;
}

std::vector<Post> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::vector<Post> posts;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad JSON: " + e.what());
    }
    if (j.contains("_meta")) continue;  // artifact metadata line
    if (!j.contains("id") || !j.contains("text"))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": missing id or text");
    Post p = make_post(j.at("id").get<std::string>(),
                       j.at("text").get<std::string>());
    if (j.contains("label") && !j.at("label").is_null()) {
      int lab = j.at("label").get<int>();
      if (lab != 0 && lab != 1)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": label must be 0 or 1");
      p.label = lab;
    }
    if (j.contains("explanation") && !j.at("explanation").is_null()) {
      std::string expl = j.at("explanation").get<std::string>();
      if (p.label != 1)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": explanation requires label 1 (id " +
                                 p.id + ")");
      std::size_t pos = p.raw.find(expl);
      if (pos == std::string::npos || expl.empty())
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": explanation is not a substring of text "
                                 "(id " + p.id + ")");
      std::size_t lo = pos, hi = pos + expl.size();
      int start = -1, end = -1;
      for (int t = 0; t < static_cast<int>(p.tokens.size()); ++t) {
        const Token& tok = p.tokens[static_cast<std::size_t>(t)];
        if (tok.char_start < hi && tok.char_end > lo) {
          if (start < 0) start = t;
          end = t + 1;
        }
      }
      if (start < 0)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": explanation covers no tokens (id " +
                                 p.id + ")");
      p.gold_explanation = TokenRange{start, end};
    }
    posts.push_back(std::move(p));
  }
  return posts;
}

void write_jsonl(const std::vector<Post>& posts, const std::string& path,
                 const std::string& meta_json) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  if (!meta_json.empty()) out << meta_json << "\n";
  for (const Post& p : posts) {
    nlohmann::json j;
    j["id"] = p.id;
    j["text"] = p.raw;
    if (p.label) j["label"] = *p.label;
    if (p.gold_explanation) {
      auto [s, e] = *p.gold_explanation;
      std::size_t lo = p.tokens[static_cast<std::size_t>(s)].char_start;
      std::size_t hi = p.tokens[static_cast<std::size_t>(e - 1)].char_end;
      j["explanation"] = p.raw.substr(lo, hi - lo);
    }
    out << j.dump() << "\n";
  }
}

}  // namespace rkit
