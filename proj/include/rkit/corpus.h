#ifndef RKIT_CORPUS_H
#define RKIT_CORPUS_H

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rkit {

struct Token {
  std::string surface;
  std::string lower;       // byte-wise ASCII case fold of surface
  int sent_index = 0;
  std::size_t char_start = 0;  // byte offsets into the raw post
  std::size_t char_end = 0;
};

// A token range [start, end) in post coordinates.
using TokenRange = std::pair<int, int>;

struct Post {
  std::string id;
  std::string raw;
  std::vector<Token> tokens;
  std::optional<int> label;                  // 0/1
  std::optional<TokenRange> gold_explanation;

  int num_sentences() const;
  // token interval [start, end) of sentence s
  TokenRange sentence_range(int s) const;
  std::vector<std::string> lower_tokens() const;
  std::vector<std::string> surface_tokens() const;
};

// Rule tokenizer: splits on whitespace, breaks punctuation characters
// into single-character tokens, keeps contraction apostrophes attached
// (an apostrophe stays inside a word when flanked by word characters).
// Sentence boundary after '.', '!', '?' or a newline.
std::vector<Token> tokenize(const std::string& raw);

// Joins with single spaces except before punctuation tokens and after
// apostrophe tokens.
std::string detokenize(const std::vector<std::string>& tokens);

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocabulary();
  static Vocabulary build(const std::vector<Post>& posts, int min_count);
  // Rebuild from an index-ordered token list (slots 0/1 are <pad>/<unk>).
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  int index_of(const std::string& lower) const;  // kUnk when absent
  const std::string& token(int index) const;
  std::size_t size() const { return index_to_token_.size(); }
  long count(const std::string& lower) const;

  const std::vector<std::string>& tokens() const { return index_to_token_; }
  // FNV-1a over the index-ordered tokens joined by '\n'.
  std::uint64_t hash() const;

 private:
  std::unordered_map<std::string, int> token_to_index_;
  std::vector<std::string> index_to_token_;
  std::unordered_map<std::string, long> counts_;
};

struct EncodedPost {
  std::vector<int> ids;  // length max_len, PAD-filled past true_length
  int true_length = 0;
};

EncodedPost encode(const Post& post, const Vocabulary& vocab, int max_len);

std::pair<std::vector<Post>, std::vector<Post>> split(
    const std::vector<Post>& posts, double val_fraction, std::uint64_t rng_seed);

// Template-grammar corpus over an abstract vocabulary; every label-1 post
// carries a gold explanation covering its trigger clause.
std::vector<Post> synthesize_corpus(int n, double crisis_rate,
                                    std::uint64_t rng_seed);

// JSON-lines dataset: {id, text, label?, explanation?}. The loader
// re-tokenizes text and resolves explanation (a verbatim substring,
// first occurrence on ambiguity) to a token range.
std::vector<Post> load_jsonl(const std::string& path);
// meta_json, when nonempty, is written first as its own line (an object
// carrying a "_meta" key, skipped by the loader).
void write_jsonl(const std::vector<Post>& posts, const std::string& path,
                 const std::string& meta_json = "");

// Builds a Post from raw text (tokenize + bookkeeping).
Post make_post(std::string id, std::string raw,
               std::optional<int> label = std::nullopt);

}  // namespace rkit

#endif  // RKIT_CORPUS_H
