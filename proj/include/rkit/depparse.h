#ifndef RKIT_DEPPARSE_H
#define RKIT_DEPPARSE_H

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace rkit {

struct DepTree {
  std::vector<std::string> forms;
  std::vector<std::string> upos;
  std::vector<int> heads;  // -1 marks the root

  int size() const { return static_cast<int>(forms.size()); }
  int root() const;
  // every node's descendant set occupies a contiguous index interval
  bool is_projective() const;
  // single root, connected, acyclic; throws on violation
  void validate() const;
};

// 10-column CoNLL-U; multiword ranges and empty nodes are skipped, comments
// ignored. Non-projective trees are accepted (callers test is_projective());
// structural errors carry line numbers.
std::vector<DepTree> read_conllu(const std::string& path);
void write_conllu(const std::vector<DepTree>& trees, const std::string& path);

struct TaggerModel {
  std::vector<std::string> tags;  // sorted inventory
  std::unordered_map<std::string, std::vector<double>> weights;
};

TaggerModel train_tagger(const std::vector<DepTree>& treebank, int iterations,
                         std::uint64_t rng_seed);
std::vector<std::string> tag_sentence(const TaggerModel& tagger,
                                      const std::vector<std::string>& forms);

// Greedy arc-standard transitions: SHIFT, LEFT-ARC, RIGHT-ARC.
struct ParserModel {
  std::unordered_map<std::string, std::array<double, 3>> weights;
  long dropped_nonprojective = 0;  // training-time count
};

ParserModel train_parser(const std::vector<DepTree>& treebank, int iterations,
                         std::uint64_t rng_seed);

std::vector<int> parse_heads(const ParserModel& parser,
                             const std::vector<std::string>& forms,
                             const std::vector<std::string>& upos);
DepTree parse_sentence(const ParserModel& parser, const TaggerModel& tagger,
                       const std::vector<std::string>& tokens);

// Minimal token interval [start, end) covering node and its descendants;
// equals the descendant set exactly on projective trees.
std::pair<int, int> subtree_span(const DepTree& tree, int node);

// Single-clause sentences from the shared abstract grammar, with gold tags
// and heads.
std::vector<DepTree> synthesize_treebank(int n, std::uint64_t rng_seed);

// Full-pipeline unlabeled attachment score against gold trees.
double parser_uas(const ParserModel& parser, const TaggerModel& tagger,
                  const std::vector<DepTree>& gold);

void save_parser(const ParserModel& parser, const TaggerModel& tagger,
                 const std::string& path,
                 const nlohmann::json& extra_meta = nlohmann::json::object());
std::pair<ParserModel, TaggerModel> load_parser(const std::string& path);

}  // namespace rkit

#endif  // RKIT_DEPPARSE_H
