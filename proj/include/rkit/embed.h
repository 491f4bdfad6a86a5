#ifndef RKIT_EMBED_H
#define RKIT_EMBED_H

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rkit/corpus.h"

namespace rkit {

struct EmbeddingTable {
  // row i = vector for vocabulary index i; PAD row is all zeros
  Eigen::MatrixXd table;
  int dim() const { return static_cast<int>(table.cols()); }
};

struct EmbeddingLoadStats {
  long matched = 0;        // vocabulary words found in the file
  long skipped_lines = 0;  // lines with wrong arity
};

// Text format: "word v1 ... vD" per line, space separated. Vocabulary words
// missing from the file, and UNK, get the element-wise mean of the loaded
// vectors; PAD stays zero. Files ending in .gz are decompressed on the fly.
EmbeddingTable load_embeddings(const std::string& path, const Vocabulary& vocab,
                               int dim, EmbeddingLoadStats* stats = nullptr);

// Seeded random embedding file for an abstract vocabulary (synthetic runs).
void write_random_embeddings(const std::string& path,
                             const std::vector<std::string>& words, int dim,
                             std::uint64_t rng_seed);

}  // namespace rkit

#endif  // RKIT_EMBED_H
