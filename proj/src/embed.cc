#include "rkit/embed.h"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rkit/util.h"

namespace rkit {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_maybe_gz(const std::string& path) {
  if (!ends_with(path, ".gz")) return read_file(path);
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::string out;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(n));
  bool bad = n < 0;
  gzclose(f);
  if (bad) throw std::runtime_error("gzip read failed: " + path);
  return out;
}

}  // namespace

EmbeddingTable load_embeddings(const std::string& path, const Vocabulary& vocab,
                               int dim, EmbeddingLoadStats* stats) {
  if (dim <= 0) throw std::invalid_argument("embedding dim must be positive");
  std::string content = read_maybe_gz(path);

  const long V = static_cast<long>(vocab.size());
  EmbeddingTable emb;
  emb.table = Eigen::MatrixXd::Zero(V, dim);
  std::vector<bool> found(static_cast<std::size_t>(V), false);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  long matched = 0, skipped = 0, usable = 0;

  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    Eigen::VectorXd v(dim);
    int got = 0;
    double x;
    while (got < dim && (ls >> x)) v[got++] = x;
    std::string extra;
    if (got != dim || (ls >> extra)) {
      ++skipped;
      continue;
    }
    ++usable;
    int idx = vocab.index_of(word);
    // only exact matches load; first occurrence wins on duplicates
    if (idx >= 2 && vocab.token(idx) == word &&
        !found[static_cast<std::size_t>(idx)]) {
      emb.table.row(idx) = v.transpose();
      found[static_cast<std::size_t>(idx)] = true;
      sum += v;
      ++matched;
    }
  }

  if (usable == 0)
    throw std::runtime_error("no usable embedding lines in " + path +
                             " (dim mismatch or empty file)");
  if (matched == 0)
    throw std::runtime_error("no vocabulary words found in " + path);

  Eigen::VectorXd mean = sum / static_cast<double>(matched);
  emb.table.row(Vocabulary::kUnk) = mean.transpose();
  for (long i = 2; i < V; ++i)
    if (!found[static_cast<std::size_t>(i)]) emb.table.row(i) = mean.transpose();
  // PAD row stays zero

  if (stats) {
    stats->matched = matched;
    stats->skipped_lines = skipped;
  }
  if (skipped > 0)
    std::fprintf(stderr, "warning: skipped %ld malformed embedding lines in %s\n",
                 skipped, path.c_str());
  return emb;
}

void write_random_embeddings(const std::string& path,
                             const std::vector<std::string>& words, int dim,
                             std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  std::ostringstream out;
  char buf[64];
  for (const std::string& w : words) {
    out << w;
    for (int d = 0; d < dim; ++d) {
      std::snprintf(buf, sizeof(buf), " %.6f", rng.uniform(-0.5, 0.5));
      out << buf;
    }
    out << "\n";
  }
  write_file(path, out.str());
}

}  // namespace rkit
