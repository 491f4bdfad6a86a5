#ifndef RKIT_VIZ_H
#define RKIT_VIZ_H

#include <string>
#include <vector>

#include "rkit/corpus.h"
#include "rkit/seeds.h"

namespace rkit {

// Self-contained HTML heatmap: one row per post, each token shaded by
// alpha_t / max_t alpha_t. Requires a bi_attention model.
void write_attention_html(const NeuralDetector& detector,
                          const std::vector<Post>& posts,
                          const std::string& path,
                          const std::string& meta_json = "");

}  // namespace rkit

#endif  // RKIT_VIZ_H
