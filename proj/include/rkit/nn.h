#ifndef RKIT_NN_H
#define RKIT_NN_H

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rkit/corpus.h"
#include "rkit/embed.h"

namespace rkit {

// All parameters are stored as MatrixXd (vectors as n-by-1, scalars as
// 1-by-1) so optimizer, checkpointing and finite-difference checks can walk
// them uniformly.
struct GruParams {
  Eigen::MatrixXd Wz, Wr, Wc;  // hidden x input
  Eigen::MatrixXd Uz, Ur, Uc;  // hidden x hidden
  Eigen::MatrixXd bz, br, bc;  // hidden x 1
  int hidden() const { return static_cast<int>(Wz.rows()); }
  int input() const { return static_cast<int>(Wz.cols()); }
};

struct AttentionParams {
  Eigen::MatrixXd Ww;  // 1 x 2H, scores one contextual vector to a scalar
  Eigen::MatrixXd bw;  // 1 x 1
};

enum class Architecture { kBiAttention, kForwardLast };
std::string architecture_name(Architecture a);
Architecture architecture_from_name(const std::string& name);

struct ModelConfig {
  int embed_dim = 200;
  int hidden = 100;  // per direction
  int max_len = 150;
  double dropout_rate = 0.1;
  double attention_l2_lambda = 1e-4;
  double learning_rate = 1e-3;
  int batch_size = 256;
  int epochs = 20;
  Architecture architecture = Architecture::kBiAttention;
  std::uint64_t rng_seed = 1;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

struct ModelParams {
  Eigen::MatrixXd transform;  // embed_dim x embed_dim, no bias
  GruParams fwd;
  GruParams bwd;         // empty for forward_last
  AttentionParams attn;  // empty for forward_last
  Eigen::MatrixXd out_w;  // (2H or H) x 1
  Eigen::MatrixXd out_b;  // 1 x 1
};

struct AttentionModel {
  ModelConfig config;
  EmbeddingTable embed;  // frozen, |V| x D
  ModelParams params;
};

// Fixed walk order over the trainable parameters of the architecture.
std::vector<std::pair<std::string, Eigen::MatrixXd*>> param_refs(
    ModelParams& p, Architecture arch);
std::vector<std::pair<std::string, const Eigen::MatrixXd*>> param_refs(
    const ModelParams& p, Architecture arch);

AttentionModel init_model(const ModelConfig& config,
                          const EmbeddingTable& embed);

Eigen::VectorXd gru_step(const GruParams& params, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& h_prev);

// Contextual vectors [h_fwd; h_bwd] for positions < true_length.
std::vector<Eigen::VectorXd> encode_bi(const AttentionModel& model,
                                       const EncodedPost& post);

struct AttendResult {
  Eigen::VectorXd u;       // tanh scores, one per position
  Eigen::VectorXd alphas;  // softmax of u
  Eigen::VectorXd d;       // sum_t alpha_t h_t
};
AttendResult attend(const AttentionParams& params,
                    const std::vector<Eigen::VectorXd>& hbi);

struct Prediction {
  double p = 0.0;
  std::optional<Eigen::VectorXd> alphas;
};
Prediction predict(const AttentionModel& model, const EncodedPost& post);

// Logistic loss with optional attention L2 penalty; p is clamped to
// [1e-12, 1 - 1e-12] before the logs.
double loss(double p, int y, const Eigen::VectorXd* alphas, double lambda);

struct Example {
  EncodedPost x;
  int y = 0;
};

// d(mean batch loss)/d(theta) for every parameter, dropout disabled.
ModelParams gradients(const AttentionModel& model,
                      const std::vector<Example>& batch);

// Loss of one sample as differentiated by gradients(); exposed for
// finite-difference checking. dropout_mask, when given, is applied to the
// document vector (inverted-dropout scaling baked into the mask).
double forward_loss(const AttentionModel& model, const EncodedPost& post,
                    int y, const Eigen::VectorXd* dropout_mask = nullptr);

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_precision = 0.0, val_recall = 0.0, val_f1 = 0.0;
};

struct TrainResult {
  AttentionModel model;  // snapshot of the best epoch by validation F1
  std::vector<EpochStats> log;
  int best_epoch = 0;
};

TrainResult train(const ModelConfig& config, const EmbeddingTable& embed,
                  const Vocabulary& vocab, const std::vector<Post>& train_posts,
                  const std::vector<Post>& val_posts);

// Checkpoint binding (shared container, see checkpoint.h). The vocabulary
// and the frozen embedding table ride along so a checkpoint predicts on its
// own.
void save_model(const AttentionModel& model, const Vocabulary& vocab,
                const std::string& path,
                const nlohmann::json& extra_meta = nlohmann::json::object());
std::pair<AttentionModel, Vocabulary> load_model(const std::string& path);

}  // namespace rkit

#endif  // RKIT_NN_H
