#include "rkit/lime.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rkit/util.h"

namespace rkit {

namespace {

struct TypeIndex {
  std::vector<std::string> types;      // first-occurrence order
  std::vector<int> first_positions;   // per type
  std::vector<int> type_of_token;     // per token
};

TypeIndex index_types(const Post& post) {
  TypeIndex ti;
  std::unordered_map<std::string, int> seen;
  for (int t = 0; t < static_cast<int>(post.tokens.size()); ++t) {
    const std::string& w = post.tokens[static_cast<std::size_t>(t)].lower;
    auto it = seen.find(w);
    if (it == seen.end()) {
      int id = static_cast<int>(ti.types.size());
      seen.emplace(w, id);
      ti.types.push_back(w);
      ti.first_positions.push_back(t);
      ti.type_of_token.push_back(id);
    } else {
      ti.type_of_token.push_back(it->second);
    }
  }
  return ti;
}

std::vector<std::string> apply_mask(const TypeIndex& ti,
                                    const std::vector<std::uint8_t>& mask) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < ti.type_of_token.size(); ++t)
    if (mask[static_cast<std::size_t>(ti.type_of_token[t])]) out.push_back(ti.types[static_cast<std::size_t>(ti.type_of_token[t])]);
  return out;
}

}  // namespace

std::vector<LimeSample> perturb(const Post& post, int n,
                                std::uint64_t rng_seed) {
  if (post.tokens.empty()) throw std::runtime_error("perturb: empty post");
  if (n < 1) throw std::invalid_argument("perturb: n must be >= 1");
  TypeIndex ti = index_types(post);
  const int K = static_cast<int>(ti.types.size());
  Rng rng(rng_seed);

  std::vector<LimeSample> samples;
  LimeSample identity;
  identity.mask.assign(static_cast<std::size_t>(K), 1);
  identity.tokens = apply_mask(ti, identity.mask);
  samples.push_back(std::move(identity));

  if (K == 1) {
    if (n >= 2) {
      LimeSample empty;
      empty.mask.assign(1, 0);
      samples.push_back(std::move(empty));
    }
    return samples;
  }

  std::vector<int> type_ids(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) type_ids[static_cast<std::size_t>(i)] = i;
  for (int s = 1; s < n; ++s) {
    long n_del = rng.uniform_int(1, K - 1);
    std::vector<int> pool = type_ids;
    rng.shuffle(pool);
    LimeSample ls;
    ls.mask.assign(static_cast<std::size_t>(K), 1);
    for (long i = 0; i < n_del; ++i)
      ls.mask[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])] = 0;
    ls.tokens = apply_mask(ti, ls.mask);
    samples.push_back(std::move(ls));
  }
  return samples;
}

LocalSurrogate explain_instance(const BlackBox& black_box, const Post& post,
                                const LimeConfig& config) {
  if (config.num_samples < 10)
    throw std::invalid_argument("lime: num_samples must be >= 10");
  TypeIndex ti = index_types(post);
  const int K = static_cast<int>(ti.types.size());
  std::vector<LimeSample> samples =
      perturb(post, config.num_samples, config.rng_seed);
  const int N = static_cast<int>(samples.size());

  double kw = config.kernel_width > 0.0
                  ? config.kernel_width
                  : 0.75 * std::sqrt(static_cast<double>(K));

  Eigen::MatrixXd X(N, K + 1);
  Eigen::VectorXd y(N), w(N);
  for (int i = 0; i < N; ++i) {
    const LimeSample& s = samples[static_cast<std::size_t>(i)];
    double ones = 0.0;
    X(i, 0) = 1.0;
    for (int j = 0; j < K; ++j) {
      X(i, j + 1) = s.mask[static_cast<std::size_t>(j)];
      ones += s.mask[static_cast<std::size_t>(j)];
    }
    double cos_sim = ones > 0.0 ? std::sqrt(ones / static_cast<double>(K)) : 0.0;
    double dist = 1.0 - cos_sim;
    w[i] = std::exp(-(dist * dist) / (kw * kw));
    y[i] = black_box(s.tokens);
  }

  // weighted ridge with unpenalized intercept
  Eigen::MatrixXd Xw = w.asDiagonal() * X;
  Eigen::MatrixXd A = X.transpose() * Xw;
  for (int j = 1; j <= K; ++j) A(j, j) += config.ridge_l2;
  Eigen::VectorXd rhs = Xw.transpose() * y;
  Eigen::VectorXd beta = A.ldlt().solve(rhs);

  LocalSurrogate out;
  out.types = ti.types;
  out.first_positions = ti.first_positions;
  out.intercept = beta[0];
  out.importance = beta.tail(K);

  Eigen::VectorXd pred = X * beta;
  double wsum = w.sum();
  double ybar = w.dot(y) / wsum;
  double ss_res = (w.array() * (y - pred).array().square()).sum();
  double ss_tot = (w.array() * (y.array() - ybar).square()).sum();
  out.r2 = ss_tot < 1e-18 ? 0.0 : 1.0 - ss_res / ss_tot;
  return out;
}

SeedSet lime_seeds(const BlackBox& black_box, const Post& post, int k,
                   const LimeConfig& config) {
  if (k < 1) throw std::invalid_argument("lime_seeds: k must be >= 1");
  SeedSet out;
  out.k_requested = k;
  out.mechanism = "lime";
  if (post.tokens.empty()) return out;

  LocalSurrogate sur = explain_instance(black_box, post, config);
  std::vector<Seed> ranked;
  for (int j = 0; j < static_cast<int>(sur.types.size()); ++j)
    if (sur.importance[j] > 0.0)
      ranked.push_back({sur.first_positions[static_cast<std::size_t>(j)],
                        sur.importance[j]});
  std::sort(ranked.begin(), ranked.end(), [](const Seed& a, const Seed& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position < b.position;
  });
  if (static_cast<int>(ranked.size()) > k)
    ranked.resize(static_cast<std::size_t>(k));
  out.seeds = std::move(ranked);
  return out;
}

}  // namespace rkit
