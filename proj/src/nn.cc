#include "rkit/nn.h"

#include <cmath>

#include "rkit/checkpoint.h"
#include "rkit/eval.h"
#include "rkit/util.h"

namespace rkit {

namespace {

constexpr double kProbClamp = 1e-12;

Eigen::MatrixXd tensor_to_matrix(const NamedTensor& t) {
  if (t.dims.size() != 2)
    throw std::runtime_error("tensor " + t.name + " is not rank 2");
  long rows = static_cast<long>(t.dims[0]);
  long cols = static_cast<long>(t.dims[1]);
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) m(r, c) = t.data[k++];
  return m;
}

NamedTensor matrix_to_tensor(const std::string& name,
                             const Eigen::MatrixXd& m) {
  NamedTensor t;
  t.name = name;
  t.dims = {static_cast<std::uint64_t>(m.rows()),
            static_cast<std::uint64_t>(m.cols())};
  t.data.reserve(static_cast<std::size_t>(m.size()));
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) t.data.push_back(m(r, c));
  return t;
}

struct GruStepCache {
  Eigen::VectorXd h_prev, z, r, c, h;
};

struct Cache {
  int T = 0;
  std::vector<Eigen::VectorXd> x;  // raw embedding rows
  std::vector<Eigen::VectorXd> e;  // transformed inputs
  std::vector<GruStepCache> fwd, bwd;
  std::vector<Eigen::VectorXd> hbi;
  Eigen::VectorXd u, alphas;
  Eigen::VectorXd d, d_drop;
  double logit = 0.0, p = 0.0;
};

Eigen::VectorXd gru_step_cached(const GruParams& p, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& h_prev,
                                GruStepCache* cache) {
  Eigen::VectorXd az = p.Wz * x + p.Uz * h_prev + p.bz.col(0);
  Eigen::VectorXd ar = p.Wr * x + p.Ur * h_prev + p.br.col(0);
  Eigen::VectorXd z = az.unaryExpr([](double v) { return sigmoid(v); });
  Eigen::VectorXd r = ar.unaryExpr([](double v) { return sigmoid(v); });
  Eigen::VectorXd ac =
      p.Wc * x + p.Uc * (r.cwiseProduct(h_prev)) + p.bc.col(0);
  Eigen::VectorXd c = ac.array().tanh();
  Eigen::VectorXd h =
      (1.0 - z.array()) * h_prev.array() + z.array() * c.array();
  if (cache) {
    cache->h_prev = h_prev;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->c = std::move(c);
    cache->h = h;
  }
  return h;
}

// Runs the full forward pass over the non-PAD prefix.
void run_forward(const AttentionModel& model, const EncodedPost& post,
                 const Eigen::VectorXd* dropout_mask, Cache& cache) {
  const int T = post.true_length;
  if (T <= 0) throw std::runtime_error("empty input: nothing to encode");
  const bool bi = model.config.architecture == Architecture::kBiAttention;
  const int H = model.config.hidden;

  cache.T = T;
  cache.x.resize(static_cast<std::size_t>(T));
  cache.e.resize(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    int id = post.ids[static_cast<std::size_t>(t)];
    cache.x[static_cast<std::size_t>(t)] =
        model.embed.table.row(id).transpose();
    cache.e[static_cast<std::size_t>(t)] =
        model.params.transform * cache.x[static_cast<std::size_t>(t)];
  }

  cache.fwd.resize(static_cast<std::size_t>(T));
  Eigen::VectorXd h = Eigen::VectorXd::Zero(H);
  for (int t = 0; t < T; ++t)
    h = gru_step_cached(model.params.fwd, cache.e[static_cast<std::size_t>(t)],
                        h, &cache.fwd[static_cast<std::size_t>(t)]);

  if (bi) {
    cache.bwd.resize(static_cast<std::size_t>(T));
    Eigen::VectorXd hb = Eigen::VectorXd::Zero(H);
    for (int t = T - 1; t >= 0; --t)
      hb = gru_step_cached(model.params.bwd,
                           cache.e[static_cast<std::size_t>(t)], hb,
                           &cache.bwd[static_cast<std::size_t>(t)]);
    cache.hbi.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      Eigen::VectorXd v(2 * H);
      v.head(H) = cache.fwd[static_cast<std::size_t>(t)].h;
      v.tail(H) = cache.bwd[static_cast<std::size_t>(t)].h;
      cache.hbi[static_cast<std::size_t>(t)] = std::move(v);
    }
    // attention: scalar score per position, softmax with max subtraction
    cache.u.resize(T);
    for (int t = 0; t < T; ++t)
      cache.u[t] = std::tanh(
          (model.params.attn.Ww * cache.hbi[static_cast<std::size_t>(t)])(0, 0) +
          model.params.attn.bw(0, 0));
    double m = cache.u.maxCoeff();
    Eigen::VectorXd ex = (cache.u.array() - m).exp();
    cache.alphas = ex / ex.sum();
    cache.d = Eigen::VectorXd::Zero(2 * H);
    for (int t = 0; t < T; ++t)
      cache.d += cache.alphas[t] * cache.hbi[static_cast<std::size_t>(t)];
  } else {
    cache.d = cache.fwd[static_cast<std::size_t>(T - 1)].h;
  }

  cache.d_drop = dropout_mask ? cache.d.cwiseProduct(*dropout_mask) : cache.d;
  cache.logit =
      model.params.out_w.col(0).dot(cache.d_drop) + model.params.out_b(0, 0);
  cache.p = sigmoid(cache.logit);
}

void gru_backward(const GruParams& p, const GruStepCache& s,
                  const Eigen::VectorXd& e, const Eigen::VectorXd& dh,
                  GruParams& g, Eigen::VectorXd& de,
                  Eigen::VectorXd& dh_prev) {
  Eigen::VectorXd dz = dh.cwiseProduct(s.c - s.h_prev);
  Eigen::VectorXd dc = dh.cwiseProduct(s.z);
  dh_prev = dh.cwiseProduct(Eigen::VectorXd::Ones(dh.size()) - s.z);

  Eigen::VectorXd dac =
      dc.array() * (1.0 - s.c.array().square());
  g.Wc += dac * e.transpose();
  g.Uc += dac * (s.r.cwiseProduct(s.h_prev)).transpose();
  g.bc.col(0) += dac;
  Eigen::VectorXd drh = p.Uc.transpose() * dac;
  Eigen::VectorXd dr = drh.cwiseProduct(s.h_prev);
  dh_prev += drh.cwiseProduct(s.r);

  Eigen::VectorXd dar =
      dr.array() * s.r.array() * (1.0 - s.r.array());
  g.Wr += dar * e.transpose();
  g.Ur += dar * s.h_prev.transpose();
  g.br.col(0) += dar;
  dh_prev += p.Ur.transpose() * dar;

  Eigen::VectorXd daz =
      dz.array() * s.z.array() * (1.0 - s.z.array());
  g.Wz += daz * e.transpose();
  g.Uz += daz * s.h_prev.transpose();
  g.bz.col(0) += daz;
  dh_prev += p.Uz.transpose() * daz;

  de = p.Wc.transpose() * dac + p.Wr.transpose() * dar +
       p.Wz.transpose() * daz;
}

// Backpropagates d(scale * sample loss)/d(theta) into g.
void run_backward(const AttentionModel& model, const Cache& cache, int y,
                  const Eigen::VectorXd* dropout_mask, double scale,
                  ModelParams& g) {
  const int T = cache.T;
  const bool bi = model.config.architecture == Architecture::kBiAttention;
  const int H = model.config.hidden;
  const double lambda = model.config.attention_l2_lambda;

  double dlogit = scale * (cache.p - static_cast<double>(y));
  g.out_b(0, 0) += dlogit;
  g.out_w.col(0) += dlogit * cache.d_drop;
  Eigen::VectorXd dd_drop = dlogit * model.params.out_w.col(0);
  Eigen::VectorXd dd =
      dropout_mask ? dd_drop.cwiseProduct(*dropout_mask).eval() : dd_drop;

  std::vector<Eigen::VectorXd> dhf(static_cast<std::size_t>(T),
                                   Eigen::VectorXd::Zero(H));
  std::vector<Eigen::VectorXd> dhb;

  if (bi) {
    dhb.assign(static_cast<std::size_t>(T), Eigen::VectorXd::Zero(H));
    Eigen::VectorXd galpha(T);
    for (int t = 0; t < T; ++t)
      galpha[t] = dd.dot(cache.hbi[static_cast<std::size_t>(t)]) +
                  scale * 2.0 * lambda * cache.alphas[t];
    double mix = (cache.alphas.array() * galpha.array()).sum();
    Eigen::VectorXd du = cache.alphas.array() * (galpha.array() - mix);
    Eigen::VectorXd ds = du.array() * (1.0 - cache.u.array().square());
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd& hbt = cache.hbi[static_cast<std::size_t>(t)];
      g.attn.Ww.row(0) += ds[t] * hbt.transpose();
      g.attn.bw(0, 0) += ds[t];
      Eigen::VectorXd dhbi =
          cache.alphas[t] * dd + ds[t] * model.params.attn.Ww.row(0).transpose();
      dhf[static_cast<std::size_t>(t)] = dhbi.head(H);
      dhb[static_cast<std::size_t>(t)] = dhbi.tail(H);
    }
  } else {
    dhf[static_cast<std::size_t>(T - 1)] = dd;
  }

  std::vector<Eigen::VectorXd> de(static_cast<std::size_t>(T));
  Eigen::VectorXd carry = Eigen::VectorXd::Zero(H);
  for (int t = T - 1; t >= 0; --t) {
    Eigen::VectorXd dh = carry + dhf[static_cast<std::size_t>(t)];
    gru_backward(model.params.fwd, cache.fwd[static_cast<std::size_t>(t)],
                 cache.e[static_cast<std::size_t>(t)], dh, g.fwd,
                 de[static_cast<std::size_t>(t)], carry);
  }
  if (bi) {
    // the backward GRU consumed positions right-to-left, so its BPTT
    // walks positions left-to-right
    carry.setZero();
    for (int t = 0; t < T; ++t) {
      Eigen::VectorXd dh = carry + dhb[static_cast<std::size_t>(t)];
      Eigen::VectorXd de_b;
      gru_backward(model.params.bwd, cache.bwd[static_cast<std::size_t>(t)],
                   cache.e[static_cast<std::size_t>(t)], dh, g.bwd, de_b,
                   carry);
      de[static_cast<std::size_t>(t)] += de_b;
    }
  }
  for (int t = 0; t < T; ++t)
    g.transform +=
        de[static_cast<std::size_t>(t)] * cache.x[static_cast<std::size_t>(t)].transpose();
}

GruParams make_gru(int hidden, int input) {
  GruParams p;
  p.Wz = Eigen::MatrixXd::Zero(hidden, input);
  p.Wr = Eigen::MatrixXd::Zero(hidden, input);
  p.Wc = Eigen::MatrixXd::Zero(hidden, input);
  p.Uz = Eigen::MatrixXd::Zero(hidden, hidden);
  p.Ur = Eigen::MatrixXd::Zero(hidden, hidden);
  p.Uc = Eigen::MatrixXd::Zero(hidden, hidden);
  p.bz = Eigen::MatrixXd::Zero(hidden, 1);
  p.br = Eigen::MatrixXd::Zero(hidden, 1);
  p.bc = Eigen::MatrixXd::Zero(hidden, 1);
  return p;
}

ModelParams make_params(const ModelConfig& cfg) {
  ModelParams p;
  const int D = cfg.embed_dim, H = cfg.hidden;
  const bool bi = cfg.architecture == Architecture::kBiAttention;
  p.transform = Eigen::MatrixXd::Zero(D, D);
  p.fwd = make_gru(H, D);
  if (bi) {
    p.bwd = make_gru(H, D);
    p.attn.Ww = Eigen::MatrixXd::Zero(1, 2 * H);
    p.attn.bw = Eigen::MatrixXd::Zero(1, 1);
  }
  p.out_w = Eigen::MatrixXd::Zero(bi ? 2 * H : H, 1);
  p.out_b = Eigen::MatrixXd::Zero(1, 1);
  return p;
}

ModelParams zero_like(const ModelParams& p, Architecture arch) {
  ModelParams z = p;
  for (auto& [name, mat] : param_refs(z, arch)) {
    (void)name;
    mat->setZero();
  }
  return z;
}

bool is_bias_name(const std::string& name) {
  return name == "output.b" || name == "attention.b_w" ||
         name.find(".b_") != std::string::npos;
}

}  // namespace

std::string architecture_name(Architecture a) {
  return a == Architecture::kBiAttention ? "bi_attention" : "forward_last";
}

Architecture architecture_from_name(const std::string& name) {
  if (name == "bi_attention") return Architecture::kBiAttention;
  if (name == "forward_last") return Architecture::kForwardLast;
  throw std::runtime_error("unknown architecture: " + name);
}

nlohmann::json ModelConfig::to_json() const {
  return {{"embed_dim", embed_dim},
          {"hidden", hidden},
          {"max_len", max_len},
          {"dropout_rate", dropout_rate},
          {"attention_l2_lambda", attention_l2_lambda},
          {"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"architecture", architecture_name(architecture)},
          {"rng_seed", rng_seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.embed_dim = j.at("embed_dim").get<int>();
  c.hidden = j.at("hidden").get<int>();
  c.max_len = j.at("max_len").get<int>();
  c.dropout_rate = j.at("dropout_rate").get<double>();
  c.attention_l2_lambda = j.at("attention_l2_lambda").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.architecture = architecture_from_name(j.at("architecture").get<std::string>());
  c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  return c;
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> param_refs(
    ModelParams& p, Architecture arch) {
  std::vector<std::pair<std::string, Eigen::MatrixXd*>> refs;
  refs.emplace_back("transform", &p.transform);
  auto add_gru = [&](const std::string& prefix, GruParams& g) {
    refs.emplace_back(prefix + ".W_z", &g.Wz);
    refs.emplace_back(prefix + ".W_r", &g.Wr);
    refs.emplace_back(prefix + ".W_c", &g.Wc);
    refs.emplace_back(prefix + ".U_z", &g.Uz);
    refs.emplace_back(prefix + ".U_r", &g.Ur);
    refs.emplace_back(prefix + ".U_c", &g.Uc);
    refs.emplace_back(prefix + ".b_z", &g.bz);
    refs.emplace_back(prefix + ".b_r", &g.br);
    refs.emplace_back(prefix + ".b_c", &g.bc);
  };
  add_gru("gru_fwd", p.fwd);
  if (arch == Architecture::kBiAttention) {
    add_gru("gru_bwd", p.bwd);
    refs.emplace_back("attention.W_w", &p.attn.Ww);
    refs.emplace_back("attention.b_w", &p.attn.bw);
  }
  refs.emplace_back("output.w", &p.out_w);
  refs.emplace_back("output.b", &p.out_b);
  return refs;
}

std::vector<std::pair<std::string, const Eigen::MatrixXd*>> param_refs(
    const ModelParams& p, Architecture arch) {
  auto refs = param_refs(const_cast<ModelParams&>(p), arch);
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> out;
  out.reserve(refs.size());
  for (auto& [name, mat] : refs) out.emplace_back(name, mat);
  return out;
}

AttentionModel init_model(const ModelConfig& config,
                          const EmbeddingTable& embed) {
  if (embed.dim() != config.embed_dim)
    throw std::runtime_error("embedding table dim does not match config");
  AttentionModel m;
  m.config = config;
  m.embed = embed;
  m.params = make_params(config);
  Rng rng(config.rng_seed);
  for (auto& [name, mat] : param_refs(m.params, config.architecture)) {
    if (is_bias_name(name)) continue;  // biases start at zero
    double* ptr = mat->data();
    for (long i = 0; i < mat->size(); ++i) ptr[i] = rng.uniform(-0.08, 0.08);
  }
  return m;
}

Eigen::VectorXd gru_step(const GruParams& params, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& h_prev) {
  if (params.Wz.cols() != x.size() || params.Uz.cols() != h_prev.size() ||
      params.Wz.rows() != h_prev.size())
    throw std::runtime_error("gru_step: dimension mismatch");
  return gru_step_cached(params, x, h_prev, nullptr);
}

std::vector<Eigen::VectorXd> encode_bi(const AttentionModel& model,
                                       const EncodedPost& post) {
  if (model.config.architecture != Architecture::kBiAttention)
    throw std::runtime_error("encode_bi requires the bi_attention architecture");
  Cache cache;
  run_forward(model, post, nullptr, cache);
  return cache.hbi;
}

AttendResult attend(const AttentionParams& params,
                    const std::vector<Eigen::VectorXd>& hbi) {
  if (hbi.empty()) throw std::runtime_error("attend: empty sequence");
  const int T = static_cast<int>(hbi.size());
  AttendResult res;
  res.u.resize(T);
  for (int t = 0; t < T; ++t)
    res.u[t] = std::tanh((params.Ww * hbi[static_cast<std::size_t>(t)])(0, 0) +
                         params.bw(0, 0));
  double m = res.u.maxCoeff();
  Eigen::VectorXd ex = (res.u.array() - m).exp();
  res.alphas = ex / ex.sum();
  res.d = Eigen::VectorXd::Zero(hbi[0].size());
  for (int t = 0; t < T; ++t)
    res.d += res.alphas[t] * hbi[static_cast<std::size_t>(t)];
  return res;
}

Prediction predict(const AttentionModel& model, const EncodedPost& post) {
  Cache cache;
  run_forward(model, post, nullptr, cache);
  Prediction pred;
  pred.p = cache.p;
  if (model.config.architecture == Architecture::kBiAttention)
    pred.alphas = cache.alphas;
  return pred;
}

double loss(double p, int y, const Eigen::VectorXd* alphas, double lambda) {
  double pc = std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
  double l = -static_cast<double>(y) * std::log(pc) -
             (1.0 - static_cast<double>(y)) * std::log(1.0 - pc);
  if (alphas) l += lambda * alphas->array().square().sum();
  return l;
}

double forward_loss(const AttentionModel& model, const EncodedPost& post,
                    int y, const Eigen::VectorXd* dropout_mask) {
  Cache cache;
  run_forward(model, post, dropout_mask, cache);
  const Eigen::VectorXd* alphas =
      model.config.architecture == Architecture::kBiAttention ? &cache.alphas
                                                              : nullptr;
  return loss(cache.p, y, alphas, model.config.attention_l2_lambda);
}

ModelParams gradients(const AttentionModel& model,
                      const std::vector<Example>& batch) {
  if (batch.empty()) throw std::runtime_error("gradients: empty batch");
  ModelParams g = zero_like(model.params, model.config.architecture);
  double scale = 1.0 / static_cast<double>(batch.size());
  for (const Example& ex : batch) {
    Cache cache;
    run_forward(model, ex.x, nullptr, cache);
    run_backward(model, cache, ex.y, nullptr, scale, g);
  }
  return g;
}

TrainResult train(const ModelConfig& config, const EmbeddingTable& embed,
                  const Vocabulary& vocab, const std::vector<Post>& train_posts,
                  const std::vector<Post>& val_posts) {
  if (train_posts.empty() || val_posts.empty())
    throw std::runtime_error("train: need nonempty train and validation sets");

  auto encode_all = [&](const std::vector<Post>& posts) {
    std::vector<Example> out;
    out.reserve(posts.size());
    for (const Post& p : posts) {
      if (!p.label)
        throw std::runtime_error("train: post " + p.id + " has no label");
      if (p.tokens.empty())
        throw std::runtime_error("train: post " + p.id + " is empty");
      out.push_back({encode(p, vocab, config.max_len), *p.label});
    }
    return out;
  };
  std::vector<Example> train_set = encode_all(train_posts);
  std::vector<Example> val_set = encode_all(val_posts);

  AttentionModel model = init_model(config, embed);
  Rng rng(config.rng_seed ^ 0x5DEECE66DULL);  // separate stream from init
  ModelParams cache = zero_like(model.params, config.architecture);
  const int d_dim = static_cast<int>(model.params.out_w.rows());

  TrainResult result;
  result.model = model;
  double best_f1 = -1.0;

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      double scale = 1.0 / static_cast<double>(stop - start);
      ModelParams grads = zero_like(model.params, config.architecture);
      for (std::size_t k = start; k < stop; ++k) {
        const Example& ex = train_set[order[k]];
        Eigen::VectorXd mask;
        const Eigen::VectorXd* mask_ptr = nullptr;
        if (config.dropout_rate > 0.0) {
          mask.resize(d_dim);
          for (int i = 0; i < d_dim; ++i)
            mask[i] = rng.uniform() < config.dropout_rate
                          ? 0.0
                          : 1.0 / (1.0 - config.dropout_rate);
          mask_ptr = &mask;
        }
        Cache c;
        run_forward(model, ex.x, mask_ptr, c);
        const Eigen::VectorXd* alphas =
            config.architecture == Architecture::kBiAttention ? &c.alphas
                                                              : nullptr;
        loss_sum += loss(c.p, ex.y, alphas, config.attention_l2_lambda);
        run_backward(model, c, ex.y, mask_ptr, scale, grads);
      }
      if (!std::isfinite(loss_sum))
        throw std::runtime_error(
            "training diverged: non-finite loss at epoch " +
            std::to_string(epoch));
      // RMSprop: cache = 0.9 cache + 0.1 g^2; theta -= lr g / (sqrt(cache)+eps)
      auto prefs = param_refs(model.params, config.architecture);
      auto grefs = param_refs(grads, config.architecture);
      auto crefs = param_refs(cache, config.architecture);
      for (std::size_t i = 0; i < prefs.size(); ++i) {
        Eigen::MatrixXd& th = *prefs[i].second;
        Eigen::MatrixXd& g = *grefs[i].second;
        Eigen::MatrixXd& cc = *crefs[i].second;
        cc = 0.9 * cc.array() + 0.1 * g.array().square();
        th.array() -=
            config.learning_rate * g.array() / (cc.array().sqrt() + 1e-8);
      }
    }

    std::vector<std::pair<int, double>> val_pairs;
    val_pairs.reserve(val_set.size());
    for (const Example& ex : val_set) {
      Cache c;
      run_forward(model, ex.x, nullptr, c);
      val_pairs.emplace_back(ex.y, c.p);
    }
    DetectionReport rep = detection_report(val_pairs, 0.5);

    EpochStats st;
    st.epoch = epoch;
    st.train_loss = loss_sum / static_cast<double>(train_set.size());
    st.val_precision = rep.precision;
    st.val_recall = rep.recall;
    st.val_f1 = rep.f1;
    result.log.push_back(st);

    if (rep.f1 > best_f1) {  // ties keep the earlier epoch
      best_f1 = rep.f1;
      result.model.params = model.params;
      result.best_epoch = epoch;
    }
  }
  return result;
}

void save_model(const AttentionModel& model, const Vocabulary& vocab,
                const std::string& path, const nlohmann::json& extra_meta) {
  Checkpoint ckpt;
  ckpt.vocab_hash = vocab.hash();
  ckpt.tensors.push_back(matrix_to_tensor("embed.table", model.embed.table));
  for (const auto& [name, mat] :
       param_refs(model.params, model.config.architecture))
    ckpt.tensors.push_back(matrix_to_tensor(name, *mat));
  ckpt.config["kind"] = "neural";
  ckpt.config["model_config"] = model.config.to_json();
  ckpt.config["vocab"] = vocab.tokens();
  for (auto& [k, v] : extra_meta.items()) ckpt.config[k] = v;
  write_checkpoint(ckpt, path);
}

std::pair<AttentionModel, Vocabulary> load_model(const std::string& path) {
  Checkpoint ckpt = read_checkpoint(path);
  if (ckpt.config.value("kind", "") != "neural")
    throw std::runtime_error(path + " is not a neural checkpoint");
  Vocabulary vocab = Vocabulary::from_tokens(
      ckpt.config.at("vocab").get<std::vector<std::string>>());
  if (vocab.hash() != ckpt.vocab_hash)
    throw std::runtime_error("vocabulary hash mismatch in " + path);

  AttentionModel model;
  model.config = ModelConfig::from_json(ckpt.config.at("model_config"));
  model.embed.table = tensor_to_matrix(ckpt.tensor("embed.table"));
  if (model.embed.table.rows() != static_cast<long>(vocab.size()) ||
      model.embed.table.cols() != model.config.embed_dim)
    throw std::runtime_error("embedding table shape mismatch in " + path);
  model.params = make_params(model.config);
  for (auto& [name, mat] : param_refs(model.params, model.config.architecture)) {
    Eigen::MatrixXd loaded = tensor_to_matrix(ckpt.tensor(name));
    if (loaded.rows() != mat->rows() || loaded.cols() != mat->cols())
      throw std::runtime_error("tensor shape mismatch for " + name + " in " +
                               path);
    *mat = std::move(loaded);
  }
  return {std::move(model), std::move(vocab)};
}

}  // namespace rkit
