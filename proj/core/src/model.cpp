#include "taglm/model.hpp"

#include <cmath>
#include <cstring>
#include <random>

#include "taglm/errors.hpp"
#include "taglm/loss.hpp"

namespace taglm {
namespace {

void fill_uniform(Matrix& m, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = dist(rng);
}

template <typename Group, typename Params>
std::vector<Group> collect_groups(Params& p) {
  std::vector<Group> out;
  auto add = [&](std::string name, auto& array) { out.push_back({std::move(name), {array.data(), static_cast<std::size_t>(array.size())}}); };
  add("embedding", p.embedding);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& layer = p.layers[l];
    const std::string prefix = "layer" + std::to_string(l) + ".";
    add(prefix + "w_forget", layer.w_forget);
    add(prefix + "w_input", layer.w_input);
    add(prefix + "w_candidate", layer.w_candidate);
    add(prefix + "w_output", layer.w_output);
    add(prefix + "b_forget", layer.b_forget);
    add(prefix + "b_input", layer.b_input);
    add(prefix + "b_candidate", layer.b_candidate);
    add(prefix + "b_output", layer.b_output);
  }
  add("w_out", p.w_out);
  add("b_out", p.b_out);
  return out;
}

void softmax_columns(Matrix& logits) {
  for (Eigen::Index b = 0; b < logits.cols(); ++b) {
    auto col = logits.col(b);
    col.array() -= col.maxCoeff();
    col = col.array().exp().matrix();
    col /= col.sum();
  }
}

}  // namespace

ModelParams ModelParams::zeros(const ModelDims& d) {
  if (d.vocab <= 0 || d.embed <= 0 || d.hidden <= 0 || d.layers <= 0) {
    throw DimensionMismatch("model dimensions must be positive");
  }
  ModelParams p;
  p.embedding = Matrix::Zero(d.vocab, d.embed);
  for (int l = 0; l < d.layers; ++l) p.layers.push_back(LstmLayerParams::zeros(d.hidden, l == 0 ? d.embed : d.hidden));
  p.w_out = Matrix::Zero(d.vocab, d.hidden);
  p.b_out = Vector::Zero(d.vocab);
  return p;
}

ModelDims ModelParams::dims() const {
  return {static_cast<int>(embedding.rows()), static_cast<int>(embedding.cols()),
          layers.empty() ? 0 : static_cast<int>(layers.front().hidden_size()), static_cast<int>(layers.size())};
}

void ModelParams::validate() const {
  if (layers.empty()) throw DimensionMismatch("model has no LSTM layers");
  Eigen::Index input = embedding.cols();
  for (const auto& layer : layers) {
    layer.validate();
    if (layer.input_size() != input) throw DimensionMismatch("LSTM layer input size does not match the layer below");
    input = layer.hidden_size();
  }
  if (w_out.rows() != embedding.rows() || w_out.cols() != input || b_out.size() != embedding.rows()) {
    throw DimensionMismatch("output head does not map hidden -> vocab");
  }
}

ModelParams init_params(const ModelDims& dims, std::uint64_t seed) {
  ModelParams p = ModelParams::zeros(dims);
  std::mt19937_64 rng(seed);
  // Embedding lookups see a one-hot input, so their fan-in is 1.
  fill_uniform(p.embedding, 1.0, rng);
  for (auto& layer : p.layers) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.w_forget.cols()));
    for (Matrix* w : {&layer.w_forget, &layer.w_input, &layer.w_candidate, &layer.w_output}) fill_uniform(*w, scale, rng);
    layer.b_forget.setOnes();
  }
  fill_uniform(p.w_out, 1.0 / std::sqrt(static_cast<double>(dims.hidden)), rng);
  return p;
}

std::vector<ParamGroup> param_groups(ModelParams& p) { return collect_groups<ParamGroup>(p); }
std::vector<ConstParamGroup> param_groups(const ModelParams& p) { return collect_groups<ConstParamGroup>(p); }

bool bitwise_equal(const ModelParams& a, const ModelParams& b) {
  if (!(a.dims() == b.dims())) return false;
  const auto ga = param_groups(a);
  const auto gb = param_groups(b);
  for (std::size_t i = 0; i < ga.size(); ++i) {
    if (ga[i].values.size() != gb[i].values.size()) return false;
    if (std::memcmp(ga[i].values.data(), gb[i].values.data(), ga[i].values.size_bytes()) != 0) return false;
  }
  return true;
}

ProbMatrix ForwardCache::prob_matrix(Eigen::Index member) const {
  const Eigen::Index vocab = probs.empty() ? 0 : probs.front().rows();
  ProbMatrix out(static_cast<Eigen::Index>(probs.size()), vocab);
  for (std::size_t t = 0; t < probs.size(); ++t) out.row(static_cast<Eigen::Index>(t)) = probs[t].col(member).transpose();
  return out;
}

ForwardCache forward_batch(std::span<const TokenSeq> batch, const ModelParams& p) {
  p.validate();
  if (batch.empty()) throw DimensionMismatch("empty batch");
  const std::size_t steps = batch.front().size();
  const auto vocab = p.embedding.rows();
  const auto B = static_cast<Eigen::Index>(batch.size());
  const auto hidden = p.layers.front().hidden_size();

  ForwardCache cache;
  for (const auto& seq : batch) {
    if (seq.size() != steps) throw DimensionMismatch("batch sequences differ in length");
    for (int tok : seq.tokens) {
      if (tok < 0 || tok >= vocab) throw DimensionMismatch("token " + std::to_string(tok) + " outside vocabulary");
    }
    cache.tokens.push_back(seq.tokens);
  }
  cache.cells.assign(p.layers.size(), std::vector<CellCache>(steps));
  cache.probs.resize(steps);

  const LstmState initial{Matrix::Zero(hidden, B), Matrix::Zero(hidden, B)};
  Matrix x(p.embedding.cols(), B);
  for (std::size_t t = 0; t < steps; ++t) {
    for (Eigen::Index b = 0; b < B; ++b) x.col(b) = p.embedding.row(cache.tokens[b][t]).transpose();
    const Matrix* input = &x;
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
      const LstmState prev = t == 0 ? initial : cache.cells[l][t - 1].state();
      cache.cells[l][t] = lstm_cell_forward(*input, prev, p.layers[l]);
      input = &cache.cells[l][t].h;
    }
    Matrix logits = p.w_out * *input;
    logits.colwise() += p.b_out;
    softmax_columns(logits);
    cache.probs[t] = std::move(logits);
  }
  return cache;
}

ForwardPass forward(const TokenSeq& tokens, const ModelParams& p) {
  ForwardPass out;
  out.cache = forward_batch(std::span<const TokenSeq>(&tokens, 1), p);
  out.probs = out.cache.prob_matrix(0);
  return out;
}

ModelParams backward(const ModelParams& p, const ForwardCache& cache, std::span<const TokenSeq> targets, double penalty) {
  const auto B = cache.batch();
  const std::size_t steps = cache.steps();
  if (static_cast<Eigen::Index>(targets.size()) != B) throw DimensionMismatch("target count differs from batch size");
  for (const auto& t : targets) {
    if (t.size() != steps) throw DimensionMismatch("target length differs from input length");
  }

  ModelParams grads = ModelParams::zeros(p.dims());
  const auto vocab = p.embedding.rows();
  const double scale = 1.0 / static_cast<double>(B);
  const std::size_t top = p.layers.size() - 1;

  std::vector<Matrix> dh_above(steps);
  Matrix dlogits(vocab, B);
  for (std::size_t t = 0; t < steps; ++t) {
    for (Eigen::Index b = 0; b < B; ++b) {
      dlogits.col(b) = logit_gradient(cache.probs[t].col(b), targets[b].tokens[t], penalty) * scale;
    }
    const Matrix& h = cache.cells[top][t].h;
    grads.w_out.noalias() += dlogits * h.transpose();
    grads.b_out += dlogits.rowwise().sum();
    dh_above[t].noalias() = p.w_out.transpose() * dlogits;
  }

  for (std::size_t l = p.layers.size(); l-- > 0;) {
    const auto hidden = p.layers[l].hidden_size();
    Matrix dh_next = Matrix::Zero(hidden, B);
    Matrix dc_next = Matrix::Zero(hidden, B);
    std::vector<Matrix> dx(steps);
    for (std::size_t t = steps; t-- > 0;) {
      const Matrix dh = dh_above[t] + dh_next;
      auto g = lstm_cell_backward(cache.cells[l][t], dh, dc_next, p.layers[l], grads.layers[l]);
      dh_next = std::move(g.dh_prev);
      dc_next = std::move(g.dc_prev);
      dx[t] = std::move(g.dx);
    }
    dh_above = std::move(dx);
  }

  for (std::size_t t = 0; t < steps; ++t) {
    for (Eigen::Index b = 0; b < B; ++b) {
      grads.embedding.row(cache.tokens[b][t]) += dh_above[t].col(b).transpose();
    }
  }
  return grads;
}

}  // namespace taglm
