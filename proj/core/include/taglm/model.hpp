#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "taglm/lstm.hpp"
#include "taglm/tokenizer.hpp"

namespace taglm {

struct ModelDims {
  int vocab = 0;
  int embed = 32;
  int hidden = 128;
  int layers = 2;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Embedding -> stacked LSTM -> dense softmax head.
struct ModelParams {
  Matrix embedding;  // vocab x embed
  std::vector<LstmLayerParams> layers;
  Matrix w_out;  // vocab x hidden
  Vector b_out;  // vocab

  static ModelParams zeros(const ModelDims& dims);
  ModelDims dims() const;
  /// Throws DimensionMismatch if the layers do not chain.
  void validate() const;
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases except the
/// forget gate bias, which starts at +1.
ModelParams init_params(const ModelDims& dims, std::uint64_t seed);

/// A named, flat (column-major) view of one parameter array. The order of
/// param_groups() is fixed and shared by the optimizer, checkpoints and the
/// gradient check.
struct ParamGroup {
  std::string name;
  std::span<double> values;
};
struct ConstParamGroup {
  std::string name;
  std::span<const double> values;
};
std::vector<ParamGroup> param_groups(ModelParams& p);
std::vector<ConstParamGroup> param_groups(const ModelParams& p);

bool bitwise_equal(const ModelParams& a, const ModelParams& b);

/// One row per sequence position, one column per vocabulary entry.
using ProbMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Activations of a batched forward pass; columns of every matrix are batch
/// members.
struct ForwardCache {
  std::vector<std::vector<int>> tokens;      // [batch][t]
  std::vector<std::vector<CellCache>> cells;  // [layer][t]
  std::vector<Matrix> probs;                  // [t] vocab x batch

  Eigen::Index batch() const noexcept { return static_cast<Eigen::Index>(tokens.size()); }
  std::size_t steps() const noexcept { return probs.size(); }
  ProbMatrix prob_matrix(Eigen::Index member) const;
};

/// Runs every sequence of the batch through the network. Row t of the output
/// distribution for a member is the prediction for its t-th target token.
/// Sequences must share one length. Throws DimensionMismatch.
ForwardCache forward_batch(std::span<const TokenSeq> batch, const ModelParams& p);

struct ForwardPass {
  ProbMatrix probs;
  ForwardCache cache;
};
ForwardPass forward(const TokenSeq& tokens, const ModelParams& p);

/// Exact gradients of batch_loss() via backpropagation through time.
ModelParams backward(const ModelParams& p, const ForwardCache& cache, std::span<const TokenSeq> targets, double penalty);

}  // namespace taglm
