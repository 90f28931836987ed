#pragma once

#include <Eigen/Dense>

namespace taglm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Gate parameters of one LSTM layer. Every weight matrix is
/// hidden x (hidden + input) and multiplies the stacked column [h_{t-1}; x_t].
struct LstmLayerParams {
  Matrix w_forget, w_input, w_candidate, w_output;
  Vector b_forget, b_input, b_candidate, b_output;

  static LstmLayerParams zeros(Eigen::Index hidden, Eigen::Index input);
  Eigen::Index hidden_size() const noexcept { return w_forget.rows(); }
  Eigen::Index input_size() const noexcept { return w_forget.cols() - w_forget.rows(); }
  /// Throws DimensionMismatch unless all four gates agree.
  void validate() const;
};

/// Hidden and cell state. Each column is one sequence of a batch.
struct LstmState {
  Matrix h;
  Matrix c;
};

/// Everything one cell step produces; backward needs all of it.
struct CellCache {
  Matrix x, h_prev, c_prev;
  Matrix forget, input, candidate, output;
  Matrix c, tanh_c, h;

  LstmState state() const { return {h, c}; }
};

struct CellGradient {
  Matrix dx, dh_prev, dc_prev;
};

/// One step of the gated recurrence:
///   f = sigmoid(W_f [h;x] + b_f)     i = sigmoid(W_i [h;x] + b_i)
///   g = tanh(W_C [h;x] + b_C)        o = sigmoid(W_o [h;x] + b_o)
///   c' = f * c + i * g               h' = o * tanh(c')
/// Throws DimensionMismatch.
CellCache lstm_cell_forward(const Matrix& x, const LstmState& prev, const LstmLayerParams& p);

/// Backpropagates `dh` (loss gradient w.r.t. this step's h, from above and
/// from the future) and `dc` (from the future) through one step, accumulating
/// parameter gradients into `grads`.
CellGradient lstm_cell_backward(const CellCache& cache, const Matrix& dh, const Matrix& dc, const LstmLayerParams& p,
                                LstmLayerParams& grads);

}  // namespace taglm
