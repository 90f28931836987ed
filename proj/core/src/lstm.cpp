#include "taglm/lstm.hpp"

#include <string>

#include "taglm/errors.hpp"

namespace taglm {
namespace {

Matrix sigmoid(const Matrix& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

Matrix pre_activation(const Matrix& w, const Vector& b, const Matrix& h, const Matrix& x) {
  const auto hidden = w.rows();
  Matrix z = w.leftCols(hidden) * h;
  z.noalias() += w.rightCols(w.cols() - hidden) * x;
  z.colwise() += b;
  return z;
}

void accumulate_gate(const Matrix& dz, const CellCache& c, const Matrix& w, Matrix& dw, Vector& db, Matrix& dh_prev,
                     Matrix& dx) {
  const auto hidden = w.rows();
  const auto input = w.cols() - hidden;
  dw.leftCols(hidden).noalias() += dz * c.h_prev.transpose();
  dw.rightCols(input).noalias() += dz * c.x.transpose();
  db += dz.rowwise().sum();
  dh_prev.noalias() += w.leftCols(hidden).transpose() * dz;
  dx.noalias() += w.rightCols(input).transpose() * dz;
}

}  // namespace

LstmLayerParams LstmLayerParams::zeros(Eigen::Index hidden, Eigen::Index input) {
  LstmLayerParams p;
  for (Matrix* w : {&p.w_forget, &p.w_input, &p.w_candidate, &p.w_output}) *w = Matrix::Zero(hidden, hidden + input);
  for (Vector* b : {&p.b_forget, &p.b_input, &p.b_candidate, &p.b_output}) *b = Vector::Zero(hidden);
  return p;
}

void LstmLayerParams::validate() const {
  const auto rows = w_forget.rows();
  const auto cols = w_forget.cols();
  if (cols <= rows) throw DimensionMismatch("LSTM weights must have more columns than rows");
  for (const Matrix* w : {&w_input, &w_candidate, &w_output}) {
    if (w->rows() != rows || w->cols() != cols) throw DimensionMismatch("LSTM gate weight shapes differ");
  }
  for (const Vector* b : {&b_forget, &b_input, &b_candidate, &b_output}) {
    if (b->size() != rows) throw DimensionMismatch("LSTM gate bias length differs from hidden size");
  }
}

CellCache lstm_cell_forward(const Matrix& x, const LstmState& prev, const LstmLayerParams& p) {
  const auto hidden = p.hidden_size();
  if (x.rows() != p.input_size() || prev.h.rows() != hidden || prev.c.rows() != hidden || prev.h.cols() != x.cols() ||
      prev.c.cols() != x.cols()) {
    throw DimensionMismatch("LSTM cell input " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                            " does not fit layer with input " + std::to_string(p.input_size()) + " and hidden " +
                            std::to_string(hidden));
  }
  CellCache c;
  c.x = x;
  c.h_prev = prev.h;
  c.c_prev = prev.c;
  c.forget = sigmoid(pre_activation(p.w_forget, p.b_forget, prev.h, x));
  c.input = sigmoid(pre_activation(p.w_input, p.b_input, prev.h, x));
  c.candidate = pre_activation(p.w_candidate, p.b_candidate, prev.h, x).array().tanh().matrix();
  c.output = sigmoid(pre_activation(p.w_output, p.b_output, prev.h, x));
  c.c = c.forget.cwiseProduct(prev.c) + c.input.cwiseProduct(c.candidate);
  c.tanh_c = c.c.array().tanh().matrix();
  c.h = c.output.cwiseProduct(c.tanh_c);
  return c;
}

CellGradient lstm_cell_backward(const CellCache& c, const Matrix& dh, const Matrix& dc_next, const LstmLayerParams& p,
                                LstmLayerParams& g) {
  const auto f = c.forget.array();
  const auto i = c.input.array();
  const auto cand = c.candidate.array();
  const auto o = c.output.array();
  const auto tc = c.tanh_c.array();

  const Matrix dc = (dc_next.array() + dh.array() * o * (1.0 - tc.square())).matrix();
  const Matrix dz_o = (dh.array() * tc * o * (1.0 - o)).matrix();
  const Matrix dz_f = (dc.array() * c.c_prev.array() * f * (1.0 - f)).matrix();
  const Matrix dz_i = (dc.array() * cand * i * (1.0 - i)).matrix();
  const Matrix dz_g = (dc.array() * i * (1.0 - cand.square())).matrix();

  CellGradient out;
  out.dh_prev = Matrix::Zero(c.h_prev.rows(), c.h_prev.cols());
  out.dx = Matrix::Zero(c.x.rows(), c.x.cols());
  accumulate_gate(dz_f, c, p.w_forget, g.w_forget, g.b_forget, out.dh_prev, out.dx);
  accumulate_gate(dz_i, c, p.w_input, g.w_input, g.b_input, out.dh_prev, out.dx);
  accumulate_gate(dz_g, c, p.w_candidate, g.w_candidate, g.b_candidate, out.dh_prev, out.dx);
  accumulate_gate(dz_o, c, p.w_output, g.w_output, g.b_output, out.dh_prev, out.dx);
  out.dc_prev = (dc.array() * f).matrix();
  return out;
}

}  // namespace taglm
