#include "taglm/loss.hpp"

#include <algorithm>
#include <cmath>

#include "taglm/errors.hpp"

namespace taglm {

double position_loss(const Eigen::Ref<const Vector>& probs, int target, double penalty) {
  if (target < 0 || target >= probs.size()) throw DimensionMismatch("target token outside vocabulary");
  double loss = -std::log(std::clamp(probs[target], kLogClamp, 1.0));
  if (penalty != 0.0) loss += penalty * (probs.sum() - probs[target]);
  return loss;
}

Vector logit_gradient(const Eigen::Ref<const Vector>& probs, int target, double penalty) {
  if (target < 0 || target >= probs.size()) throw DimensionMismatch("target token outside vocabulary");
  // Cross-entropy part: p - y, or nothing once the clamp is active.
  Vector g = Vector::Zero(probs.size());
  if (probs[target] >= kLogClamp) {
    g = probs;
    g[target] -= 1.0;
  }
  if (penalty != 0.0) {
    // d/dz_k of a * sum_{j != t} p_j  =  a * p_k * ((1 - y_k) - (1 - p_t))
    const double off_target = 1.0 - probs[target];
    for (Eigen::Index k = 0; k < probs.size(); ++k) {
      const double not_target = k == target ? 0.0 : 1.0;
      g[k] += penalty * probs[k] * (not_target - off_target);
    }
  }
  return g;
}

double penalized_cross_entropy(const ProbMatrix& probs, std::span<const int> target, double penalty) {
  if (static_cast<std::size_t>(probs.rows()) != target.size()) {
    throw DimensionMismatch("probability rows differ from target length");
  }
  double total = 0.0;
  for (Eigen::Index t = 0; t < probs.rows(); ++t) {
    const Vector row = probs.row(t).transpose();
    total += position_loss(row, target[t], penalty);
  }
  return total;
}

double batch_loss(const ForwardCache& cache, std::span<const TokenSeq> targets, double penalty) {
  if (static_cast<Eigen::Index>(targets.size()) != cache.batch()) {
    throw DimensionMismatch("target count differs from batch size");
  }
  double total = 0.0;
  for (Eigen::Index b = 0; b < cache.batch(); ++b) {
    double member = 0.0;
    for (std::size_t t = 0; t < cache.steps(); ++t) {
      member += position_loss(cache.probs[t].col(b), targets[b].tokens[t], penalty);
    }
    total += member;
  }
  return total / static_cast<double>(cache.batch());
}

}  // namespace taglm
