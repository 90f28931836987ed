#pragma once

#include <span>

#include "taglm/model.hpp"

namespace taglm {

inline constexpr double kLogClamp = 1e-12;

/// Sum over positions and classes of  -y log p + a (1 - y) p  with y the
/// one-hot target. log p is clamped at kLogClamp.
double penalized_cross_entropy(const ProbMatrix& probs, std::span<const int> target, double penalty);

/// Single-position loss for one probability column.
double position_loss(const Eigen::Ref<const Vector>& probs, int target, double penalty);

/// d(position_loss)/d(logits) for a softmax output column.
Vector logit_gradient(const Eigen::Ref<const Vector>& probs, int target, double penalty);

/// Mean over batch members of penalized_cross_entropy.
double batch_loss(const ForwardCache& cache, std::span<const TokenSeq> targets, double penalty);

}  // namespace taglm
