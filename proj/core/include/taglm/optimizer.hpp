#pragma once

#include <string_view>

#include "taglm/model.hpp"

namespace taglm {

enum class OptimizerKind { Sgd, Adam };

std::string_view to_string(OptimizerKind kind);
/// Accepts "sgd" or "adam". Throws ConfigError.
OptimizerKind optimizer_from_string(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First and second moment estimates for Adam; unused by SGD.
struct OptimizerState {
  ModelParams first_moment;
  ModelParams second_moment;
  long long step = 0;

  static OptimizerState for_params(const ModelParams& params);
};

/// SGD: theta -= lr * g. Adam: bias-corrected moment update.
void optimizer_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, const OptimizerConfig& cfg);

}  // namespace taglm
