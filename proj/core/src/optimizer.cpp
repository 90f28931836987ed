#include "taglm/optimizer.hpp"

#include <cmath>

#include "taglm/errors.hpp"

namespace taglm {

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::Sgd ? "sgd" : "adam"; }

OptimizerKind optimizer_from_string(std::string_view name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "adam") return OptimizerKind::Adam;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected sgd or adam)");
}

OptimizerState OptimizerState::for_params(const ModelParams& params) {
  return {ModelParams::zeros(params.dims()), ModelParams::zeros(params.dims()), 0};
}

void optimizer_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, const OptimizerConfig& cfg) {
  auto p = param_groups(params);
  const auto g = param_groups(grads);
  if (p.size() != g.size()) throw DimensionMismatch("gradient shape differs from parameters");
  ++state.step;

  if (cfg.kind == OptimizerKind::Sgd) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k].values.size() != g[k].values.size()) throw DimensionMismatch("gradient shape differs in " + p[k].name);
      for (std::size_t j = 0; j < p[k].values.size(); ++j) p[k].values[j] -= cfg.learning_rate * g[k].values[j];
    }
    return;
  }

  auto m = param_groups(state.first_moment);
  auto v = param_groups(state.second_moment);
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k].values.size() != g[k].values.size() || m[k].values.size() != g[k].values.size()) {
      throw DimensionMismatch("gradient shape differs in " + p[k].name);
    }
    for (std::size_t j = 0; j < p[k].values.size(); ++j) {
      const double grad = g[k].values[j];
      double& mj = m[k].values[j];
      double& vj = v[k].values[j];
      mj = cfg.beta1 * mj + (1.0 - cfg.beta1) * grad;
      vj = cfg.beta2 * vj + (1.0 - cfg.beta2) * grad * grad;
      const double m_hat = mj / correction1;
      const double v_hat = vj / correction2;
      p[k].values[j] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace taglm
