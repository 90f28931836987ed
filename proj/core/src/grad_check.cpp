#include "taglm/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "taglm/loss.hpp"

namespace taglm {

bool GradCheckReport::passed() const { return failing_groups().empty(); }

std::vector<std::string> GradCheckReport::failing_groups() const {
  std::vector<std::string> out;
  for (const auto& g : groups) {
    if (!(g.max_rel_error < tolerance)) out.push_back(g.name);
  }
  return out;
}

double GradCheckReport::max_rel_error() const {
  double m = 0.0;
  for (const auto& g : groups) m = std::max(m, g.max_rel_error);
  return m;
}

GradCheckReport grad_check(const GradCheckOptions& opt, double tolerance) {
  ModelParams params = init_params(opt.dims, opt.seed);
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  // Biases start at constants; randomise them so every path carries signal.
  std::uniform_real_distribution<double> bias(-0.5, 0.5);
  for (auto& layer : params.layers) {
    for (Vector* b : {&layer.b_forget, &layer.b_input, &layer.b_candidate, &layer.b_output}) {
      for (Eigen::Index k = 0; k < b->size(); ++k) (*b)[k] += bias(rng);
    }
  }
  for (Eigen::Index k = 0; k < params.b_out.size(); ++k) params.b_out[k] = bias(rng);

  std::uniform_int_distribution<int> token(0, opt.dims.vocab - 1);
  std::vector<TokenSeq> inputs(opt.batch), targets(opt.batch);
  for (int b = 0; b < opt.batch; ++b) {
    for (int t = 0; t < opt.steps; ++t) {
      inputs[b].tokens.push_back(token(rng));
      targets[b].tokens.push_back(token(rng));
    }
  }

  auto loss_at = [&](const ModelParams& p) { return batch_loss(forward_batch(inputs, p), targets, opt.penalty); };

  ModelParams analytic = backward(params, forward_batch(inputs, params), targets, opt.penalty);
  if (opt.tamper) opt.tamper(analytic);

  GradCheckReport report;
  report.tolerance = tolerance;
  auto groups = param_groups(params);
  const auto analytic_groups = param_groups(std::as_const(analytic));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    GradCheckGroup result{groups[g].name, 0.0, 0};
    auto values = groups[g].values;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + opt.epsilon;
      const double up = loss_at(params);
      values[k] = saved - opt.epsilon;
      const double down = loss_at(params);
      values[k] = saved;

      const double numeric = (up - down) / (2.0 * opt.epsilon);
      const double exact = analytic_groups[g].values[k];
      const double denom = std::max({std::abs(numeric), std::abs(exact), opt.magnitude_floor});
      const double err = std::abs(numeric - exact) / denom;
      if (err > result.max_rel_error || std::isnan(err)) {
        result.max_rel_error = std::isnan(err) ? INFINITY : err;
        result.worst_index = k;
      }
    }
    report.groups.push_back(std::move(result));
  }
  return report;
}

}  // namespace taglm
