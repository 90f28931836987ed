#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "taglm/model.hpp"

namespace taglm {

struct GradCheckOptions {
  ModelDims dims{5, 3, 4, 1};
  int steps = 6;
  int batch = 1;
  double epsilon = 1e-4;
  double penalty = 1.0;
  std::uint64_t seed = 1;
  // Entries whose analytic and numeric magnitudes are both below this are
  // compared absolutely instead of relatively.
  double magnitude_floor = 1e-7;
  // Applied to the analytic gradients before comparison (fault injection).
  std::function<void(ModelParams&)> tamper;
};

struct GradCheckGroup {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
};

struct GradCheckReport {
  std::vector<GradCheckGroup> groups;
  double tolerance = 0.0;

  bool passed() const;
  std::vector<std::string> failing_groups() const;
  double max_rel_error() const;
};

/// Compares backward() against central finite differences on a random model
/// with random input and target sequences. A group passes when its max error
/// is strictly below `tolerance`.
GradCheckReport grad_check(const GradCheckOptions& options, double tolerance);

}  // namespace taglm
