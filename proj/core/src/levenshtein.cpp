#include "taglm/levenshtein.hpp"

#include <algorithm>
#include <vector>

namespace taglm {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string diff_render(std::string_view truth, std::string_view pred) {
  const std::size_t n = truth.size(), m = pred.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = at(i - 1, j - 1) + (truth[i - 1] == pred[j - 1] ? 0 : 1);
      at(i, j) = std::min({sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  // Traceback from the end, emitting in reverse.
  std::string out;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0 && truth[i - 1] == pred[j - 1] && at(i - 1, j - 1) == here) {
      out.push_back(truth[i - 1]);
      --i;
      --j;
    } else if (i > 0 && j > 0 && at(i - 1, j - 1) + 1 == here) {
      out.push_back('*');
      --i;
      --j;
    } else if (i > 0 && at(i - 1, j) + 1 == here) {
      out.push_back('*');
      --i;
    } else {
      out.push_back('*');
      --j;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace taglm
