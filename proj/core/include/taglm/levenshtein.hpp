#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace taglm {

/// Unit-cost insert/delete/substitute edit distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// The truth string with every edit of one minimal alignment masked by '*'.
/// Substituted and deleted truth characters become '*', and each extra
/// prediction character is rendered as an inserted '*'. When several
/// alignments are minimal the traceback prefers match, then substitution,
/// then deletion, then insertion.
std::string diff_render(std::string_view truth, std::string_view prediction);

}  // namespace taglm
