#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taglm {

/// Longest tag accepted anywhere in the pipeline; matches the tokenizer window.
inline constexpr std::size_t kMaxTagLength = 40;

/// A functional-location tag split on '-' into its code segments
/// (project, area, site, train, unit, type, number for equipment tags).
struct ParsedTag {
  std::vector<std::string> segments;
  std::string raw;

  std::size_t size() const noexcept { return segments.size(); }
  friend bool operator==(const ParsedTag&, const ParsedTag&) = default;
};

enum class HierarchyLevel { Project, Site, Section, SubSection, EquipmentUnit, Instrument };

std::string_view to_string(HierarchyLevel level);

/// Uppercases `text`, then validates and splits it. Throws MalformedTag.
ParsedTag parse_tag(std::string_view text);

/// True iff parse_tag would accept `text` (after uppercasing).
bool is_valid_tag(std::string_view text) noexcept;

std::string render_tag(const ParsedTag& tag);

/// Type codes classified as Instrument when they occupy the type segment of a
/// seven-segment tag. Everything else there (W, V, P, PSV, ESDV, ...) is an
/// EquipmentUnit.
const std::set<std::string>& default_instrument_types();

/// Assigns a level from segment count and segment shape. Throws UnknownLevel.
HierarchyLevel classify_level(const ParsedTag& tag,
                              const std::set<std::string>& instrument_types = default_instrument_types());

}  // namespace taglm
