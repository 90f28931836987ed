#include "taglm/tag.hpp"

#include <algorithm>

#include "taglm/errors.hpp"

namespace taglm {
namespace {

bool is_upper_alnum(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool all_letters(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool starts_with_letter(const std::string& s) { return !s.empty() && s.front() >= 'A' && s.front() <= 'Z'; }

std::string to_upper(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

// Returns an empty string when the tag is acceptable, otherwise the reason.
std::string validate(const std::string& text) {
  if (text.empty()) return "empty tag";
  if (text.size() > kMaxTagLength) {
    return "tag longer than " + std::to_string(kMaxTagLength) + " characters";
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '-') {
      if (i == 0 || i + 1 == text.size() || text[i + 1] == '-') return "bad hyphenation";
    } else if (!is_upper_alnum(c)) {
      return "illegal character at position " + std::to_string(i);
    }
  }
  return {};
}

}  // namespace

std::string_view to_string(HierarchyLevel level) {
  switch (level) {
    case HierarchyLevel::Project: return "Project";
    case HierarchyLevel::Site: return "Site";
    case HierarchyLevel::Section: return "Section";
    case HierarchyLevel::SubSection: return "SubSection";
    case HierarchyLevel::EquipmentUnit: return "EquipmentUnit";
    case HierarchyLevel::Instrument: return "Instrument";
  }
  return "?";
}

ParsedTag parse_tag(std::string_view text) {
  ParsedTag tag;
  tag.raw = to_upper(text);
  if (auto reason = validate(tag.raw); !reason.empty()) {
    throw MalformedTag("malformed tag '" + std::string(text) + "': " + reason);
  }
  std::size_t start = 0;
  while (true) {
    const auto dash = tag.raw.find('-', start);
    tag.segments.push_back(tag.raw.substr(start, dash - start));
    if (dash == std::string::npos) break;
    start = dash + 1;
  }
  return tag;
}

bool is_valid_tag(std::string_view text) noexcept { return validate(to_upper(text)).empty(); }

std::string render_tag(const ParsedTag& tag) {
  std::string out;
  for (std::size_t i = 0; i < tag.segments.size(); ++i) {
    if (i) out += '-';
    out += tag.segments[i];
  }
  return out;
}

const std::set<std::string>& default_instrument_types() {
  static const std::set<std::string> types{"TIT", "AIT", "AE"};
  return types;
}

HierarchyLevel classify_level(const ParsedTag& tag, const std::set<std::string>& instrument_types) {
  const auto& s = tag.segments;
  switch (s.size()) {
    case 1:
      if (starts_with_letter(s[0])) return HierarchyLevel::Project;
      break;
    case 2:
      if (starts_with_letter(s[1])) return HierarchyLevel::Site;
      break;
    case 3:
      if (all_digits(s[2])) return HierarchyLevel::Section;
      break;
    case 4:
      if (all_digits(s[2]) && all_digits(s[3])) return HierarchyLevel::SubSection;
      break;
    case 5:
      if (all_digits(s[2]) && all_digits(s[3]) && all_letters(s[4])) return HierarchyLevel::SubSection;
      break;
    case 7:
      if (all_digits(s[3]) && all_digits(s[4]) && all_letters(s[5]) && all_digits(s[6])) {
        return instrument_types.count(s[5]) ? HierarchyLevel::Instrument : HierarchyLevel::EquipmentUnit;
      }
      break;
    default:
      break;
  }
  throw UnknownLevel("no hierarchy level matches tag '" + tag.raw + "'");
}

}  // namespace taglm
