#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace taglm {

// `key = value` lines, '#' starts a comment, blank lines ignored. Order is
// preserved and duplicate keys are rejected.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& kv);

int parse_int(std::string_view key, std::string_view value);
unsigned long long parse_uint64(std::string_view key, std::string_view value);
double parse_double(std::string_view key, std::string_view value);
std::vector<std::string> split(std::string_view text, char sep);

}  // namespace taglm
