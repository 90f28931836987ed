#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "taglm/corpus.hpp"
#include "taglm/keyvalue.hpp"

namespace taglm {

/// An equipment position inside a unit. The tag number is unit * 100 + offset.
struct EquipmentSlot {
  std::string type;
  int offset = 0;
  bool optional = false;
};

struct UnitTemplate {
  int code = 0;
  bool optional = false;
  std::vector<EquipmentSlot> slots;
};

enum class ParentRule {
  SameNumber,          // e.g. PSV-1000 -> W-1000
  RoundDown,           // e.g. TIT-1063 -> V-1060 (largest equipment number not above)
  PreviousInstrument,  // e.g. AE-1066 -> AIT-1065
};

struct InstrumentRule {
  std::string type;
  ParentRule rule = ParentRule::SameNumber;
  // Equipment types this instrument may hang off, or for PreviousInstrument
  // the single instrument type it follows.
  std::vector<std::string> parents;
  int max_per_parent = 1;
};

/// The tagging convention a synthetic facility follows. Everything a tag is
/// built from lives here so alternative conventions need no code changes.
struct ConventionProfile {
  std::vector<std::pair<std::string, std::string>> project_areas;  // (project, area)
  std::string site_prefix = "W";
  int site_digits = 3;
  std::vector<UnitTemplate> units;
  std::vector<InstrumentRule> instruments;
  std::map<std::string, std::string> group_suffix;  // equipment type -> sub-section suffix
  std::set<std::string> instrument_levels;          // type codes classified as Instrument
  double unit_probability = 0.5;
  double slot_probability = 0.5;

  static ConventionProfile standard();
};

struct GenConfig {
  int n_facilities = 30;
  std::uint64_t seed = 7;
  int wells_min = 2;  // process trains per facility
  int wells_max = 4;
  int equipment_min = 20;  // equipment + instrument tags per train (target)
  int equipment_max = 60;
  ConventionProfile profile = ConventionProfile::standard();
};

/// Deterministic forest of facility hierarchies. Throws ConfigError.
Corpus generate_corpus(const GenConfig& cfg);

KeyValues gen_config_to_key_values(const GenConfig& cfg);
/// Keys absent from `kv` keep their defaults. Throws ConfigError on unknown keys.
GenConfig gen_config_from_key_values(const KeyValues& kv);
void write_gen_config(const GenConfig& cfg, const std::filesystem::path& path);
GenConfig read_gen_config(const std::filesystem::path& path);

}  // namespace taglm
