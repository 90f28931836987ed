#include "taglm/generator.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "taglm/errors.hpp"
#include "taglm/tag.hpp"

namespace taglm {
namespace {

std::string pad(int value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

const char* rule_name(ParentRule r) {
  switch (r) {
    case ParentRule::SameNumber: return "same";
    case ParentRule::RoundDown: return "round_down";
    case ParentRule::PreviousInstrument: return "previous";
  }
  return "?";
}

ParentRule rule_from_name(const std::string& s) {
  if (s == "same") return ParentRule::SameNumber;
  if (s == "round_down") return ParentRule::RoundDown;
  if (s == "previous") return ParentRule::PreviousInstrument;
  throw ConfigError("unknown parent rule '" + s + "'");
}

struct Equipment {
  std::string type;
  int number = 0;
  int range_end = 0;  // exclusive upper bound of instrument numbers that round down to `number`
  std::string tag;
};

struct Instrument {
  std::string type;
  int number = 0;
  std::string parent;
};

class FacilityBuilder {
 public:
  FacilityBuilder(const GenConfig& cfg, int index, std::string site)
      : cfg_(cfg), profile_(cfg.profile), site_(std::move(site)) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index)};
    rng_.seed(seq);
  }

  std::vector<TagPair> build() {
    const auto& pa = profile_.project_areas[uniform(0, static_cast<int>(profile_.project_areas.size()) - 1)];
    project_ = pa.first;
    area_ = pa.second;
    const int trains = uniform(cfg_.wells_min, cfg_.wells_max);

    std::vector<const UnitTemplate*> units;
    for (const auto& u : profile_.units) {
      if (!u.optional || chance(profile_.unit_probability)) units.push_back(&u);
    }

    const std::string site_tag = project_ + "-" + site_;
    emit(site_tag, project_);
    for (const auto* u : units) emit(section_tag(*u), site_tag);
    for (int t = 1; t <= trains; ++t) build_train(t, units);
    return std::move(pairs_);
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  std::string section_tag(const UnitTemplate& u) const { return project_ + "-" + site_ + "-" + pad(u.code, 4); }

  std::string subsection_tag(const UnitTemplate& u, int train) const {
    return section_tag(u) + "-" + pad(train, 2) + pad(u.code, 2);
  }

  std::string equipment_tag(int train, int unit, const std::string& type, int number) const {
    return project_ + "-" + area_ + "-" + site_ + "-" + pad(train, 2) + "-" + pad(unit, 2) + "-" + type + "-" +
           pad(number, 4);
  }

  void emit(std::string child, std::string parent) {
    for (const auto* tag : {&child, &parent}) {
      if (!is_valid_tag(*tag) || parse_tag(*tag).raw != *tag) {
        throw ConfigError("convention profile produced an invalid tag '" + *tag + "'");
      }
    }
    pairs_.push_back({std::move(child), std::move(parent), site_});
  }

  void build_train(int train, const std::vector<const UnitTemplate*>& units) {
    std::vector<Equipment> equipment;
    for (const auto* u : units) {
      const std::string sub = subsection_tag(*u, train);
      emit(sub, section_tag(*u));

      std::vector<const EquipmentSlot*> present;
      for (const auto& slot : u->slots) {
        if (!slot.optional || chance(profile_.slot_probability)) present.push_back(&slot);
      }
      std::vector<std::string> group_types;
      for (const auto* slot : present) {
        if (std::find(group_types.begin(), group_types.end(), slot->type) == group_types.end()) {
          group_types.push_back(slot->type);
        }
      }
      for (const auto& type : group_types) emit(sub + "-" + profile_.group_suffix.at(type), sub);

      for (std::size_t k = 0; k < present.size(); ++k) {
        const auto* slot = present[k];
        Equipment e;
        e.type = slot->type;
        e.number = u->code * 100 + slot->offset;
        e.range_end = k + 1 < present.size() ? u->code * 100 + present[k + 1]->offset : u->code * 100 + 100;
        e.tag = equipment_tag(train, u->code, e.type, e.number);
        emit(e.tag, sub + "-" + profile_.group_suffix.at(e.type));
        equipment.push_back(std::move(e));
      }
    }

    // Candidate instruments are grouped in bundles so an instrument is never
    // selected without the instrument it hangs off (AE without its AIT).
    std::vector<std::vector<Instrument>> pool;
    for (const auto& e : equipment) {
      const int unit = e.number / 100;
      for (const auto& rule : profile_.instruments) {
        if (rule.rule == ParentRule::PreviousInstrument) continue;
        if (std::find(rule.parents.begin(), rule.parents.end(), e.type) == rule.parents.end()) continue;
        if (rule.rule == ParentRule::SameNumber) {
          pool.push_back({{rule.type, e.number, e.tag}});
          continue;
        }
        std::vector<int> numbers;
        const int end = has_followers(rule.type) ? e.range_end - 1 : e.range_end;
        for (int n = e.number; n < end; ++n) numbers.push_back(n);
        for (int i = 0; i < static_cast<int>(numbers.size()) && i < rule.max_per_parent; ++i) {
          std::swap(numbers[i], numbers[uniform(i, static_cast<int>(numbers.size()) - 1)]);
        }
        numbers.resize(std::min<std::size_t>(numbers.size(), rule.max_per_parent));
        std::sort(numbers.begin(), numbers.end());
        for (int n : numbers) {
          std::vector<Instrument> bundle{{rule.type, n, e.tag}};
          const auto followers = follow(rule.type, n, equipment_tag(train, unit, rule.type, n), train, unit);
          bundle.insert(bundle.end(), followers.begin(), followers.end());
          pool.push_back(std::move(bundle));
        }
      }
    }

    const int target = uniform(cfg_.equipment_min, cfg_.equipment_max);
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[uniform(0, static_cast<int>(i) - 1)]);
    }
    std::vector<bool> chosen(pool.size(), false);
    int count = static_cast<int>(equipment.size());
    for (std::size_t idx : order) {
      if (count >= target) break;
      chosen[idx] = true;
      count += static_cast<int>(pool[idx].size());
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!chosen[i]) continue;
      for (const auto& ins : pool[i]) {
        emit(equipment_tag(train, ins.number / 100, ins.type, ins.number), ins.parent);
      }
    }
  }

  bool has_followers(const std::string& type) const {
    return std::any_of(profile_.instruments.begin(), profile_.instruments.end(), [&](const InstrumentRule& r) {
      return r.rule == ParentRule::PreviousInstrument && !r.parents.empty() && r.parents.front() == type;
    });
  }

  std::vector<Instrument> follow(const std::string& type, int number, const std::string& tag, int train, int unit) {
    std::vector<Instrument> out;
    for (const auto& rule : profile_.instruments) {
      if (rule.rule != ParentRule::PreviousInstrument || rule.parents.empty() || rule.parents.front() != type) {
        continue;
      }
      for (int k = 1; k <= rule.max_per_parent && number + k <= 9999; ++k) {
        out.push_back({rule.type, number + k, tag});
        auto deeper = follow(rule.type, number + k, equipment_tag(train, unit, rule.type, number + k), train, unit);
        out.insert(out.end(), deeper.begin(), deeper.end());
      }
    }
    return out;
  }

  const GenConfig& cfg_;
  const ConventionProfile& profile_;
  std::string site_;
  std::string project_;
  std::string area_;
  std::mt19937_64 rng_;
  std::vector<TagPair> pairs_;
};

void validate(const GenConfig& cfg) {
  if (cfg.n_facilities <= 0) throw ConfigError("facilities must be positive");
  if (cfg.wells_min <= 0 || cfg.wells_max < cfg.wells_min) throw ConfigError("invalid wells range");
  if (cfg.wells_max > 99) throw ConfigError("at most 99 trains per facility");
  if (cfg.equipment_min <= 0 || cfg.equipment_max < cfg.equipment_min) {
    throw ConfigError("invalid equipment range");
  }
  const auto& p = cfg.profile;
  if (p.project_areas.empty()) throw ConfigError("profile has no project/area codes");
  if (p.units.empty()) throw ConfigError("profile has no units");
  if (p.site_digits <= 0 || p.site_digits > 6) throw ConfigError("site_digits must be in 1..6");
  int capacity = 9;
  for (int i = 1; i < p.site_digits; ++i) capacity *= 10;
  if (cfg.n_facilities > capacity) throw ConfigError("more facilities than distinct site codes");
  for (const auto& u : p.units) {
    if (u.code < 10 || u.code > 99) throw ConfigError("unit codes must be two digits");
    int prev = -1;
    for (const auto& s : u.slots) {
      if (s.offset <= prev || s.offset > 99) throw ConfigError("slot offsets must increase within 0..99");
      prev = s.offset;
      if (!p.group_suffix.count(s.type)) throw ConfigError("no group suffix for equipment type " + s.type);
    }
  }
  for (const auto& r : p.instruments) {
    if (r.max_per_parent <= 0) throw ConfigError("instrument max must be positive");
    if (r.parents.empty()) throw ConfigError("instrument " + r.type + " has no parent types");
  }
}

}  // namespace

ConventionProfile ConventionProfile::standard() {
  ConventionProfile p;
  p.project_areas = {{"KDU", "NOFC"}, {"KDU", "SOFC"}, {"KDX", "WAPI"}};
  p.units = {
      {10, false, {{"W", 0, false}, {"V", 55, true}, {"V", 60, true}}},
      {20, false, {{"V", 0, false}, {"V", 30, true}, {"P", 50, true}}},
      {55, true, {{"V", 10, true}, {"P", 70, false}}},
      {17, true, {{"C", 0, false}, {"V", 40, true}}},
  };
  p.instruments = {
      {"PSV", ParentRule::SameNumber, {"W", "V", "P", "C"}, 1},
      {"ESDV", ParentRule::SameNumber, {"W"}, 1},
      {"TIT", ParentRule::RoundDown, {"W", "V", "C"}, 4},
      {"AIT", ParentRule::RoundDown, {"V"}, 2},
      {"AE", ParentRule::PreviousInstrument, {"AIT"}, 1},
  };
  p.group_suffix = {{"W", "WELL"}, {"V", "VESS"}, {"P", "PUMP"}, {"C", "COMP"}};
  p.instrument_levels = default_instrument_types();
  return p;
}

Corpus generate_corpus(const GenConfig& cfg) {
  validate(cfg);

  int lo = 1;
  for (int i = 1; i < cfg.profile.site_digits; ++i) lo *= 10;
  const int hi = lo * 10 - 1;
  std::mt19937_64 master(cfg.seed);
  std::set<int> used;
  std::vector<std::string> sites;
  while (static_cast<int>(sites.size()) < cfg.n_facilities) {
    const int n = std::uniform_int_distribution<int>(lo, hi)(master);
    if (used.insert(n).second) sites.push_back(cfg.profile.site_prefix + pad(n, cfg.profile.site_digits));
  }

  std::vector<TagPair> pairs;
  for (int f = 0; f < cfg.n_facilities; ++f) {
    auto facility = FacilityBuilder(cfg, f, sites[f]).build();
    pairs.insert(pairs.end(), facility.begin(), facility.end());
  }
  return Corpus(std::move(pairs));
}

KeyValues gen_config_to_key_values(const GenConfig& cfg) {
  const auto& p = cfg.profile;
  KeyValues kv{
      {"facilities", std::to_string(cfg.n_facilities)},
      {"seed", std::to_string(cfg.seed)},
      {"wells-min", std::to_string(cfg.wells_min)},
      {"wells-max", std::to_string(cfg.wells_max)},
      {"equipment-min", std::to_string(cfg.equipment_min)},
      {"equipment-max", std::to_string(cfg.equipment_max)},
  };
  std::vector<std::string> pas;
  for (const auto& [proj, area] : p.project_areas) pas.push_back(proj + ":" + area);
  kv.emplace_back("project_areas", join(pas, ','));
  kv.emplace_back("site_prefix", p.site_prefix);
  kv.emplace_back("site_digits", std::to_string(p.site_digits));
  kv.emplace_back("unit_probability", std::to_string(p.unit_probability));
  kv.emplace_back("slot_probability", std::to_string(p.slot_probability));

  std::vector<std::string> unit_list;
  for (const auto& u : p.units) unit_list.push_back(std::to_string(u.code) + (u.optional ? "?" : ""));
  kv.emplace_back("units", join(unit_list, ','));
  for (const auto& u : p.units) {
    std::vector<std::string> slots;
    for (const auto& s : u.slots) slots.push_back(s.type + ":" + pad(s.offset, 2) + (s.optional ? "?" : ""));
    kv.emplace_back("unit." + std::to_string(u.code), join(slots, ','));
  }

  std::vector<std::string> ins_list;
  for (const auto& r : p.instruments) ins_list.push_back(r.type);
  kv.emplace_back("instruments", join(ins_list, ','));
  for (const auto& r : p.instruments) {
    kv.emplace_back("instrument." + r.type,
                    std::string(rule_name(r.rule)) + " " + join(r.parents, '|') + " " + std::to_string(r.max_per_parent));
  }
  for (const auto& [type, suffix] : p.group_suffix) kv.emplace_back("group." + type, suffix);
  kv.emplace_back("instrument_levels",
                  join(std::vector<std::string>(p.instrument_levels.begin(), p.instrument_levels.end()), ','));
  return kv;
}

GenConfig gen_config_from_key_values(const KeyValues& kv) {
  GenConfig cfg;
  auto& p = cfg.profile;
  std::map<std::string, std::string> unit_specs, instrument_specs;
  std::vector<std::string> unit_order, instrument_order;
  bool units_given = false, instruments_given = false, groups_given = false;

  for (const auto& [key, value] : kv) {
    if (key == "facilities") {
      cfg.n_facilities = parse_int(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_uint64(key, value);
    } else if (key == "wells-min") {
      cfg.wells_min = parse_int(key, value);
    } else if (key == "wells-max") {
      cfg.wells_max = parse_int(key, value);
    } else if (key == "equipment-min") {
      cfg.equipment_min = parse_int(key, value);
    } else if (key == "equipment-max") {
      cfg.equipment_max = parse_int(key, value);
    } else if (key == "project_areas") {
      p.project_areas.clear();
      for (const auto& item : split(value, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw ConfigError("project_areas entries look like PROJECT:AREA");
        p.project_areas.emplace_back(parts[0], parts[1]);
      }
    } else if (key == "site_prefix") {
      p.site_prefix = value;
    } else if (key == "site_digits") {
      p.site_digits = parse_int(key, value);
    } else if (key == "unit_probability") {
      p.unit_probability = parse_double(key, value);
    } else if (key == "slot_probability") {
      p.slot_probability = parse_double(key, value);
    } else if (key == "units") {
      units_given = true;
      unit_order = split(value, ',');
    } else if (key.rfind("unit.", 0) == 0) {
      unit_specs[key.substr(5)] = value;
    } else if (key == "instruments") {
      instruments_given = true;
      instrument_order = split(value, ',');
    } else if (key.rfind("instrument.", 0) == 0) {
      instrument_specs[key.substr(11)] = value;
    } else if (key.rfind("group.", 0) == 0) {
      if (!groups_given) p.group_suffix.clear();
      groups_given = true;
      p.group_suffix[key.substr(6)] = value;
    } else if (key == "instrument_levels") {
      const auto types = split(value, ',');
      p.instrument_levels = std::set<std::string>(types.begin(), types.end());
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (units_given) {
    p.units.clear();
    for (auto name : unit_order) {
      UnitTemplate u;
      if (!name.empty() && name.back() == '?') {
        u.optional = true;
        name.pop_back();
      }
      u.code = parse_int("units", name);
      const auto it = unit_specs.find(name);
      if (it == unit_specs.end()) throw ConfigError("missing unit." + name);
      for (auto slot : split(it->second, ',')) {
        EquipmentSlot s;
        if (!slot.empty() && slot.back() == '?') {
          s.optional = true;
          slot.pop_back();
        }
        const auto parts = split(slot, ':');
        if (parts.size() != 2) throw ConfigError("unit slots look like TYPE:OFFSET");
        s.type = parts[0];
        s.offset = parse_int("unit." + name, parts[1]);
        u.slots.push_back(std::move(s));
      }
      p.units.push_back(std::move(u));
    }
  } else if (!unit_specs.empty()) {
    throw ConfigError("unit.* keys require a 'units' list");
  }

  if (instruments_given) {
    p.instruments.clear();
    for (const auto& name : instrument_order) {
      const auto it = instrument_specs.find(name);
      if (it == instrument_specs.end()) throw ConfigError("missing instrument." + name);
      const auto parts = split(it->second, ' ');
      if (parts.size() != 3) throw ConfigError("instrument." + name + " looks like 'RULE PARENTS|... MAX'");
      p.instruments.push_back({name, rule_from_name(parts[0]), split(parts[1], '|'), parse_int(name, parts[2])});
    }
  } else if (!instrument_specs.empty()) {
    throw ConfigError("instrument.* keys require an 'instruments' list");
  }
  return cfg;
}

void write_gen_config(const GenConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "# taglm synthetic corpus configuration\n" << format_key_values(gen_config_to_key_values(cfg));
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

GenConfig read_gen_config(const std::filesystem::path& path) { return gen_config_from_key_values(read_key_values(path)); }

}  // namespace taglm
