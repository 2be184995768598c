#include "helium/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "helium/errors.hpp"
#include "helium/harness/csv.hpp"

namespace helium::harness {

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Device: return "device";
    case ExperimentKind::Spectrum: return "spectrum";
    case ExperimentKind::Quench: return "quench";
    case ExperimentKind::Readout: return "readout";
    case ExperimentKind::Disorder: return "disorder";
    case ExperimentKind::Sweep: return "sweep";
  }
  return "?";
}

ExperimentKind kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::Device, ExperimentKind::Spectrum, ExperimentKind::Quench, ExperimentKind::Readout,
                 ExperimentKind::Disorder, ExperimentKind::Sweep}) {
    if (s == to_string(k)) return k;
  }
  throw InvalidArgument("unknown experiment kind '" + s + "'");
}

DeviceGeometry DeviceSpec::geometry() const {
  DeviceGeometry g;
  g.sphere_radius_a = a_nm;
  g.sphere_gap_d = d_nm;
  g.film_height_h = h_nm;
  g.site_spacing_lambda = lambda_nm;
  g.helium_rel_permittivity = eps_r;
  g.temperature = temperature_K;
  g.n_sites = n_sites;
  return g;
}

readout::ElectrodeConfig ElectrodeSpec::config() const {
  return readout::ElectrodeConfig{R_um, sep_mm, V_uV * 1e-6};
}

namespace {

const char* to_string(QuenchMethod m) {
  switch (m) {
    case QuenchMethod::Auto: return "auto";
    case QuenchMethod::Dense: return "dense";
    case QuenchMethod::Quadratic: return "quadratic";
  }
  return "?";
}

// Value errors carry no line; the parser adds it.
struct ValueError {
  std::string message;
};

double real(const std::string& v) {
  try {
    const double x = parse_number(v);
    if (!std::isfinite(x)) throw ValueError{"value must be finite"};
    return x;
  } catch (const InvalidArgument& e) {
    throw ValueError{e.what()};
  }
}

double positive(const std::string& v) {
  const double x = real(v);
  if (!(x > 0.0)) throw ValueError{"value must be > 0"};
  return x;
}

double non_negative(const std::string& v) {
  const double x = real(v);
  if (x < 0.0) throw ValueError{"value must be >= 0"};
  return x;
}

int count_at_least(const std::string& v, int lo) {
  std::int64_t x;
  try {
    x = parse_integer(v);
  } catch (const InvalidArgument& e) {
    throw ValueError{e.what()};
  }
  if (x < lo || x > 1000000) throw ValueError{"value must be an integer >= " + std::to_string(lo)};
  return static_cast<int>(x);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct KeyDef {
  std::string section;
  std::string key;
  std::function<void(ExperimentSpec&, const std::string&)> set;
  std::function<std::optional<std::string>(const ExperimentSpec&)> get;
};

template <class Block>
Block& ensure(std::optional<Block>& b) {
  if (!b) b.emplace();
  return *b;
}

#define HELIUM_REAL_KEY(SECTION, KEY, BLOCK, FIELD, CHECK)                                   \
  KeyDef {                                                                                  \
    SECTION, KEY, [](ExperimentSpec& s, const std::string& v) { ensure(s.BLOCK).FIELD = CHECK(v); }, \
        [](const ExperimentSpec& s) -> std::optional<std::string> {                          \
          if (!s.BLOCK) return std::nullopt;                                                \
          return format_number(s.BLOCK->FIELD);                                             \
        }                                                                                   \
  }

#define HELIUM_OPT_REAL_KEY(SECTION, KEY, BLOCK, FIELD, CHECK)                               \
  KeyDef {                                                                                  \
    SECTION, KEY, [](ExperimentSpec& s, const std::string& v) { ensure(s.BLOCK).FIELD = CHECK(v); }, \
        [](const ExperimentSpec& s) -> std::optional<std::string> {                          \
          if (!s.BLOCK || !s.BLOCK->FIELD) return std::nullopt;                             \
          return format_number(*s.BLOCK->FIELD);                                            \
        }                                                                                   \
  }

#define HELIUM_COUNT_KEY(SECTION, KEY, BLOCK, FIELD, LO)                                     \
  KeyDef {                                                                                  \
    SECTION, KEY,                                                                           \
        [](ExperimentSpec& s, const std::string& v) { ensure(s.BLOCK).FIELD = count_at_least(v, LO); }, \
        [](const ExperimentSpec& s) -> std::optional<std::string> {                          \
          if (!s.BLOCK) return std::nullopt;                                                \
          return std::to_string(s.BLOCK->FIELD);                                            \
        }                                                                                   \
  }

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"run", "kind",
       [](ExperimentSpec& s, const std::string& v) {
         try {
           s.kind = kind_from_string(v);
         } catch (const InvalidArgument& e) {
           throw ValueError{e.what()};
         }
       },
       [](const ExperimentSpec& s) -> std::optional<std::string> { return to_string(s.kind); }},
      {"run", "seed",
       [](ExperimentSpec& s, const std::string& v) {
         std::uint64_t x = 0;
         const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
         if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
           throw ValueError{"seed must be an unsigned 64-bit integer"};
         }
         s.seed = x;
       },
       [](const ExperimentSpec& s) -> std::optional<std::string> { return std::to_string(s.seed); }},

      HELIUM_REAL_KEY("device", "a_nm", device, a_nm, positive),
      HELIUM_REAL_KEY("device", "d_nm", device, d_nm, positive),
      HELIUM_REAL_KEY("device", "h_nm", device, h_nm, positive),
      HELIUM_REAL_KEY("device", "lambda_nm", device, lambda_nm, positive),
      HELIUM_REAL_KEY("device", "eps_r", device, eps_r, positive),
      HELIUM_REAL_KEY("device", "temperature_K", device, temperature_K, non_negative),
      HELIUM_COUNT_KEY("device", "n_sites", device, n_sites, 2),

      HELIUM_COUNT_KEY("chain", "n", chain, n, 1),
      {"chain", "boundary",
       [](ExperimentSpec& s, const std::string& v) {
         try {
           ensure(s.chain).boundary = ising::boundary_from_string(v);
         } catch (const InvalidArgument& e) {
           throw ValueError{e.what()};
         }
       },
       [](const ExperimentSpec& s) -> std::optional<std::string> {
         if (!s.chain) return std::nullopt;
         return std::string(ising::to_string(s.chain->boundary));
       }},
      HELIUM_OPT_REAL_KEY("chain", "Gamma_K", chain, Gamma_K, real),
      HELIUM_OPT_REAL_KEY("chain", "J_K", chain, J_K, real),
      HELIUM_REAL_KEY("chain", "gammaz_K", chain, gammaz_K, real),

      HELIUM_REAL_KEY("schedule", "tauQ", schedule, tauQ, positive),
      {"schedule", "profile",
       [](ExperimentSpec& s, const std::string& v) {
         if (v != "linear") throw ValueError{"only the linear profile is available"};
         ensure(s.schedule).profile = v;
       },
       [](const ExperimentSpec& s) -> std::optional<std::string> {
         if (!s.schedule) return std::nullopt;
         return s.schedule->profile;
       }},
      HELIUM_OPT_REAL_KEY("schedule", "Gamma_start_K", schedule, Gamma_start_K, non_negative),
      HELIUM_REAL_KEY("schedule", "Gamma_end_K", schedule, Gamma_end_K, non_negative),
      {"schedule", "method",
       [](ExperimentSpec& s, const std::string& v) {
         auto& b = ensure(s.schedule);
         if (v == "auto") b.method = QuenchMethod::Auto;
         else if (v == "dense") b.method = QuenchMethod::Dense;
         else if (v == "quadratic") b.method = QuenchMethod::Quadratic;
         else throw ValueError{"method must be auto, dense or quadratic"};
       },
       [](const ExperimentSpec& s) -> std::optional<std::string> {
         if (!s.schedule) return std::nullopt;
         return std::string(to_string(s.schedule->method));
       }},
      HELIUM_REAL_KEY("schedule", "tolerance", schedule, tolerance, positive),

      HELIUM_REAL_KEY("electrodes", "R_um", electrodes, R_um, positive),
      HELIUM_REAL_KEY("electrodes", "sep_mm", electrodes, sep_mm, positive),
      HELIUM_REAL_KEY("electrodes", "V_uV", electrodes, V_uV, non_negative),

      HELIUM_REAL_KEY("disorder", "W_Gamma_K", disorder, W_Gamma_K, non_negative),
      HELIUM_REAL_KEY("disorder", "W_J_K", disorder, W_J_K, non_negative),
      HELIUM_REAL_KEY("disorder", "W_gammaz_K", disorder, W_gammaz_K, non_negative),
      HELIUM_COUNT_KEY("disorder", "samples", disorder, samples, 1),

      {"sweep", "base",
       [](ExperimentSpec& s, const std::string& v) {
         try {
           const auto k = kind_from_string(v);
           if (k == ExperimentKind::Sweep) throw ValueError{"a sweep cannot sweep sweeps"};
           s.sweep_base = k;
         } catch (const InvalidArgument& e) {
           throw ValueError{e.what()};
         }
       },
       [](const ExperimentSpec& s) -> std::optional<std::string> {
         if (!s.sweep_base) return std::nullopt;
         return std::string(to_string(*s.sweep_base));
       }},
  };
  return table;
}

#undef HELIUM_REAL_KEY
#undef HELIUM_OPT_REAL_KEY
#undef HELIUM_COUNT_KEY

const KeyDef* find_key(const std::string& section, const std::string& key) {
  for (const auto& k : key_table())
    if (k.section == section && k.key == key) return &k;
  return nullptr;
}

const std::set<std::string>& known_sections() {
  static const std::set<std::string> s{"run", "device", "chain", "schedule", "electrodes", "disorder", "sweep"};
  return s;
}

bool is_axis_key(const std::string& key) {
  return key.size() > 4 && key.compare(0, 4, "axis") == 0 &&
         std::all_of(key.begin() + 4, key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

SweepAxis parse_axis(const std::string& v) {
  const auto colon = v.find(':');
  if (colon == std::string::npos) throw ValueError{"axis must look like 'section.key: v1, v2, ...'"};
  SweepAxis axis;
  axis.key = trim(v.substr(0, colon));
  const auto dot = axis.key.find('.');
  if (dot == std::string::npos || !find_key(axis.key.substr(0, dot), axis.key.substr(dot + 1))) {
    throw ValueError{"axis key '" + axis.key + "' does not name a configuration field"};
  }
  if (axis.key.substr(0, dot) == "run" || axis.key.substr(0, dot) == "sweep") {
    throw ValueError{"axis key '" + axis.key + "' cannot be swept"};
  }
  std::stringstream list(v.substr(colon + 1));
  std::string item;
  while (std::getline(list, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ValueError{"empty value in axis list"};
    axis.values.push_back(item);
  }
  if (axis.values.empty()) throw ValueError{"axis has no values"};
  // Each value must be acceptable on its own.
  ExperimentSpec probe;
  for (const auto& value : axis.values) find_key(axis.key.substr(0, dot), axis.key.substr(dot + 1))->set(probe, value);
  return axis;
}

void apply(ExperimentSpec& spec, const std::string& section, const std::string& key, const std::string& value) {
  if (section == "sweep" && is_axis_key(key)) {
    spec.sweep_axes.push_back(parse_axis(value));
    return;
  }
  const KeyDef* def = find_key(section, key);
  if (!def) throw ValueError{"unknown key '" + key + "' in section [" + section + "]"};
  def->set(spec, value);
}

}  // namespace

ExperimentSpec parse_config(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  std::set<std::string> seen_keys, seen_sections;
  std::map<std::string, int> section_line;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("section header is missing ']'", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (!known_sections().count(section)) throw ConfigError("unknown section [" + section + "]", line_no);
      if (!seen_sections.insert(section).second) throw ConfigError("section [" + section + "] appears twice", line_no);
      section_line[section] = line_no;
      // A bare header creates the block with its defaults.
      if (section == "device") ensure(spec.device);
      if (section == "chain") ensure(spec.chain);
      if (section == "schedule") ensure(spec.schedule);
      if (section == "electrodes") ensure(spec.electrodes);
      if (section == "disorder") ensure(spec.disorder);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    if (section.empty()) throw ConfigError("key outside of any section", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (value.empty()) throw ConfigError("key '" + key + "' has no value", line_no);
    if (!seen_keys.insert(section + "." + key).second) throw ConfigError("key '" + key + "' set twice", line_no);
    try {
      apply(spec, section, key, value);
    } catch (const ValueError& e) {
      throw ConfigError(key + ": " + e.message, line_no);
    }
  }
  if (spec.device) {
    for (const char* k : {"a_nm", "d_nm", "h_nm", "lambda_nm"}) {
      if (!seen_keys.count(std::string("device.") + k)) {
        throw ConfigError(std::string("[device] is missing required key '") + k + "'", section_line["device"]);
      }
    }
  }
  if (spec.schedule && !seen_keys.count("schedule.tauQ")) {
    throw ConfigError("[schedule] is missing required key 'tauQ'", section_line["schedule"]);
  }
  return spec;
}

std::string render_config(const ExperimentSpec& spec) {
  std::ostringstream out;
  std::string current;
  for (const auto& def : key_table()) {
    const auto value = def.get(spec);
    if (!value) continue;
    if (def.section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << def.section << "]\n";
      current = def.section;
    }
    out << def.key << " = " << *value << '\n';
  }
  if (!spec.sweep_axes.empty()) {
    if (current != "sweep") out << "\n[sweep]\n";
    for (std::size_t i = 0; i < spec.sweep_axes.size(); ++i) {
      out << "axis" << i + 1 << " = " << spec.sweep_axes[i].key << ':';
      for (std::size_t j = 0; j < spec.sweep_axes[i].values.size(); ++j) {
        out << (j ? ", " : " ") << spec.sweep_axes[i].values[j];
      }
      out << '\n';
    }
  }
  return out.str();
}

void set_value(ExperimentSpec& spec, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ConfigError("override '" + dotted_key + "' must be section.key", 0);
  const std::string section = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  if (!known_sections().count(section)) throw ConfigError("unknown section [" + section + "]", 0);
  try {
    if (section == "sweep" && is_axis_key(key)) {
      const auto index = std::stoul(key.substr(4));
      if (index == 0 || index > spec.sweep_axes.size() + 1) throw ValueError{"axis index out of order"};
      const auto axis = parse_axis(value);
      if (index == spec.sweep_axes.size() + 1) spec.sweep_axes.push_back(axis);
      else spec.sweep_axes[index - 1] = axis;
      return;
    }
    apply(spec, section, key, trim(value));
  } catch (const ValueError& e) {
    throw ConfigError(dotted_key + ": " + e.message, 0);
  }
}

void validate(const ExperimentSpec& spec) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what, 0);
  };
  if (spec.device) {
    try {
      spec.device->geometry().validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("[device] ") + e.what(), 0);
    }
  }
  if (spec.electrodes) {
    try {
      spec.electrodes->config().validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("[electrodes] ") + e.what(), 0);
    }
  }
  if (spec.chain) {
    require(spec.chain->boundary == ising::Boundary::Open || spec.chain->n >= 3, "[chain] periodic chains need n >= 3");
    const bool direct = spec.chain->Gamma_K.has_value() && spec.chain->J_K.has_value();
    require(direct || spec.device.has_value(), "[chain] Gamma_K and J_K must be given or derived from a [device] block");
  }

  ExperimentKind kind = spec.kind;
  if (kind == ExperimentKind::Sweep) {
    require(spec.sweep_base.has_value(), "sweep needs [sweep] base = <kind>");
    require(!spec.sweep_axes.empty(), "sweep needs at least one axis");
    std::set<std::string> keys;
    for (const auto& a : spec.sweep_axes) require(keys.insert(a.key).second, "axis '" + a.key + "' appears twice");
    kind = *spec.sweep_base;
  }
  switch (kind) {
    case ExperimentKind::Device:
      require(spec.device.has_value(), "device runs need a [device] block");
      break;
    case ExperimentKind::Spectrum:
      require(spec.chain.has_value(), "spectrum runs need a [chain] block");
      break;
    case ExperimentKind::Quench:
      require(spec.chain.has_value(), "quench runs need a [chain] block");
      require(spec.schedule.has_value(), "quench runs need a [schedule] block");
      break;
    case ExperimentKind::Readout:
      require(spec.chain.has_value(), "readout runs need a [chain] block");
      require(spec.device.has_value(), "readout runs need a [device] block");
      break;
    case ExperimentKind::Disorder:
      require(spec.chain.has_value(), "disorder runs need a [chain] block");
      require(spec.disorder.has_value(), "disorder runs need a [disorder] block");
      break;
    case ExperimentKind::Sweep:
      break;
  }
}

}  // namespace helium::harness
