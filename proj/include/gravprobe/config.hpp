#pragma once

// Configuration files and overrides.
//
// Files use a small TOML subset: `[section]` headers, `key = value` lines,
// `#` comments, numbers and double-quoted strings. Keys ending in `_hz` are
// ordinary frequencies and are multiplied by 2 pi on load. Layers apply in the
// order preset, file, command-line `--set`, later layers winning.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gravprobe/coefficients.hpp"
#include "gravprobe/correlations.hpp"
#include "gravprobe/errors.hpp"
#include "gravprobe/parameters.hpp"
#include "gravprobe/presets.hpp"
#include "gravprobe/spectra.hpp"

namespace gravprobe::config {

struct Value {
  enum class Kind { Number, String, Bool };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;  // the string, or the literal as written

  static std::string_view kind_name(Kind k) {
    switch (k) {
      case Kind::Number: return "number";
      case Kind::String: return "string";
      case Kind::Bool: return "boolean";
    }
    return "value";
  }
};

struct Entry {
  std::string path;    // "section.key", or "key" at top level
  Value value;
  std::string origin;  // "file.toml:12" or "--set"
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

inline std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return std::nullopt;
  return v;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace detail

/// Parses a literal: quoted string, true/false, or number. In lenient mode
/// (command-line overrides) a bare word is taken as a string.
inline Value parse_value(std::string_view raw, const std::string& where, bool lenient = false) {
  const std::string_view s = detail::trim(raw);
  Value v;
  v.text = std::string(s);
  if (s.empty()) throw ConfigError(where + ": missing value");
  if (s.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < s.size() && s[i] != '"'; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) {
        ++i;
        switch (s[i]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: out += s[i];
        }
      } else {
        out += s[i];
      }
    }
    if (i >= s.size()) throw ConfigError(where + ": unterminated string");
    if (!detail::trim(s.substr(i + 1)).empty())
      throw ConfigError(where + ": unexpected text after string");
    v.kind = Value::Kind::String;
    v.text = out;
    return v;
  }
  if (s.front() == '[' || s.front() == '{')
    throw ConfigError(where + ": arrays and inline tables are not supported");
  if (s == "true" || s == "false") {
    v.kind = Value::Kind::Bool;
    v.number = s == "true" ? 1.0 : 0.0;
    return v;
  }
  if (const auto n = detail::parse_number(s)) {
    v.kind = Value::Kind::Number;
    v.number = *n;
    return v;
  }
  if (lenient && detail::is_identifier(s)) {
    v.kind = Value::Kind::String;
    return v;
  }
  throw ConfigError(where + ": cannot parse value '" + std::string(s) + "'");
}

/// Splits a config document into entries, rejecting malformed lines and
/// duplicate keys with their line number.
inline std::vector<Entry> parse_document(std::string_view text, const std::string& source) {
  std::vector<Entry> out;
  std::set<std::string> seen;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);

    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
      if (line[i] == '#' && !in_string) {
        line = line.substr(0, i);
        break;
      }
    }
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      const std::string_view name = detail::trim(line.substr(1, line.size() - 2));
      if (!detail::is_identifier(name)) throw ConfigError(where + ": invalid section name '" + std::string(name) + "'");
      section = std::string(name);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string_view key = detail::trim(line.substr(0, eq));
    if (!detail::is_identifier(key)) throw ConfigError(where + ": invalid key '" + std::string(key) + "'");
    const std::string path = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (!seen.insert(path).second) throw ConfigError(where + ": duplicate key '" + path + "'");
    out.push_back({path, parse_value(line.substr(eq + 1), where), where});
  }
  return out;
}

/// `--set path=value` arguments.
inline std::vector<Entry> parse_overrides(const std::vector<std::string>& sets) {
  std::vector<Entry> out;
  for (const auto& s : sets) {
    const std::size_t eq = s.find('=');
    const std::string where = "--set " + s;
    if (eq == std::string::npos) throw ConfigError(where + ": expected key.path=value");
    const std::string path(detail::trim(std::string_view(s).substr(0, eq)));
    if (path.empty()) throw ConfigError(where + ": empty key");
    out.push_back({path, parse_value(std::string_view(s).substr(eq + 1), where, true), where});
  }
  return out;
}

struct ResolvedConfig {
  std::string preset;  // empty when built from a file alone
  SystemParameters params;
  FrequencyGrid grid;
  CoefficientMode mode = CoefficientMode::FarField;
  std::optional<ControlRange> sweep;
  std::vector<std::pair<std::string, std::string>> assumptions;
};

namespace detail {

using Setter = std::function<void(ResolvedConfig&, const Value&, const std::string&)>;

struct Field {
  Value::Kind kind;
  bool required;  // must be supplied when no preset is used
  Setter set;
};

inline double whole(const Value& v, const std::string& where, const std::string& path) {
  if (!(v.number >= 2.0) || std::floor(v.number) != v.number || v.number > 1e9)
    throw ConfigError(where + ": " + path + " must be an integer >= 2");
  return v.number;
}

inline const std::map<std::string, Field>& schema() {
  static const std::map<std::string, Field> fields = [] {
    std::map<std::string, Field> f;
    using K = Value::Kind;
    auto num = [&](std::string path, bool required, std::function<void(ResolvedConfig&, double)> fn) {
      f.emplace(std::move(path), Field{K::Number, required,
                                       [fn](ResolvedConfig& c, const Value& v, const std::string&) { fn(c, v.number); }});
    };
    num("m1", true, [](ResolvedConfig& c, double v) { c.params.m1 = v; });
    num("m2", true, [](ResolvedConfig& c, double v) { c.params.m2 = v; });
    num("temperature", true, [](ResolvedConfig& c, double v) { c.params.temperature = v; });
    num("geometry.d_x", true, [](ResolvedConfig& c, double v) { c.params.geometry.d_x = v; });
    num("geometry.d_y", true, [](ResolvedConfig& c, double v) { c.params.geometry.d_y = v; });
    num("geometry.x2_bar", false, [](ResolvedConfig& c, double v) { c.params.geometry.x2_bar = v; });
    num("geometry.farfield_factor", false,
        [](ResolvedConfig& c, double v) { c.params.geometry.farfield_factor = v; });
    for (Axis a : kAxes) {
      const std::string m = "mech_" + std::string(name(a)) + ".";
      num(m + "omega_hz", true, [a](ResolvedConfig& c, double v) { c.params.mech(a).omega = kTwoPi * v; });
      num(m + "gamma_hz", true, [a](ResolvedConfig& c, double v) { c.params.mech(a).gamma = kTwoPi * v; });
      num(m + "r_osc", false, [a](ResolvedConfig& c, double v) { c.params.mech(a).r_osc = v; });
      const std::string k = "cav_" + std::string(name(a)) + ".";
      num(k + "omega_c_hz", true, [a](ResolvedConfig& c, double v) { c.params.cavity(a).omega_c = kTwoPi * v; });
      num(k + "detuning_hz", true,
          [a](ResolvedConfig& c, double v) { c.params.cavity(a).detuning = kTwoPi * v; });
      num(k + "kappa", true, [a](ResolvedConfig& c, double v) { c.params.cavity(a).kappa = v; });
      num(k + "length", true, [a](ResolvedConfig& c, double v) { c.params.cavity(a).length = v; });
      num(k + "power", false, [a](ResolvedConfig& c, double v) { c.params.cavity(a).drive = LaserPower{v}; });
      num(k + "drive", false,
          [a](ResolvedConfig& c, double v) { c.params.cavity(a).drive = DriveAmplitude{v}; });
    }
    num("dns.f_min_hz", false, [](ResolvedConfig& c, double v) { c.grid.omega_min = kTwoPi * v; });
    num("dns.f_max_hz", false, [](ResolvedConfig& c, double v) { c.grid.omega_max = kTwoPi * v; });
    f.emplace("dns.n_points", Field{K::Number, false, [](ResolvedConfig& c, const Value& v, const std::string& w) {
                c.grid.n_points = static_cast<std::size_t>(whole(v, w, "dns.n_points"));
              }});
    f.emplace("dns.spacing", Field{K::String, false, [](ResolvedConfig& c, const Value& v, const std::string& w) {
                if (v.text == "lin" || v.text == "linear") c.grid.spacing = Spacing::Linear;
                else if (v.text == "log") c.grid.spacing = Spacing::Log;
                else throw ConfigError(w + ": dns.spacing must be \"lin\" or \"log\"");
              }});
    f.emplace("dns.coefficients",
              Field{K::String, false, [](ResolvedConfig& c, const Value& v, const std::string& w) {
                if (v.text == "farfield") c.mode = CoefficientMode::FarField;
                else if (v.text == "exact") c.mode = CoefficientMode::Exact;
                else throw ConfigError(w + ": dns.coefficients must be \"farfield\" or \"exact\"");
              }});
    auto sweep = [](ResolvedConfig& c) -> ControlRange& {
      if (!c.sweep) c.sweep = ControlRange{};
      return *c.sweep;
    };
    num("sweep.c1_min", false, [sweep](ResolvedConfig& c, double v) { sweep(c).lo = v; });
    num("sweep.c1_max", false, [sweep](ResolvedConfig& c, double v) { sweep(c).hi = v; });
    f.emplace("sweep.n_points", Field{K::Number, false, [sweep](ResolvedConfig& c, const Value& v, const std::string& w) {
                sweep(c).n_points = static_cast<std::size_t>(whole(v, w, "sweep.n_points"));
              }});
    return f;
  }();
  return fields;
}

inline std::string suggestion(const std::string& path) {
  std::string best;
  std::size_t best_d = 4;
  for (const auto& [known, field] : schema()) {
    const std::size_t d = edit_distance(path, known);
    if (d < best_d) {
      best_d = d;
      best = known;
    }
  }
  if (best.empty()) {
    // Same key under a different section is the common mistake.
    const std::string leaf = path.substr(path.rfind('.') == std::string::npos ? 0 : path.rfind('.') + 1);
    for (const auto& [known, field] : schema())
      if (known.size() > leaf.size() && known.ends_with("." + leaf)) return " (did you mean '" + known + "'?)";
    return "";
  }
  return " (did you mean '" + best + "'?)";
}

inline void apply(ResolvedConfig& cfg, const Entry& e, std::set<std::string>& assigned) {
  const auto& fields = schema();
  const auto it = fields.find(e.path);
  if (it == fields.end()) throw ConfigError(e.origin + ": unknown key '" + e.path + "'" + suggestion(e.path));
  if (e.value.kind != it->second.kind)
    throw ConfigError(e.origin + ": " + e.path + " expects a " + std::string(Value::kind_name(it->second.kind)) +
                      ", got " + std::string(Value::kind_name(e.value.kind)) + " '" + e.value.text + "'");
  it->second.set(cfg, e.value, e.origin);
  assigned.insert(e.path);
}

inline void check_drive_exclusive(const std::vector<Entry>& layer) {
  for (Axis a : kAxes) {
    const std::string k = "cav_" + std::string(name(a));
    const Entry* power = nullptr;
    const Entry* drive = nullptr;
    for (const auto& e : layer) {
      if (e.path == k + ".power") power = &e;
      if (e.path == k + ".drive") drive = &e;
    }
    if (power && drive)
      throw ConfigError(drive->origin + ": " + k + " sets both power and drive; give only one");
  }
}

}  // namespace detail

struct Sources {
  std::optional<std::string> preset;         // --preset
  std::optional<std::string> file_path;      // --config
  std::optional<std::string> file_text;      // document text, read from file_path when unset
  std::vector<std::string> overrides;        // --set
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Merges preset, file and overrides into validated parameters and run options.
inline ResolvedConfig resolve_config(const Sources& src) {
  std::vector<Entry> file_entries;
  if (src.file_path || src.file_text) {
    const std::string name = src.file_path.value_or("<config>");
    const std::string text = src.file_text ? *src.file_text : read_file(*src.file_path);
    file_entries = parse_document(text, name);
  }
  const std::vector<Entry> overrides = parse_overrides(src.overrides);

  std::optional<std::string> base = src.preset;
  std::vector<Entry> file_body;
  for (auto& e : file_entries) {
    if (e.path == "base") {
      if (e.value.kind != Value::Kind::String)
        throw ConfigError(e.origin + ": base expects a string preset name");
      if (!base) base = e.value.text;
      continue;
    }
    file_body.push_back(std::move(e));
  }

  ResolvedConfig cfg;
  std::set<std::string> assigned;
  if (base) {
    Preset p = preset(*base);
    cfg.preset = p.name;
    cfg.params = p.params;
    cfg.grid = p.grid;
    cfg.sweep = p.sweep;
    cfg.assumptions = p.assumptions;
    for (const auto& [path, field] : detail::schema()) assigned.insert(path);
  }

  detail::check_drive_exclusive(file_body);
  detail::check_drive_exclusive(overrides);
  for (const auto& e : file_body) detail::apply(cfg, e, assigned);
  for (const auto& e : overrides) detail::apply(cfg, e, assigned);

  if (!base) {
    std::vector<std::string> missing;
    for (const auto& [path, field] : detail::schema())
      if (field.required && !assigned.contains(path)) missing.push_back(path);
    for (Axis a : kAxes) {
      const std::string k = "cav_" + std::string(name(a));
      if (!assigned.contains(k + ".power") && !assigned.contains(k + ".drive"))
        missing.push_back(k + ".power or " + k + ".drive");
    }
    if (!missing.empty()) {
      std::string msg = "missing required field(s):";
      for (const auto& m : missing) msg += " " + m;
      throw ConfigError(msg + " (or set base = \"fig3\" / \"fig4\" to start from a preset)");
    }
  }

  validate(cfg.params);
  if (assigned.contains("dns.f_min_hz") || assigned.contains("dns.f_max_hz") || assigned.contains("dns.n_points"))
    cfg.grid.validate();
  if (cfg.sweep && (assigned.contains("sweep.c1_min") || assigned.contains("sweep.c1_max") ||
                    assigned.contains("sweep.n_points")))
    cfg.sweep->validate();
  return cfg;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Loadable, canonical rendering of a resolved configuration: fixed key order,
/// 17 significant digits. Identical parameters give identical text.
inline std::string canonical_text(const ResolvedConfig& cfg) {
  const SystemParameters& p = cfg.params;
  std::string out;
  auto line = [&](std::string_view key, double v) {
    out += std::string(key) + " = " + format_double(v) + "\n";
  };
  line("m1", p.m1);
  line("m2", p.m2);
  line("temperature", p.temperature);
  out += "\n[geometry]\n";
  line("d_x", p.geometry.d_x);
  line("d_y", p.geometry.d_y);
  line("x2_bar", p.geometry.x2_bar);
  line("farfield_factor", p.geometry.farfield_factor);
  for (Axis a : kAxes) {
    const MechanicalAxis& m = p.mech(a);
    out += "\n[mech_" + std::string(name(a)) + "]\n";
    line("omega_hz", m.omega / kTwoPi);
    line("gamma_hz", m.gamma / kTwoPi);
    line("r_osc", m.r_osc);
  }
  for (Axis a : kAxes) {
    const CavityAxis& k = p.cavity(a);
    out += "\n[cav_" + std::string(name(a)) + "]\n";
    line("omega_c_hz", k.omega_c / kTwoPi);
    line("detuning_hz", k.detuning / kTwoPi);
    line("kappa", k.kappa);
    line("length", k.length);
    if (const auto* pw = std::get_if<LaserPower>(&k.drive)) line("power", pw->watts);
    else line("drive", std::get<DriveAmplitude>(k.drive).per_second);
  }
  if (cfg.grid.n_points > 0) {
    out += "\n[dns]\n";
    line("f_min_hz", cfg.grid.omega_min / kTwoPi);
    line("f_max_hz", cfg.grid.omega_max / kTwoPi);
    out += "n_points = " + std::to_string(cfg.grid.n_points) + "\n";
    out += std::string("spacing = \"") + (cfg.grid.spacing == Spacing::Log ? "log" : "lin") + "\"\n";
    out += std::string("coefficients = \"") + (cfg.mode == CoefficientMode::Exact ? "exact" : "farfield") + "\"\n";
  }
  if (cfg.sweep) {
    out += "\n[sweep]\n";
    line("c1_min", cfg.sweep->lo);
    line("c1_max", cfg.sweep->hi);
    out += "n_points = " + std::to_string(cfg.sweep->n_points) + "\n";
  }
  return out;
}

}  // namespace gravprobe::config
