#pragma once

// Run manifests and file emitters. Everything written here is a pure function
// of the resolved configuration and the results, so repeated runs produce
// byte-identical files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "gravprobe/config.hpp"
#include "gravprobe/errors.hpp"

namespace gravprobe::io {

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

inline std::string fingerprint(const config::ResolvedConfig& cfg) {
  return sha256_hex(config::canonical_text(cfg));
}

struct RunManifest {
  std::string fingerprint;
  std::string tool_version = kToolVersion;
  std::string subcommand;
  std::string preset;
  double duration_s = 0.0;  // reported on stderr only, never written into data files
  // Ordered key/value pairs: chosen defaults, conventions, scenario labels.
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
};

inline RunManifest make_manifest(const config::ResolvedConfig& cfg, std::string subcommand) {
  RunManifest m;
  m.fingerprint = fingerprint(cfg);
  m.subcommand = std::move(subcommand);
  m.preset = cfg.preset.empty() ? "none" : cfg.preset;
  for (Axis a : kAxes) {
    const CavityAxis& k = cfg.params.cavity(a);
    const std::string c = "cav_" + std::string(name(a));
    m.add(c + ".length_m", config::format_double(k.length));
    m.add(c + ".detuning_hz", config::format_double(k.detuning / kTwoPi));
  }
  for (const auto& [key, note] : cfg.assumptions) m.add("assumed." + key, note);
  return m;
}

/// `# key: value` lines for CSV headers.
inline std::string csv_header(const RunManifest& m) {
  std::string out;
  out += "# tool: gravprobe " + m.tool_version + "\n";
  out += "# subcommand: " + m.subcommand + "\n";
  out += "# preset: " + m.preset + "\n";
  out += "# fingerprint_sha256: " + m.fingerprint + "\n";
  for (const auto& [k, v] : m.entries) out += "# " + k + ": " + v + "\n";
  return out;
}

inline nlohmann::ordered_json manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "gravprobe";
  j["tool_version"] = m.tool_version;
  j["subcommand"] = m.subcommand;
  j["preset"] = m.preset;
  j["fingerprint_sha256"] = m.fingerprint;
  nlohmann::ordered_json e = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.entries) e[k] = v;
  j["settings"] = e;
  return j;
}

/// Writes to `path`, or to standard output when the path is empty or "-".
inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

struct PlotSeries {
  int column = 0;  // 1-based CSV column
  std::string title;
  std::string color;
};

/// Self-contained gnuplot script overlaying spectra stored in `csv_path`.
inline std::string gnuplot_script(const std::string& csv_path, const std::vector<PlotSeries>& series,
                                  const std::string& ylabel) {
  std::string s;
  s += "# gnuplot script; run with: gnuplot -p <this file>\n";
  s += "set datafile separator ','\n";
  s += "set datafile commentschars '#'\n";
  s += "set key top right\n";
  s += "set logscale y\n";
  s += "set format y '10^{%L}'\n";
  s += "set xlabel 'frequency (Hz)'\n";
  s += "set ylabel '" + ylabel + "'\n";
  s += "plot ";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) s += ", \\\n     ";
    s += "'" + csv_path + "' every ::1 using 1:" + std::to_string(series[i].column) + " with lines lw 2 lc rgb '" +
         series[i].color + "' title '" + series[i].title + "'";
  }
  s += "\n";
  return s;
}

}  // namespace gravprobe::io
