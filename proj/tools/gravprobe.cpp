// gravprobe: command-line front end.
//
//   gravprobe validate   --preset fig3
//   gravprobe coeffs     --preset fig3 [--exact]
//   gravprobe dynamics   --preset fig4 --scenario both
//   gravprobe dns        --preset fig3 --scenario both --out dns.csv --plotscript dns.gp
//   gravprobe sweep      --preset fig4 --control-range 0,1e5,100 --out sweep.csv
//   gravprobe covariance --preset fig4 --scenario quantum
//
// Exit codes: 0 success, 2 configuration or validation error, 3 unstable
// dynamics, 4 numerical failure, 5 I/O error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gravprobe/coefficients.hpp"
#include "gravprobe/config.hpp"
#include "gravprobe/correlations.hpp"
#include "gravprobe/dynamics.hpp"
#include "gravprobe/errors.hpp"
#include "gravprobe/io.hpp"
#include "gravprobe/parallel.hpp"
#include "gravprobe/parameters.hpp"
#include "gravprobe/spectra.hpp"

namespace {

using namespace gravprobe;
using json = nlohmann::ordered_json;
using config::format_double;

enum class Verbosity { Quiet, Normal, Verbose };

struct CommonOptions {
  std::string preset;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::string format;
  std::string scenario = "both";
  bool quiet = false;
  bool verbose = false;

  Verbosity verbosity() const {
    if (quiet) return Verbosity::Quiet;
    return verbose ? Verbosity::Verbose : Verbosity::Normal;
  }
};

struct Logger {
  Verbosity level = Verbosity::Normal;
  void info(const std::string& s) const {
    if (level != Verbosity::Quiet) std::cerr << "gravprobe: " << s << "\n";
  }
  void debug(const std::string& s) const {
    if (level == Verbosity::Verbose) std::cerr << "gravprobe: " << s << "\n";
  }
};

void add_common(CLI::App* sub, CommonOptions& o, bool with_format, bool with_scenario,
                const std::string& default_format = "json") {
  sub->add_option("--preset", o.preset, "Built-in parameter set (fig3, fig4)");
  sub->add_option("--config", o.config_path, "Config file (TOML subset)")->check(CLI::ExistingFile);
  sub->add_option("--set", o.sets, "Override a config key, e.g. --set temperature=0.008")->take_all();
  sub->add_option("--out", o.out, "Output file (default: standard output)");
  if (with_format) {
    o.format = default_format;
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }
  if (with_scenario) {
    sub->add_option("--scenario", o.scenario, "quantum, classical, both (alpha/beta select one branch)")
        ->check(CLI::IsMember({"quantum", "classical", "both", "alpha", "beta"}))
        ->capture_default_str();
  }
  sub->add_flag("--quiet,-q", o.quiet, "Suppress progress messages on stderr");
  sub->add_flag("--verbose,-v", o.verbose, "More detail on stderr");
}

config::ResolvedConfig resolve(const CommonOptions& o) {
  config::Sources src;
  if (!o.preset.empty()) src.preset = o.preset;
  if (!o.config_path.empty()) src.file_path = o.config_path;
  src.overrides = o.sets;
  if (!src.preset && !src.file_path) throw ConfigError("give --preset or --config");
  return config::resolve_config(src);
}

std::vector<Scenario> scenarios(const std::string& s) {
  if (s == "quantum" || s == "alpha") return {Scenario::alpha()};
  if (s == "beta") return {Scenario::beta()};
  if (s == "classical") return {Scenario::classical()};
  return {Scenario::alpha(), Scenario::classical()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  const auto v = config::detail::parse_number(config::detail::trim(s));
  if (!v) throw ConfigError(what + ": cannot parse number '" + s + "'");
  return *v;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  const double v = parse_double(s, what);
  if (!(v >= 2.0) || std::floor(v) != v || v > 1e9) throw ConfigError(what + ": point count must be an integer >= 2");
  return static_cast<std::size_t>(v);
}

/// "min,max,n[,lin|log]" in Hz.
FrequencyGrid parse_grid(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3 && parts.size() != 4) throw ConfigError("--grid expects min,max,n[,lin|log] in Hz");
  FrequencyGrid g;
  g.omega_min = kTwoPi * parse_double(parts[0], "--grid");
  g.omega_max = kTwoPi * parse_double(parts[1], "--grid");
  g.n_points = parse_count(parts[2], "--grid");
  if (parts.size() == 4) {
    const std::string sp(config::detail::trim(parts[3]));
    if (sp == "log") g.spacing = Spacing::Log;
    else if (sp == "lin" || sp == "linear") g.spacing = Spacing::Linear;
    else throw ConfigError("--grid spacing must be lin or log");
  }
  g.validate();
  return g;
}

ControlRange parse_range(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw ConfigError("--control-range expects a,b,n (N/m)");
  ControlRange r{parse_double(parts[0], "--control-range"), parse_double(parts[1], "--control-range"),
                 parse_count(parts[2], "--control-range")};
  r.validate();
  return r;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json coefficients_json(const GravityCoefficients& c) {
  json j;
  j["c0_x"] = c.c0_x;
  j["c0_y"] = c.c0_y;
  j["c1_x"] = c.c1_x;
  j["c1_y"] = c.c1_y;
  j["c2"] = c.c2;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- validate

int run_validate(const CommonOptions& o, const Logger& log) {
  const auto cfg = resolve(o);
  const DerivedQuantities dq = derive(cfg.params);
  std::string out = "# fingerprint_sha256: " + io::fingerprint(cfg) + "\n";
  out += "# d = " + format_double(dq.d) + " m\n";
  for (Axis a : kAxes) {
    const std::size_t k = index(a);
    const MeanField mf = mean_field(cfg.params.cavity(a));
    out += "# " + std::string(name(a)) + ": chi = " + format_double(dq.chi[k]) +
           " 1/(m s), E = " + format_double(dq.drive[k]) + " 1/s, P = " + format_double(dq.power[k]) +
           " W, |a|^2 = " + format_double(mf.n_photon) + "\n";
  }
  out += config::canonical_text(cfg);
  io::write_output(o.out, out);
  log.info("configuration is valid");
  return 0;
}

// ---------------------------------------------------------------- coeffs

int run_coeffs(const CommonOptions& o, bool exact, const Logger&) {
  const auto cfg = resolve(o);
  json j;
  j["meta"] = io::manifest_json(io::make_manifest(cfg, "coeffs"));
  const std::vector<Scenario> all{Scenario::alpha(), Scenario::beta(), Scenario::classical()};
  json ff;
  for (Scenario s : all) ff[std::string(s.name())] = coefficients_json(farfield_coefficients(cfg.params, s));
  j["farfield"] = ff;
  if (exact) {
    json ex;
    for (Scenario s : all)
      ex[std::string(s.name())] = coefficients_json(coefficients(cfg.params, s, CoefficientMode::Exact));
    j["exact"] = ex;
  }
  json disp;
  for (Scenario s : all) {
    const SteadyDisplacement d = steady_displacement(cfg.params, s);
    disp[std::string(s.name())] = {{"x2_bar", d.x2}, {"y2_bar", d.y2}};
  }
  j["steady_displacement_m"] = disp;
  json recenter;
  for (Axis a : kAxes)
    recenter[std::string(name(a))] = trap_recenter(cfg.params, mean_field(cfg.params.cavity(a)).n_photon, a);
  j["trap_recenter_m"] = recenter;
  io::write_output(o.out, dump(j));
  return 0;
}

// ---------------------------------------------------------------- dynamics

int run_dynamics(const CommonOptions& o, bool exact, const Logger& log) {
  const auto cfg = resolve(o);
  const CoefficientMode mode = exact ? CoefficientMode::Exact : cfg.mode;
  json j;
  j["meta"] = io::manifest_json(io::make_manifest(cfg, "dynamics"));
  j["basis"] = json(std::vector<std::string>(basis::labels.begin(), basis::labels.end()));
  json series = json::object();
  for (Scenario s : scenarios(o.scenario)) {
    const LinearDynamics dyn = build_dynamics(cfg.params, coefficients(cfg.params, s, mode));
    const StabilityReport st = stability(dyn);
    json e;
    e["drift"] = matrix_json(dyn.drift);
    e["diffusion"] = matrix_json(dyn.diffusion);
    e["noise_input"] = matrix_json(dyn.input);
    std::vector<std::complex<double>> ev(st.eigenvalues.data(), st.eigenvalues.data() + st.eigenvalues.size());
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    json evj = json::array();
    for (const auto& z : ev) evj.push_back({z.real(), z.imag()});
    e["eigenvalues"] = evj;
    e["stable"] = st.stable;
    e["max_real_part"] = st.max_real_part;
    json axes;
    for (Axis a : kAxes) {
      const std::size_t k = index(a);
      axes[std::string(name(a))] = {{"x_zpf_m", dyn.x_zpf[k]},
                                    {"n_photon", dyn.mean[k].n_photon},
                                    {"a_bar", {dyn.mean[k].a_bar.real(), dyn.mean[k].a_bar.imag()}},
                                    {"g", dyn.drift(basis::momentum(a), basis::amplitude(a))}};
    }
    e["axes"] = axes;
    series[std::string(s.name())] = e;
    log.debug(std::string(s.name()) + ": max Re(eig) = " + format_double(st.max_real_part));
  }
  j["scenarios"] = series;
  io::write_output(o.out, dump(j));
  return 0;
}

// ---------------------------------------------------------------- dns

std::string peak_summary(const PeakSet& ps) {
  std::string s;
  for (const Peak& p : ps.peaks) {
    if (!s.empty()) s += "; ";
    s += "f=" + format_double(p.center / kTwoPi) + " Hz height=" + format_double(2.0 * p.height) +
         " width=" + format_double(p.width / kTwoPi) + " Hz";
  }
  return s.empty() ? "none" : s;
}

int run_dns(const CommonOptions& o, const std::string& grid_arg, bool exact, const std::string& plotscript,
            double prominence, const Logger& log) {
  auto cfg = resolve(o);
  if (!grid_arg.empty()) cfg.grid = parse_grid(grid_arg);
  if (cfg.grid.n_points == 0) throw ConfigError("no frequency grid: pass --grid or add a [dns] section");
  cfg.grid.validate();
  if (exact) cfg.mode = CoefficientMode::Exact;

  io::RunManifest m = io::make_manifest(cfg, "dns");
  m.add("psd_convention",
        "single-sided S(f) in m^2/Hz, equal to twice the two-sided symmetrized S(omega) per rad/s");
  m.add("coefficients", cfg.mode == CoefficientMode::Exact ? "exact" : "farfield");
  m.add("quantum_branch", "alpha; the beta branch gives the identical spectrum");

  std::vector<Spectrum> spectra;
  for (Scenario s : scenarios(o.scenario)) {
    ScanOptions so;
    so.mode = cfg.mode;
    spectra.push_back(scan(cfg.params, s, cfg.grid, so));
    const PeakSet ps = find_peaks(spectra.back(), prominence);
    m.add("peaks." + std::string(s.name()), peak_summary(ps));
    log.debug(std::string(s.name()) + ": " + std::to_string(ps.peaks.size()) + " peak(s)");
  }
  const std::vector<double>& w = spectra.front().frequencies;

  std::string content;
  if (o.format == "json") {
    json j;
    j["meta"] = io::manifest_json(m);
    std::vector<double> f(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) f[i] = w[i] / kTwoPi;
    j["frequency_hz"] = f;
    json series = json::object();
    for (const Spectrum& sp : spectra) {
      std::vector<double> v(sp.values.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * sp.values[i];
      series[std::string(sp.scenario.name())] = v;
    }
    j["psd_m2_per_hz"] = series;
    content = dump(j);
  } else {
    content = io::csv_header(m);
    content += "frequency_hz";
    for (const Spectrum& sp : spectra) content += ",psd_" + std::string(sp.scenario.name());
    content += "\n";
    for (std::size_t i = 0; i < w.size(); ++i) {
      content += format_double(w[i] / kTwoPi);
      for (const Spectrum& sp : spectra) content += "," + format_double(2.0 * sp.values[i]);
      content += "\n";
    }
  }
  io::write_output(o.out, content);

  if (!plotscript.empty()) {
    if (o.format != "csv" || o.out.empty() || o.out == "-")
      throw ConfigError("--plotscript needs --format csv and an --out file");
    std::vector<io::PlotSeries> series;
    for (std::size_t k = 0; k < spectra.size(); ++k) {
      const bool classical = !spectra[k].scenario.is_quantum();
      series.push_back({static_cast<int>(k + 2), classical ? "classical" : "quantum", classical ? "#1a9641" : "#d7191c"});
    }
    io::write_output(plotscript, io::gnuplot_script(o.out, series, "S_{xx} (m^2/Hz)"));
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

int run_sweep(const CommonOptions& o, const std::string& range_arg, bool bits, const Logger& log) {
  auto cfg = resolve(o);
  if (!range_arg.empty()) cfg.sweep = parse_range(range_arg);
  if (!cfg.sweep) throw ConfigError("no control range: pass --control-range or add a [sweep] section");
  cfg.sweep->validate();

  io::RunManifest m = io::make_manifest(cfg, "sweep");
  m.add("control", "C1x = C1y in N/m, reached by scaling m1 at fixed geometry (d_x = d_y)");
  m.add("sigma_tot", "entrywise 1-norm of the inter-mode block (X_x,Y_x) x (X_y,Y_y), vacuum variance 1/2");
  m.add("sigma_within", "|sigma(X_x,Y_x)| + |sigma(X_y,Y_y)|");
  m.add("discord_unit", bits ? "bits" : "nats");
  m.add("discord_xy", "measurement on the y cavity; discord_yx measures the x cavity");

  const double unit = bits ? 1.0 / std::log(2.0) : 1.0;
  std::vector<SweepResult> results;
  for (Scenario s : scenarios(o.scenario)) {
    results.push_back(sweep_c1(cfg.params, *cfg.sweep, s));
    const auto& r = results.back();
    const auto n_stable = std::count(r.stable.begin(), r.stable.end(), true);
    log.debug(std::string(s.name()) + ": " + std::to_string(n_stable) + "/" + std::to_string(r.stable.size()) +
              " stable points");
  }
  const bool labelled = results.size() > 1;

  std::string content;
  if (o.format == "json") {
    json j;
    j["meta"] = io::manifest_json(m);
    json series = json::object();
    for (const SweepResult& r : results) {
      json e;
      e["C1x"] = r.control;
      e["sigma_tot"] = r.sigma_tot;
      std::vector<double> dxy(r.discord_xy), dyx(r.discord_yx);
      for (auto& v : dxy) v *= unit;
      for (auto& v : dyx) v *= unit;
      e["discord_xy"] = dxy;
      e["discord_yx"] = dyx;
      e["stable"] = r.stable;
      e["sigma_within"] = r.within_mode;
      series[std::string(r.scenario.name())] = e;
    }
    j["scenarios"] = series;
    content = dump(j);
  } else {
    content = io::csv_header(m);
    content += labelled ? "scenario,C1x,sigma_tot,discord_xy,discord_yx,stable,sigma_within\n"
                        : "C1x,sigma_tot,discord_xy,discord_yx,stable,sigma_within\n";
    for (const SweepResult& r : results) {
      for (std::size_t i = 0; i < r.control.size(); ++i) {
        if (labelled) content += std::string(r.scenario.name()) + ",";
        content += format_double(r.control[i]) + "," + format_double(r.sigma_tot[i]) + "," +
                   format_double(r.discord_xy[i] * unit) + "," + format_double(r.discord_yx[i] * unit) + "," +
                   (r.stable[i] ? "1" : "0") + "," + format_double(r.within_mode[i]) + "\n";
      }
    }
  }
  io::write_output(o.out, content);
  return 0;
}

// ---------------------------------------------------------------- covariance

int run_covariance(const CommonOptions& o, bool exact, bool bits, const Logger& log) {
  const auto cfg = resolve(o);
  const CoefficientMode mode = exact ? CoefficientMode::Exact : cfg.mode;
  io::RunManifest m = io::make_manifest(cfg, "covariance");
  m.add("covariance_convention", "sigma_ij = <{dO_i, dO_j}>/2 in zero-point units, vacuum = I/2");
  m.add("discord_unit", bits ? "bits" : "nats");
  const double unit = bits ? 1.0 / std::log(2.0) : 1.0;

  json j;
  j["meta"] = io::manifest_json(m);
  j["basis"] = json(std::vector<std::string>(basis::labels.begin(), basis::labels.end()));
  json series = json::object();
  for (Scenario s : scenarios(o.scenario)) {
    const LinearDynamics dyn = build_dynamics(cfg.params, coefficients(cfg.params, s, mode));
    const CovarianceReport rep = covariance_report(dyn);
    if (!rep.well_conditioned)
      log.info(std::string(s.name()) + ": Lyapunov residual " + format_double(rep.relative_residual) +
               " x ||D|| exceeds " + format_double(lyapunov_tolerance));
    json e;
    e["stable"] = rep.stable;
    e["max_real_part"] = rep.max_real_part;
    e["sigma_full"] = matrix_json(rep.sigma_full);
    e["sigma_optical"] = matrix_json(rep.sigma_optical);
    e["sigma_tot"] = rep.sigma_tot;
    e["sigma_within"] = rep.within_mode;
    e["discord_xy"] = rep.discord_xy * unit;
    e["discord_yx"] = rep.discord_yx * unit;
    e["min_symplectic_eigenvalue"] = rep.min_symplectic;
    e["lyapunov_relative_residual"] = rep.relative_residual;
    series[std::string(s.name())] = e;
  }
  j["scenarios"] = series;
  io::write_output(o.out, dump(j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optomechanical probe of a gravitational source in superposition"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("gravprobe ") + io::kToolVersion);

  CommonOptions o;
  bool exact = false;
  bool bits = false;
  std::string grid;
  std::string range;
  std::string plotscript;
  double prominence = 1e-3;

  auto* validate_cmd = app.add_subcommand("validate", "Check a configuration and print its canonical form");
  add_common(validate_cmd, o, false, false);

  auto* coeffs_cmd = app.add_subcommand("coeffs", "Gravity coefficients for all scenarios (JSON)");
  add_common(coeffs_cmd, o, false, false);
  coeffs_cmd->add_flag("--exact", exact, "Also evaluate the exact (non far-field) coefficients");

  auto* dyn_cmd = app.add_subcommand("dynamics", "Drift/diffusion matrices and eigenvalues (JSON)");
  add_common(dyn_cmd, o, false, true);
  dyn_cmd->add_flag("--exact", exact, "Use exact coefficients");

  auto* dns_cmd = app.add_subcommand("dns", "Displacement noise spectrum");
  add_common(dns_cmd, o, true, true, "csv");
  dns_cmd->add_option("--grid", grid, "min,max,n[,lin|log] in Hz");
  dns_cmd->add_flag("--exact", exact, "Use exact coefficients");
  dns_cmd->add_option("--plotscript", plotscript, "Also write a gnuplot script overlaying the curves");
  dns_cmd->add_option("--prominence", prominence, "Relative peak prominence for the peak summary")
      ->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Optical correlations against C1x = C1y");
  add_common(sweep_cmd, o, true, true, "csv");
  sweep_cmd->add_option("--control-range", range, "a,b,n in N/m");
  sweep_cmd->add_flag("--bits", bits, "Report discord in bits instead of nats");

  auto* cov_cmd = app.add_subcommand("covariance", "Steady-state covariance matrices (JSON)");
  add_common(cov_cmd, o, false, true);
  cov_cmd->add_flag("--exact", exact, "Use exact coefficients");
  cov_cmd->add_flag("--bits", bits, "Report discord in bits instead of nats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Logger log{o.verbosity()};
  const auto start = std::chrono::steady_clock::now();
  try {
    int rc = 0;
    if (validate_cmd->parsed()) rc = run_validate(o, log);
    else if (coeffs_cmd->parsed()) rc = run_coeffs(o, exact, log);
    else if (dyn_cmd->parsed()) rc = run_dynamics(o, exact, log);
    else if (dns_cmd->parsed()) rc = run_dns(o, grid, exact, plotscript, prominence, log);
    else if (sweep_cmd->parsed()) rc = run_sweep(o, range, bits, log);
    else if (cov_cmd->parsed()) rc = run_covariance(o, exact, bits, log);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log.debug("threads: " + std::to_string(default_thread_count()));
    log.debug("wall time: " + format_double(secs) + " s");
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "gravprobe: config error: " << e.what() << "\n";
    return 2;
  } catch (const InstabilityError& e) {
    std::cerr << "gravprobe: unstable: " << e.what() << " (max Re(eig) = " << format_double(e.max_real_part())
              << " 1/s)\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "gravprobe: I/O error: " << e.what() << "\n";
    return 5;
  } catch (const UnphysicalStateError& e) {
    std::cerr << "gravprobe: numeric error: " << e.what() << " (min symplectic eigenvalue "
              << format_double(e.min_symplectic_eigenvalue()) << " < 1/2)\n";
    return 4;
  } catch (const NumericError& e) {
    std::cerr << "gravprobe: numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "gravprobe: error: " << e.what() << "\n";
    return 4;
  }
}
