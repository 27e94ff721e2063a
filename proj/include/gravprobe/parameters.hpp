#pragma once

// Physical configuration of the two-axis probe: source/probe masses, geometry,
// the two mechanical axes and the two cavities reading them out.
//
// All frequencies and rates are angular (rad/s). The config loader is the only
// place where ordinary Hz appear.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gravprobe/constants.hpp"
#include "gravprobe/errors.hpp"

namespace gravprobe {

enum class Axis { X = 0, Y = 1 };

inline constexpr std::array<Axis, 2> kAxes{Axis::X, Axis::Y};

inline constexpr std::size_t index(Axis a) noexcept { return static_cast<std::size_t>(a); }
inline constexpr Axis other(Axis a) noexcept { return a == Axis::X ? Axis::Y : Axis::X; }
inline constexpr std::string_view name(Axis a) noexcept { return a == Axis::X ? "x" : "y"; }

struct Geometry {
  double d_x = 0.0;     // half-separation of the superposition along x, m
  double d_y = 0.0;     // source-probe offset along y, m
  double x2_bar = 0.0;  // probe mean x offset, m
  // Far-field formulas are accepted only when d_x >= farfield_factor * |x2_bar|.
  double farfield_factor = 1e3;

  double d() const noexcept { return std::hypot(d_x, d_y); }
};

struct MechanicalAxis {
  double omega = 0.0;  // trap frequency, rad/s
  double gamma = 0.0;  // damping rate, rad/s
  double r_osc = 0.0;  // trap centre, m
};

struct LaserPower {
  double watts = 0.0;
};

struct DriveAmplitude {
  double per_second = 0.0;
};

using Drive = std::variant<LaserPower, DriveAmplitude>;

struct CavityAxis {
  double omega_c = 0.0;   // cavity mode frequency, rad/s
  double detuning = 0.0;  // Delta_0 = omega_c - omega_0, rad/s, either sign
  double kappa = 0.0;     // photon decay rate, 1/s
  double length = 0.0;    // m
  Drive drive = DriveAmplitude{};

  double omega_0() const noexcept { return omega_c - detuning; }
  double chi() const noexcept { return omega_c / length; }
};

struct SystemParameters {
  PhysicalConstants constants{};
  double m1 = 0.0;  // source mass, kg
  double m2 = 0.0;  // probe mass, kg
  Geometry geometry{};
  MechanicalAxis mech_x{};
  MechanicalAxis mech_y{};
  CavityAxis cav_x{};
  CavityAxis cav_y{};
  double temperature = 0.0;  // K

  const MechanicalAxis& mech(Axis a) const noexcept { return a == Axis::X ? mech_x : mech_y; }
  MechanicalAxis& mech(Axis a) noexcept { return a == Axis::X ? mech_x : mech_y; }
  const CavityAxis& cavity(Axis a) const noexcept { return a == Axis::X ? cav_x : cav_y; }
  CavityAxis& cavity(Axis a) noexcept { return a == Axis::X ? cav_x : cav_y; }
};

enum class ScenarioTag { QuantumAlpha, QuantumBeta, Classical };

struct Scenario {
  ScenarioTag tag = ScenarioTag::Classical;

  static constexpr Scenario alpha() noexcept { return {ScenarioTag::QuantumAlpha}; }
  static constexpr Scenario beta() noexcept { return {ScenarioTag::QuantumBeta}; }
  static constexpr Scenario classical() noexcept { return {ScenarioTag::Classical}; }

  constexpr bool is_quantum() const noexcept { return tag != ScenarioTag::Classical; }

  /// s_gamma: +1 for the alpha branch, -1 for beta, empty for the classical average.
  constexpr std::optional<double> branch_sign() const noexcept {
    switch (tag) {
      case ScenarioTag::QuantumAlpha: return 1.0;
      case ScenarioTag::QuantumBeta: return -1.0;
      case ScenarioTag::Classical: break;
    }
    return std::nullopt;
  }

  constexpr std::string_view name() const noexcept {
    switch (tag) {
      case ScenarioTag::QuantumAlpha: return "quantum_alpha";
      case ScenarioTag::QuantumBeta: return "quantum_beta";
      case ScenarioTag::Classical: break;
    }
    return "classical";
  }

  friend constexpr bool operator==(Scenario, Scenario) = default;
};

/// Drive amplitude E = sqrt(2 kappa P / (hbar omega_0)), or the stored amplitude.
inline double drive_amplitude(const CavityAxis& cav) {
  if (const auto* p = std::get_if<LaserPower>(&cav.drive)) {
    return std::sqrt(2.0 * cav.kappa * p->watts / (PhysicalConstants::hbar * cav.omega_0()));
  }
  return std::get<DriveAmplitude>(cav.drive).per_second;
}

/// Inverse of drive_amplitude: P = E^2 hbar omega_0 / (2 kappa).
inline double laser_power(const CavityAxis& cav) {
  if (const auto* p = std::get_if<LaserPower>(&cav.drive)) return p->watts;
  const double e = std::get<DriveAmplitude>(cav.drive).per_second;
  return e * e * PhysicalConstants::hbar * cav.omega_0() / (2.0 * cav.kappa);
}

namespace detail {

class IssueCollector {
public:
  void finite(std::string_view path, double v) {
    if (!std::isfinite(v)) add(path, "must be finite");
  }
  void positive(std::string_view path, double v) {
    if (!std::isfinite(v)) add(path, "must be finite");
    else if (!(v > 0.0)) add(path, "must be positive");
  }
  void non_negative(std::string_view path, double v) {
    if (!std::isfinite(v)) add(path, "must be finite");
    else if (v < 0.0) add(path, "must be non-negative");
  }
  void add(std::string_view path, std::string_view what) {
    issues_.push_back(std::string(path) + " " + std::string(what));
  }
  std::vector<std::string> take() { return std::move(issues_); }

private:
  std::vector<std::string> issues_;
};

}  // namespace detail

/// Returns the record unchanged if every invariant holds, otherwise throws
/// ValidationError listing all violations.
inline SystemParameters validate(const SystemParameters& p) {
  detail::IssueCollector c;
  c.positive("m1", p.m1);
  c.positive("m2", p.m2);
  c.positive("temperature", p.temperature);
  c.positive("geometry.d_x", p.geometry.d_x);
  c.positive("geometry.d_y", p.geometry.d_y);
  c.finite("geometry.x2_bar", p.geometry.x2_bar);
  c.positive("geometry.farfield_factor", p.geometry.farfield_factor);
  for (Axis a : kAxes) {
    const std::string mech = "mech_" + std::string(name(a));
    c.positive(mech + ".omega", p.mech(a).omega);
    c.positive(mech + ".gamma", p.mech(a).gamma);
    c.finite(mech + ".r_osc", p.mech(a).r_osc);

    const std::string cav = "cav_" + std::string(name(a));
    const CavityAxis& k = p.cavity(a);
    c.positive(cav + ".omega_c", k.omega_c);
    c.finite(cav + ".detuning", k.detuning);
    c.positive(cav + ".kappa", k.kappa);
    c.positive(cav + ".length", k.length);
    if (const auto* pw = std::get_if<LaserPower>(&k.drive)) {
      c.non_negative(cav + ".power", pw->watts);
      if (std::isfinite(k.omega_c) && std::isfinite(k.detuning) && !(k.omega_0() > 0.0))
        c.add(cav + ".detuning", "must leave a positive laser frequency omega_c - detuning");
    } else {
      c.non_negative(cav + ".drive", std::get<DriveAmplitude>(k.drive).per_second);
    }
  }
  auto issues = c.take();
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return p;
}

struct DerivedQuantities {
  double d = 0.0;                     // m
  std::array<double, 2> chi{};        // omega_c / L, 1/(m s)
  std::array<double, 2> drive{};      // E, 1/s
  std::array<double, 2> detuning{};   // Delta_0, rad/s
  std::array<double, 2> power{};      // P, W
};

inline DerivedQuantities derive(const SystemParameters& p) {
  DerivedQuantities out;
  out.d = p.geometry.d();
  for (Axis a : kAxes) {
    const CavityAxis& k = p.cavity(a);
    out.chi[index(a)] = k.chi();
    out.drive[index(a)] = drive_amplitude(k);
    out.detuning[index(a)] = k.detuning;
    out.power[index(a)] = laser_power(k);
  }
  return out;
}

}  // namespace gravprobe
