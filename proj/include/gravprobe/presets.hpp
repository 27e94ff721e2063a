#pragma once

// Built-in parameter sets: fig3 (noise spectrum comparison) and fig4
// (correlation sweep). Values that had to be chosen rather than taken from the
// reference set are listed in Preset::assumptions and echoed into every output
// manifest.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gravprobe/constants.hpp"
#include "gravprobe/correlations.hpp"
#include "gravprobe/errors.hpp"
#include "gravprobe/parameters.hpp"
#include "gravprobe/spectra.hpp"

namespace gravprobe {

struct Preset {
  std::string name;
  SystemParameters params;
  FrequencyGrid grid;                  // default DNS grid, rad/s
  std::optional<ControlRange> sweep;   // default C1,x range, N/m
  std::vector<std::pair<std::string, std::string>> assumptions;
};

/// Noise spectrum comparison: m1 = 5e-14 kg, m2 = 9.5e-19 kg, d_x = 1e-9 m,
/// d_y = 2.9e-4 m, omega_x = 2pi 1e4 Hz, omega_y = 2pi 9.5e3 Hz,
/// gamma_x = 2pi 100 Hz, gamma_y = 2pi 3e-3 Hz, T = 4 mK,
/// E_y = 2e4 E_x = 8e14 Hz, kappa_x = 1e3 kappa_y = 9e8 Hz,
/// omega_c,y = 1e5 omega_c,x = 2pi 3.7e15 Hz.
inline Preset fig3_preset() {
  Preset out;
  out.name = "fig3";
  SystemParameters& p = out.params;
  p.m1 = 5e-14;
  p.m2 = 9.5e-19;
  p.temperature = 4e-3;
  p.geometry.d_x = 1e-9;
  p.geometry.d_y = 2.9e-4;
  p.mech_x = {kTwoPi * 1e4, kTwoPi * 100.0, 0.0};
  p.mech_y = {kTwoPi * 9.5e3, kTwoPi * 3e-3, 0.0};

  p.cav_x.omega_c = kTwoPi * 3.7e10;
  p.cav_x.kappa = 9e8;
  p.cav_x.drive = DriveAmplitude{4e10};
  p.cav_x.length = 1e-3;
  p.cav_x.detuning = p.mech_x.omega;

  p.cav_y.omega_c = kTwoPi * 3.7e15;
  p.cav_y.kappa = 9e5;
  p.cav_y.drive = DriveAmplitude{8e14};
  p.cav_y.length = 1.5e-16;
  p.cav_y.detuning = kTwoPi * 1.5e-49;

  out.grid = {kTwoPi * 8.5e3, kTwoPi * 1.1e4, 10000, Spacing::Linear};
  out.assumptions = {
      {"cav_x.length", "1e-3 m (assumed)"},
      {"cav_x.detuning", "omega_x, mechanical sideband (assumed)"},
      {"cav_y.length", "1.5e-16 m (assumed; chosen so the y peak is resolvable, unphysical)"},
      {"cav_y.detuning",
       "2pi x 1.5e-49 Hz (assumed; 1e-3 m with Delta = omega_y is unstable, phenomenology only)"},
      {"rates", "kappa and E taken as rates in 1/s"},
  };
  return out;
}

/// Correlation sweep: d_x,y ~ 1e-6 m, m1,2 = 5e-10 kg, mechanical modes at
/// 2pi 1e7 Hz, T = 4 mK, gamma_x,y = 2pi 100 Hz, cavity length 1 mm,
/// finesse 1.07e4.
inline Preset fig4_preset() {
  Preset out;
  out.name = "fig4";
  SystemParameters& p = out.params;
  p.m1 = 5e-10;
  p.m2 = 5e-10;
  p.temperature = 4e-3;
  p.geometry.d_x = 1e-6;
  p.geometry.d_y = 1e-6;
  p.mech_x = {kTwoPi * 1e7, kTwoPi * 100.0, 0.0};
  p.mech_y = p.mech_x;

  constexpr double length = 1e-3;
  constexpr double finesse = 1.07e4;
  constexpr double wavelength = 1064e-9;
  CavityAxis cav;
  cav.length = length;
  cav.kappa = kPi * PhysicalConstants::c / (2.0 * length * finesse);
  cav.omega_c = kTwoPi * PhysicalConstants::c / wavelength;
  cav.detuning = p.mech_x.omega;
  cav.drive = LaserPower{1e-2};
  p.cav_x = cav;
  p.cav_y = cav;

  out.grid = {kTwoPi * 9.5e6, kTwoPi * 1.05e7, 10000, Spacing::Linear};
  out.sweep = ControlRange{0.0, 1e5, 100};
  out.assumptions = {
      {"cav.power", "10 mW per cavity (assumed; discord magnitude is order-of-magnitude only)"},
      {"cav.wavelength", "1064 nm (assumed)"},
      {"cav.detuning", "omega_m, mechanical sideband (assumed)"},
      {"cav.kappa", "pi c / (2 L F) from the cavity length and finesse"},
  };
  return out;
}

inline std::vector<std::string_view> preset_names() { return {"fig3", "fig4"}; }

inline Preset preset(std::string_view name) {
  if (name == "fig3") return fig3_preset();
  if (name == "fig4") return fig4_preset();
  throw ConfigError("unknown preset '" + std::string(name) + "' (available: fig3, fig4)");
}

}  // namespace gravprobe
