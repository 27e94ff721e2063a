#pragma once

// Taylor coefficients of the gravitational force on the probe, expanded to first
// order in the probe displacement:
//
//   F_i = c0_i + c1_i * delta_i + c2 * delta_j      (j != i)
//
// For the quantum scenario the source sits at (s d_x, 0, 0) with s = +1 (alpha)
// or -1 (beta); the classical scenario averages the two branches.

#include <cmath>
#include <string>
#include <utility>

#include "gravprobe/errors.hpp"
#include "gravprobe/parameters.hpp"

namespace gravprobe {

enum class CoefficientMode { FarField, Exact };

/// What a coefficient set was computed from; branches are only averaged when these match.
struct CoefficientSource {
  double gm1m2 = 0.0;  // G m1 m2, N m^2
  double d_x = 0.0;
  double d_y = 0.0;
  double x2_bar = 0.0;
  CoefficientMode mode = CoefficientMode::FarField;

  friend bool operator==(const CoefficientSource&, const CoefficientSource&) = default;
};

struct GravityCoefficients {
  double c0_x = 0.0;  // N
  double c0_y = 0.0;  // N
  double c1_x = 0.0;  // N/m
  double c1_y = 0.0;  // N/m
  double c2 = 0.0;    // N/m, shared by both axes
  Scenario scenario{};
  CoefficientSource source{};

  double c0(Axis a) const noexcept { return a == Axis::X ? c0_x : c0_y; }
  double c1(Axis a) const noexcept { return a == Axis::X ? c1_x : c1_y; }

  /// Every coefficient multiplied by `factor` (all are linear in m1 m2).
  GravityCoefficients scaled(double factor) const noexcept {
    GravityCoefficients out = *this;
    out.c0_x *= factor;
    out.c0_y *= factor;
    out.c1_x *= factor;
    out.c1_y *= factor;
    out.c2 *= factor;
    out.source.gm1m2 *= factor;
    return out;
  }
};

/// Exact expansion about the probe's mean position (x2_bar, d_y) for one branch.
inline GravityCoefficients exact_coefficients(const SystemParameters& p, Scenario scenario) {
  const auto sign = scenario.branch_sign();
  if (!sign) throw ConfigError("exact_coefficients needs a quantum branch (alpha or beta)");
  const double s = *sign;
  const Geometry& g = p.geometry;

  const double lever = s * g.d_x - g.x2_bar;  // source minus probe, along x
  const double h2 = lever * lever + g.d_y * g.d_y;
  const double h = std::sqrt(h2);
  if (!(h > 0.0)) throw NumericError("singular configuration: source and probe coincide (h_gamma = 0)");
  const double big_g = PhysicalConstants::G * p.m1 * p.m2 / (h2 * h);

  GravityCoefficients out;
  out.scenario = scenario;
  out.source = {PhysicalConstants::G * p.m1 * p.m2, g.d_x, g.d_y, g.x2_bar, CoefficientMode::Exact};
  out.c0_x = big_g * lever;
  out.c0_y = big_g * g.d_y;
  out.c1_x = big_g / h2 * (3.0 * lever * lever - h2);
  out.c1_y = big_g / h2 * (3.0 * g.d_y * g.d_y - h2);
  out.c2 = -3.0 * big_g / h2 * lever * g.d_y;
  return out;
}

/// Entrywise mean of the two branches, tagged Classical.
inline GravityCoefficients classical_average(const GravityCoefficients& alpha,
                                             const GravityCoefficients& beta) {
  if (!alpha.scenario.is_quantum() || !beta.scenario.is_quantum() ||
      alpha.scenario == beta.scenario)
    throw ConfigError("classical_average needs one alpha and one beta branch");
  if (!(alpha.source == beta.source))
    throw ConfigError("classical_average: branches were computed from different parameters");
  GravityCoefficients out;
  out.scenario = Scenario::classical();
  out.source = alpha.source;
  out.c0_x = 0.5 * (alpha.c0_x + beta.c0_x);
  out.c0_y = 0.5 * (alpha.c0_y + beta.c0_y);
  out.c1_x = 0.5 * (alpha.c1_x + beta.c1_x);
  out.c1_y = 0.5 * (alpha.c1_y + beta.c1_y);
  out.c2 = 0.5 * (alpha.c2 + beta.c2);
  return out;
}

inline void check_farfield(const Geometry& g) {
  if (g.d_x < g.farfield_factor * std::abs(g.x2_bar)) {
    throw ConfigError("far-field guard violated: d_x = " + std::to_string(g.d_x) +
                      " m is not >= " + std::to_string(g.farfield_factor) +
                      " * |x2_bar|; use exact_coefficients (coefficient mode 'exact') instead");
  }
}

/// Limit d_x >> x2_bar. c0 comes from the exact cells at x2_bar = 0; c2 is zero
/// for the classical scenario by construction.
inline GravityCoefficients farfield_coefficients(const SystemParameters& p, Scenario scenario) {
  check_farfield(p.geometry);
  const Geometry& g = p.geometry;
  const double d2 = g.d_x * g.d_x + g.d_y * g.d_y;
  const double d = std::sqrt(d2);
  const double gm = PhysicalConstants::G * p.m1 * p.m2;
  const double d3 = d2 * d;
  const double d5 = d3 * d2;

  GravityCoefficients out;
  out.scenario = scenario;
  out.source = {gm, g.d_x, g.d_y, g.x2_bar, CoefficientMode::FarField};
  out.c1_x = gm * (2.0 * g.d_x * g.d_x - g.d_y * g.d_y) / d5;
  out.c1_y = gm * (2.0 * g.d_y * g.d_y - g.d_x * g.d_x) / d5;
  out.c0_y = gm / d3 * g.d_y;
  if (const auto s = scenario.branch_sign()) {
    out.c0_x = gm / d3 * (*s) * g.d_x;
    out.c2 = -3.0 * gm * g.d_x * g.d_y * (*s) / d5;
  }
  return out;
}

/// Coefficients for any scenario in the requested mode. In exact mode the
/// classical scenario is the mean of the exact branches.
inline GravityCoefficients coefficients(const SystemParameters& p, Scenario scenario,
                                        CoefficientMode mode = CoefficientMode::FarField) {
  if (mode == CoefficientMode::FarField) return farfield_coefficients(p, scenario);
  if (scenario.is_quantum()) return exact_coefficients(p, scenario);
  return classical_average(exact_coefficients(p, Scenario::alpha()),
                           exact_coefficients(p, Scenario::beta()));
}

struct SteadyDisplacement {
  double x2 = 0.0;  // m
  double y2 = 0.0;  // m
};

/// Far-field shift of the probe's rest position caused by the source.
inline SteadyDisplacement steady_displacement(const SystemParameters& p, Scenario scenario) {
  const Geometry& g = p.geometry;
  const double d = g.d();
  const double d3 = d * d * d;
  const double gm1 = PhysicalConstants::G * p.m1;
  SteadyDisplacement out;
  out.y2 = gm1 * g.d_y / (p.mech_y.omega * p.mech_y.omega * d3);
  if (const auto s = scenario.branch_sign())
    out.x2 = gm1 * g.d_x * (*s) / (p.mech_x.omega * p.mech_x.omega * d3);
  return out;
}

/// Trap centre that cancels the mean radiation-pressure displacement.
inline double trap_recenter(const SystemParameters& p, double mean_photon_number, Axis axis) {
  const double omega = p.mech(axis).omega;
  return -PhysicalConstants::hbar * p.cavity(axis).chi() * mean_photon_number /
         (p.m2 * omega * omega);
}

}  // namespace gravprobe
