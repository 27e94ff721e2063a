#pragma once

// Linearized fluctuation dynamics of the probe (two mechanical axes) read out by
// two cavities.
//
// State vector, in this fixed order, each canonical pair with vacuum variance 1/2:
//
//   0  x     = delta_x / (sqrt2 x_zpf,x)       4  X_x = (da_x + da_x^+) / sqrt2
//   1  p_x   = dp_x / sqrt(hbar m2 omega_x)    5  Y_x = (da_x - da_x^+) / (i sqrt2)
//   2  y     = delta_y / (sqrt2 x_zpf,y)       6  X_y
//   3  p_y   = dp_y / sqrt(hbar m2 omega_y)    7  Y_y
//
// with x_zpf,i = sqrt(hbar / (2 m2 omega_i)). The cavity frames are rotated so
// the mean field a_bar is real and positive; the optomechanical rate is then
// g_i = 2 chi_i |a_bar_i| x_zpf,i.

#include <array>
#include <cmath>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "gravprobe/coefficients.hpp"
#include "gravprobe/errors.hpp"
#include "gravprobe/linalg.hpp"
#include "gravprobe/parameters.hpp"

namespace gravprobe {

using Matrix8 = Eigen::Matrix<double, 8, 8>;
using NoiseInput = Eigen::Matrix<double, 8, 6>;

namespace basis {
inline constexpr int x = 0, p_x = 1, y = 2, p_y = 3, X_x = 4, Y_x = 5, X_y = 6, Y_y = 7;

inline constexpr std::array<std::string_view, 8> labels{"x", "p_x", "y", "p_y",
                                                        "X_x", "Y_x", "X_y", "Y_y"};

inline constexpr int position(Axis a) noexcept { return 2 * static_cast<int>(index(a)); }
inline constexpr int momentum(Axis a) noexcept { return position(a) + 1; }
inline constexpr int amplitude(Axis a) noexcept { return 4 + 2 * static_cast<int>(index(a)); }
inline constexpr int phase(Axis a) noexcept { return amplitude(a) + 1; }
}  // namespace basis

// Noise inputs, in the order of NoiseInput's columns.
namespace noise {
inline constexpr int xi_x = 0, xi_y = 1, X_in_x = 2, Y_in_x = 3, X_in_y = 4, Y_in_y = 5;

inline constexpr int thermal(Axis a) noexcept { return static_cast<int>(index(a)); }
inline constexpr int amplitude_in(Axis a) noexcept { return 2 + 2 * static_cast<int>(index(a)); }
inline constexpr int phase_in(Axis a) noexcept { return amplitude_in(a) + 1; }
}  // namespace noise

struct MeanField {
  std::complex<double> a_bar{};  // steady intracavity amplitude
  double delta = 0.0;            // effective detuning, rad/s
  double n_photon = 0.0;         // |a_bar|^2
};

/// Steady state of the driven cavity, a_bar = E / (kappa + i Delta_0). The
/// radiation-pressure shift of the detuning is neglected.
inline MeanField mean_field(const CavityAxis& cav) {
  if (cav.kappa == 0.0 && cav.detuning == 0.0)
    throw NumericError("mean_field: resonant drive of a lossless cavity is singular");
  const std::complex<double> a = drive_amplitude(cav) / std::complex<double>(cav.kappa, cav.detuning);
  return {a, cav.detuning, std::norm(a)};
}

/// Bose occupation 1 / (exp(hbar omega / kB T) - 1).
inline double bose_occupation(double omega, double temperature) {
  return 1.0 / std::expm1(PhysicalConstants::hbar * omega / (PhysicalConstants::kB * temperature));
}

inline double zero_point_length(double m2, double omega) {
  return std::sqrt(PhysicalConstants::hbar / (2.0 * m2 * omega));
}

struct LinearDynamics {
  Matrix8 drift = Matrix8::Zero();      // 1/s
  Matrix8 diffusion = Matrix8::Zero();  // 1/s, Markovian (Bose factor at omega_i)
  NoiseInput input = NoiseInput::Zero();
  std::array<double, 2> x_zpf{};   // m
  std::array<double, 2> omega_m{};  // rad/s
  std::array<double, 2> gamma_m{};  // rad/s
  std::array<MeanField, 2> mean{};
  double m2 = 0.0;
  double temperature = 0.0;
  Scenario scenario{};

  static constexpr const auto& basis_labels = basis::labels;

  /// Metres per unit of the dimensionless position coordinate.
  double position_scale(Axis a) const noexcept { return std::sqrt(2.0) * x_zpf[index(a)]; }
};

struct BuildOptions {
  // When false the cavity quadratures keep the phase of a_bar instead of being
  // rotated so that a_bar is real. Physical outputs are identical either way.
  bool rotate_to_real = true;
};

inline LinearDynamics build_dynamics(const SystemParameters& p, const GravityCoefficients& c,
                                     BuildOptions options = {}) {
  constexpr double hbar = PhysicalConstants::hbar;
  LinearDynamics dyn;
  dyn.m2 = p.m2;
  dyn.temperature = p.temperature;
  dyn.scenario = c.scenario;

  for (Axis a : kAxes) {
    const MechanicalAxis& mech = p.mech(a);
    const CavityAxis& cav = p.cavity(a);
    const MeanField mf = mean_field(cav);
    const std::size_t k = index(a);
    dyn.mean[k] = mf;
    dyn.omega_m[k] = mech.omega;
    dyn.gamma_m[k] = mech.gamma;
    dyn.x_zpf[k] = zero_point_length(p.m2, mech.omega);

    const double abs_a = std::abs(mf.a_bar);
    const double g = 2.0 * cav.chi() * abs_a * dyn.x_zpf[k];
    const double cos_phi = options.rotate_to_real || abs_a == 0.0 ? 1.0 : mf.a_bar.real() / abs_a;
    const double sin_phi = options.rotate_to_real || abs_a == 0.0 ? 0.0 : mf.a_bar.imag() / abs_a;

    const int q = basis::position(a);
    const int pm = basis::momentum(a);
    const int xq = basis::amplitude(a);
    const int yq = basis::phase(a);
    Matrix8& A = dyn.drift;
    A(q, pm) = mech.omega;
    A(pm, q) = -(mech.omega - c.c1(a) / (p.m2 * mech.omega));
    A(pm, pm) = -mech.gamma;
    A(pm, xq) = g * cos_phi;
    A(pm, yq) = g * sin_phi;
    A(xq, xq) = -cav.kappa;
    A(xq, yq) = mf.delta;
    A(xq, q) = -g * sin_phi;
    A(yq, yq) = -cav.kappa;
    A(yq, xq) = -mf.delta;
    A(yq, q) = g * cos_phi;

    dyn.input(pm, noise::thermal(a)) = 1.0 / std::sqrt(hbar * p.m2 * mech.omega);
    dyn.input(xq, noise::amplitude_in(a)) = std::sqrt(2.0 * cav.kappa);
    dyn.input(yq, noise::phase_in(a)) = std::sqrt(2.0 * cav.kappa);

    const double nbar = bose_occupation(mech.omega, p.temperature);
    dyn.diffusion(pm, pm) = mech.gamma * (2.0 * nbar + 1.0);
    dyn.diffusion(xq, xq) = cav.kappa;
    dyn.diffusion(yq, yq) = cav.kappa;
  }

  const double cross = c.c2 / (p.m2 * std::sqrt(p.mech_x.omega * p.mech_y.omega));
  dyn.drift(basis::p_x, basis::y) = cross;
  dyn.drift(basis::p_y, basis::x) = cross;

  if (!dyn.drift.allFinite()) throw NumericError("build_dynamics: drift matrix is not finite");
  const Eigen::SelfAdjointEigenSolver<Matrix8> es(dyn.diffusion, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * dyn.diffusion.norm())
    throw NumericError("build_dynamics: diffusion matrix is not positive semidefinite");
  return dyn;
}

struct StabilityReport {
  bool stable = false;
  double max_real_part = 0.0;  // 1/s
  Eigen::VectorXcd eigenvalues;
};

inline StabilityReport stability(const LinearDynamics& dyn) {
  StabilityReport out;
  out.eigenvalues = linalg::eigenvalues(dyn.drift);
  out.max_real_part = out.eigenvalues.real().maxCoeff();
  out.stable = out.max_real_part < 0.0;
  return out;
}

/// Optical-spring-modified stiffness and damping of one mechanical axis.
class EffectiveResponse {
public:
  EffectiveResponse(double omega_m, double gamma_m, double m2, double chi, double kappa,
                    double delta, double n_photon, double c1)
      : omega_m_(omega_m), gamma_m_(gamma_m), m2_(m2), kappa_(kappa), delta_(delta), c1_(c1),
        optical_(PhysicalConstants::hbar * chi * chi * n_photon) {}

  /// (kappa^2 + Delta^2 + w^2)^2 - 4 Delta^2 w^2, the cavity susceptibility denominator.
  double cavity_denominator(double w) const {
    const double s = kappa_ * kappa_ + delta_ * delta_ + w * w;
    const double den = s * s - 4.0 * delta_ * delta_ * w * w;
    if (!(den != 0.0)) throw NumericError("effective response: cavity denominator vanishes");
    return den;
  }

  double omega_eff_sq(double w) const {
    const double spring = optical_ == 0.0 || delta_ == 0.0
                              ? 0.0
                              : 2.0 * optical_ * delta_ * (w * w - kappa_ * kappa_ - delta_ * delta_) /
                                    (m2_ * cavity_denominator(w));
    return omega_m_ * omega_m_ + spring - c1_ / m2_;
  }

  double gamma_eff(double w) const {
    const double damping = optical_ == 0.0 || delta_ == 0.0
                               ? 0.0
                               : 4.0 * optical_ * delta_ * kappa_ / (m2_ * cavity_denominator(w));
    return gamma_m_ + damping;
  }

  /// hbar chi^2 |a_bar|^2, J / m^2.
  double optical_strength() const noexcept { return optical_; }
  double kappa() const noexcept { return kappa_; }
  double delta() const noexcept { return delta_; }

private:
  double omega_m_, gamma_m_, m2_, kappa_, delta_, c1_, optical_;
};

inline EffectiveResponse effective_response(const SystemParameters& p, const MeanField& mean,
                                            const GravityCoefficients& c, Axis axis) {
  const MechanicalAxis& mech = p.mech(axis);
  const CavityAxis& cav = p.cavity(axis);
  return {mech.omega, mech.gamma, p.m2, cav.chi(), cav.kappa, mean.delta, mean.n_photon, c.c1(axis)};
}

/// Frequency in [lo, hi] where omega_eff^2(w) = w^2, located by bisection.
/// Falls back to the grid minimiser of |omega_eff^2(w) - w^2| when the ends
/// do not bracket a root.
inline double effective_resonance(const EffectiveResponse& r, double lo, double hi) {
  auto h = [&](double w) { return r.omega_eff_sq(w) - w * w; };
  double flo = h(lo);
  double fhi = h(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) != (fhi > 0.0)) {
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = h(mid);
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  double best = lo;
  double best_val = std::abs(flo);
  constexpr int n = 10001;
  for (int i = 1; i < n; ++i) {
    const double w = lo + (hi - lo) * i / (n - 1);
    const double v = std::abs(h(w));
    if (v < best_val) {
      best_val = v;
      best = w;
    }
  }
  return best;
}

}  // namespace gravprobe
