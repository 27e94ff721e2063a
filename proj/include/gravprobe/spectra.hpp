#pragma once

// Displacement noise spectrum of the probe's x motion.
//
// Two independent routes:
//   * SpectrumModel: closed form obtained by eliminating the cavity fields and
//     then the y motion in the frequency domain;
//   * ResolventOracle: solves the full 8x8 frequency-domain system
//     (-i w I - A) v = B n(w) and sums the input-noise spectra.
// Both are two-sided symmetrized PSDs in m^2 s (per rad/s).

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gravprobe/coefficients.hpp"
#include "gravprobe/dynamics.hpp"
#include "gravprobe/errors.hpp"
#include "gravprobe/linalg.hpp"
#include "gravprobe/parallel.hpp"
#include "gravprobe/parameters.hpp"

namespace gravprobe {

/// w coth(hbar w / 2 kB T), with its w -> 0 limit 2 kB T / hbar.
inline double thermal_weight(double w, double temperature) {
  const double kt = PhysicalConstants::kB * temperature;
  if (w == 0.0) return 2.0 * kt / PhysicalConstants::hbar;
  const double x = PhysicalConstants::hbar * w / (2.0 * kt);
  return w / std::tanh(x);
}

/// Symmetrized thermal force PSD hbar m gamma w coth(hbar w / 2 kB T), N^2 s.
inline double thermal_force_psd(double m2, double gamma, double w, double temperature) {
  return PhysicalConstants::hbar * m2 * gamma * thermal_weight(w, temperature);
}

class SpectrumModel {
public:
  SpectrumModel(const SystemParameters& p, Scenario scenario,
                CoefficientMode mode = CoefficientMode::FarField)
      : SpectrumModel(p, coefficients(p, scenario, mode)) {}

  SpectrumModel(const SystemParameters& p, const GravityCoefficients& c)
      : m2_(p.m2),
        temperature_(p.temperature),
        c2_(c.c2),
        gamma_{p.mech_x.gamma, p.mech_y.gamma},
        response_{effective_response(p, mean_field(p.cav_x), c, Axis::X),
                  effective_response(p, mean_field(p.cav_y), c, Axis::Y)},
        scenario_(c.scenario) {}

  const EffectiveResponse& response(Axis a) const { return response_[index(a)]; }
  Scenario scenario() const noexcept { return scenario_; }
  double c2() const noexcept { return c2_; }

  /// Radiation-pressure (backaction) force PSD of one cavity, N^2 s.
  double backaction_psd(Axis a, double w) const {
    const EffectiveResponse& r = response(a);
    if (r.optical_strength() == 0.0) return 0.0;
    const double k = r.kappa();
    const double d = r.delta();
    return 2.0 * PhysicalConstants::hbar * r.optical_strength() * k * (k * k + d * d + w * w) /
           r.cavity_denominator(w);
  }

  double force_psd(Axis a, double w) const {
    return thermal_force_psd(m2_, gamma_[index(a)], w, temperature_) + backaction_psd(a, w);
  }

  /// |omega_eff^2 - w^2 - i gamma_eff w|^2, s^-4.
  double inverse_susceptibility_sq(Axis a, double w) const {
    const EffectiveResponse& r = response(a);
    const double re = r.omega_eff_sq(w) - w * w;
    const double im = r.gamma_eff(w) * w;
    return re * re + im * im;
  }

  double operator()(double w) const {
    const EffectiveResponse& rx = response_[0];
    const EffectiveResponse& ry = response_[1];
    const double gx = inverse_susceptibility_sq(Axis::X, w);
    const double gy = inverse_susceptibility_sq(Axis::Y, w);
    const double m2sq = m2_ * m2_;
    const double c2sq = c2_ * c2_;
    const double f = (rx.omega_eff_sq(w) - w * w) * (ry.omega_eff_sq(w) - w * w) -
                     rx.gamma_eff(w) * ry.gamma_eff(w) * w * w;
    const double numerator = m2sq * gy * force_psd(Axis::X, w) + c2sq * force_psd(Axis::Y, w);
    const double denominator = m2sq * m2sq * gx * gy - 2.0 * m2sq * c2sq * f + c2sq * c2sq;
    return numerator / denominator;
  }

private:
  double m2_;
  double temperature_;
  double c2_;
  std::array<double, 2> gamma_;
  std::array<EffectiveResponse, 2> response_;
  Scenario scenario_;
};

inline double dns_closed_form(double w, const SystemParameters& p, Scenario scenario) {
  return SpectrumModel(p, scenario)(w);
}

/// Full-matrix frequency-domain route, used as the independent check of SpectrumModel.
class ResolventOracle {
public:
  explicit ResolventOracle(LinearDynamics dyn)
      : dyn_(std::move(dyn)), scale_(linalg::balancing_scale(dyn_.drift)) {}

  ResolventOracle(const SystemParameters& p, Scenario scenario,
                  CoefficientMode mode = CoefficientMode::FarField, BuildOptions options = {})
      : ResolventOracle(build_dynamics(p, coefficients(p, scenario, mode), options)) {}

  /// Transfer row from the six noise inputs to delta_x (metres per unit input).
  Eigen::Matrix<std::complex<double>, 1, 6> transfer(double w) const {
    using C8 = Eigen::Matrix<std::complex<double>, 8, 8>;
    using CIn = Eigen::Matrix<std::complex<double>, 8, 6>;
    const std::complex<double> iw(0.0, w);
    C8 m = -dyn_.drift.cast<std::complex<double>>();
    m.diagonal().array() -= iw;
    // Balanced system: (D^-1 M D) (D^-1 X) = D^-1 B.
    const Eigen::Matrix<double, 8, 1> d = scale_;
    const C8 mb = d.cwiseInverse().asDiagonal() * m * d.asDiagonal();
    const CIn rhs = d.cwiseInverse().asDiagonal() * dyn_.input.cast<std::complex<double>>();
    const Eigen::FullPivLU<C8> lu(mb);
    if (!lu.isInvertible()) throw NumericError("resolvent is singular at this frequency");
    const CIn y = lu.solve(rhs);
    return (d(basis::x) * dyn_.position_scale(Axis::X)) * y.row(basis::x);
  }

  double operator()(double w) const {
    const auto t = transfer(w);
    double s = 0.0;
    for (Axis a : kAxes) {
      const double thermal = thermal_force_psd(dyn_.m2, dyn_.gamma_m[index(a)], w, dyn_.temperature);
      s += std::norm(t(noise::thermal(a))) * thermal;
      // Vacuum input quadratures: symmetrized PSD 1/2 each, uncorrelated.
      s += 0.5 * std::norm(t(noise::amplitude_in(a)));
      s += 0.5 * std::norm(t(noise::phase_in(a)));
    }
    return s;
  }

  const LinearDynamics& dynamics() const noexcept { return dyn_; }

private:
  LinearDynamics dyn_;
  Eigen::VectorXd scale_;
};

inline double dns_matrix_oracle(double w, const SystemParameters& p, Scenario scenario) {
  return ResolventOracle(p, scenario)(w);
}

enum class Spacing { Linear, Log };

struct FrequencyGrid {
  double omega_min = 0.0;  // rad/s
  double omega_max = 0.0;  // rad/s
  std::size_t n_points = 0;
  Spacing spacing = Spacing::Linear;

  void validate() const {
    if (n_points < 2) throw ConfigError("grid: n_points must be at least 2");
    if (!std::isfinite(omega_min) || !std::isfinite(omega_max))
      throw ConfigError("grid: bounds must be finite");
    if (!(omega_min < omega_max)) throw ConfigError("grid: omega_min must be below omega_max");
    if (omega_min < 0.0) throw ConfigError("grid: frequencies must be non-negative");
    if (spacing == Spacing::Log && !(omega_min > 0.0))
      throw ConfigError("grid: log spacing needs omega_min > 0");
  }

  std::vector<double> points() const {
    validate();
    std::vector<double> w(n_points);
    const double last = static_cast<double>(n_points - 1);
    if (spacing == Spacing::Linear) {
      for (std::size_t i = 0; i < n_points; ++i)
        w[i] = omega_min + (omega_max - omega_min) * (static_cast<double>(i) / last);
    } else {
      const double a = std::log(omega_min);
      const double b = std::log(omega_max);
      for (std::size_t i = 0; i < n_points; ++i) w[i] = std::exp(a + (b - a) * (static_cast<double>(i) / last));
    }
    w.front() = omega_min;
    w.back() = omega_max;
    return w;
  }
};

struct Spectrum {
  std::vector<double> frequencies;  // rad/s, strictly increasing
  std::vector<double> values;       // m^2 s, two-sided
  Scenario scenario{};
  std::map<std::string, std::string> metadata;
};

struct ScanOptions {
  unsigned threads = default_thread_count();
  CoefficientMode mode = CoefficientMode::FarField;
};

inline Spectrum scan(const SystemParameters& p, Scenario scenario, const FrequencyGrid& grid,
                     ScanOptions options = {}) {
  Spectrum out;
  out.scenario = scenario;
  out.frequencies = grid.points();
  out.values.resize(out.frequencies.size());
  const SpectrumModel model(p, scenario, options.mode);
  parallel_for(out.frequencies.size(), options.threads,
               [&](std::size_t i) { out.values[i] = model(out.frequencies[i]); });
  return out;
}

struct Peak {
  std::size_t index = 0;
  double center = 0.0;      // rad/s
  double height = 0.0;      // m^2 s
  double prominence = 0.0;  // m^2 s
  double width = 0.0;       // rad/s, full width at half prominence
};

struct PeakSet {
  std::vector<Peak> peaks;
};

/// Local maxima whose topographic prominence is at least prominence_rel times
/// the global maximum. Plateaus count once, at their middle sample.
inline PeakSet find_peaks(const Spectrum& spec, double prominence_rel) {
  const auto& v = spec.values;
  const auto& w = spec.frequencies;
  PeakSet out;
  const std::size_t n = v.size();
  if (n < 3) return out;
  const double global_max = *std::max_element(v.begin(), v.end());
  if (!(global_max > 0.0)) return out;
  const double threshold = prominence_rel * global_max;

  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(v[i - 1] < v[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    if (j + 1 >= n || !(v[j + 1] < v[i])) {
      i = j + 1;
      continue;
    }
    const std::size_t peak = (i + j) / 2;
    const double h = v[peak];

    // Bases: lowest point on each side before the signal climbs above h.
    double left_min = h;
    std::size_t left_base = i;
    for (std::size_t k = i; k-- > 0;) {
      if (v[k] > h) break;
      if (v[k] < left_min) {
        left_min = v[k];
        left_base = k;
      }
    }
    double right_min = h;
    std::size_t right_base = j;
    for (std::size_t k = j + 1; k < n; ++k) {
      if (v[k] > h) break;
      if (v[k] < right_min) {
        right_min = v[k];
        right_base = k;
      }
    }
    const double prominence = h - std::max(left_min, right_min);
    if (prominence >= threshold && prominence > 0.0) {
      const double level = h - 0.5 * prominence;
      auto crossing = [&](std::size_t from, std::size_t to, int step) {
        std::size_t k = from;
        while (k != to && v[k] > level) k = static_cast<std::size_t>(static_cast<long>(k) + step);
        const std::size_t prev = static_cast<std::size_t>(static_cast<long>(k) - step);
        if (v[k] > level || v[prev] == v[k]) return w[k];
        const double t = (v[prev] - level) / (v[prev] - v[k]);
        return w[prev] + t * (w[k] - w[prev]);
      };
      Peak pk;
      pk.index = peak;
      pk.center = w[peak];
      pk.height = h;
      pk.prominence = prominence;
      pk.width = crossing(peak, right_base, +1) - crossing(peak, left_base, -1);
      out.peaks.push_back(pk);
    }
    i = j + 1;
  }
  return out;
}

}  // namespace gravprobe
