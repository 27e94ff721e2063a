#pragma once

// Steady-state covariances of the linearized system and the correlation
// measures of the two cavity fields.
//
// Covariances use the symmetrized convention sigma_ij = <{dO_i, dO_j}>/2, so
// the vacuum is I/2 and physical states have symplectic eigenvalues >= 1/2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gravprobe/coefficients.hpp"
#include "gravprobe/dynamics.hpp"
#include "gravprobe/errors.hpp"
#include "gravprobe/linalg.hpp"
#include "gravprobe/parallel.hpp"
#include "gravprobe/parameters.hpp"

namespace gravprobe {

using Matrix4 = Eigen::Matrix<double, 4, 4>;

struct SteadyState {
  Matrix8 sigma = Matrix8::Zero();
  double residual = 0.0;           // ||A S + S A^T + D||_F
  double relative_residual = 0.0;  // residual / ||D||_F
  bool well_conditioned = false;   // relative_residual <= lyapunov_tolerance
};

inline constexpr double lyapunov_tolerance = 1e-10;

/// Solves A S + S A^T + D = 0 on the balanced drift and maps the result back.
/// Throws InstabilityError when the drift is not Hurwitz.
inline SteadyState lyapunov_steady_state(const LinearDynamics& dyn) {
  const StabilityReport st = stability(dyn);
  if (!st.stable)
    throw InstabilityError("no steady state: drift has an eigenvalue with non-negative real part",
                           st.max_real_part);

  // With B = T^-1 A T the pair (S', D') = (T^-1 S T^-1, T^-1 D T^-1) solves the same equation.
  const Eigen::VectorXd t = linalg::balancing_scale(dyn.drift);
  const Eigen::VectorXd ti = t.cwiseInverse();
  const Eigen::MatrixXd b = ti.asDiagonal() * dyn.drift * t.asDiagonal();
  const Eigen::MatrixXd db = ti.asDiagonal() * dyn.diffusion * ti.asDiagonal();
  const linalg::LyapunovResult r = linalg::solve_lyapunov(b, db);

  SteadyState out;
  out.sigma = t.asDiagonal() * r.sigma * t.asDiagonal();
  out.sigma = (0.5 * (out.sigma + out.sigma.transpose())).eval();
  out.residual = (dyn.drift * out.sigma + out.sigma * dyn.drift.transpose() + dyn.diffusion).norm();
  const double dn = dyn.diffusion.norm();
  out.relative_residual = dn > 0.0 ? out.residual / dn : out.residual;
  out.well_conditioned = out.relative_residual <= lyapunov_tolerance;
  if (!out.sigma.allFinite()) throw NumericError("Lyapunov solution is not finite");
  return out;
}

/// Rows/columns (X_x, Y_x, X_y, Y_y) of the full covariance.
inline Matrix4 optical_block(const Matrix8& sigma_full) {
  return sigma_full.block<4, 4>(basis::X_x, basis::X_x);
}

/// Entrywise 1-norm of the inter-mode block (X_x, Y_x) x (X_y, Y_y).
inline double sigma_tot(const Matrix4& sigma_optical) {
  return sigma_optical.block<2, 2>(0, 2).cwiseAbs().sum();
}

/// |sigma(X_x, Y_x)| + |sigma(X_y, Y_y)|, the within-mode off-diagonal entries.
inline double within_mode_offdiagonal(const Matrix4& sigma_optical) {
  return std::abs(sigma_optical(0, 1)) + std::abs(sigma_optical(2, 3));
}

inline double min_symplectic_eigenvalue(const Eigen::MatrixXd& sigma) {
  const std::vector<double> nu = linalg::symplectic_eigenvalues(sigma);
  return nu.empty() ? std::numeric_limits<double>::infinity() : nu.front();
}

/// Which mode the local Gaussian measurement acts on.
enum class MeasuredMode { First, Second };

namespace detail {

/// Von Neumann entropy of a thermal mode with symplectic eigenvalue x (vacuum x = 1).
inline long double entropy_f(long double x) {
  if (x <= 1.0L) return 0.0L;
  const long double a = (x + 1.0L) / 2.0L;
  const long double b = (x - 1.0L) / 2.0L;
  return a * std::log(a) - b * std::log(b);
}

}  // namespace detail

/// Two-mode Gaussian discord in nats, with the optimal Gaussian measurement on
/// one mode (closed form over the symplectic invariants).
inline double gaussian_discord(const Matrix4& sigma_optical,
                               MeasuredMode measured = MeasuredMode::Second,
                               double physical_tolerance = 1e-9) {
  const double nu_min = min_symplectic_eigenvalue(sigma_optical);
  if (!(nu_min >= 0.5 - physical_tolerance))
    throw UnphysicalStateError("covariance violates the uncertainty relation", nu_min);

  using M4 = Eigen::Matrix<long double, 4, 4>;
  using M2 = Eigen::Matrix<long double, 2, 2>;
  // Vacuum-1 convention for the invariants; the measured mode goes second.
  M4 s = 2.0L * sigma_optical.cast<long double>();
  if (measured == MeasuredMode::First) {
    M4 swapped;
    swapped << s.block<2, 2>(2, 2), s.block<2, 2>(2, 0), s.block<2, 2>(0, 2), s.block<2, 2>(0, 0);
    s = swapped;
  }
  const M2 alpha = s.block<2, 2>(0, 0);
  const M2 beta = s.block<2, 2>(2, 2);
  const M2 gamma = s.block<2, 2>(0, 2);
  if (gamma.isZero(0.0L)) return 0.0;

  const long double a = alpha.determinant();
  const long double b = beta.determinant();
  const long double c = gamma.determinant();
  const long double d = s.determinant();

  const long double delta = a + b + 2.0L * c;
  const long double disc = std::sqrt(std::max(0.0L, delta * delta - 4.0L * d));
  const long double nu_plus = std::sqrt(std::max(0.0L, (delta + disc) / 2.0L));
  const long double nu_minus = std::sqrt(std::max(0.0L, (delta - disc) / 2.0L));

  const long double c2 = c * c;
  const long double lhs = (d - a * b) * (d - a * b);
  const long double rhs = (1.0L + b) * c2 * (a + d);
  long double e_min;
  const long double bm1 = b - 1.0L;
  if (lhs <= rhs && std::abs(bm1) > 1e-30L) {
    const long double q = c2 + bm1 * (d - a);
    e_min = (2.0L * c2 + bm1 * (d - a) + 2.0L * std::abs(c) * std::sqrt(std::max(0.0L, q))) /
            (bm1 * bm1);
  } else {
    const long double r = c2 * c2 + (d - a * b) * (d - a * b) - 2.0L * c2 * (a * b + d);
    e_min = (a * b - c2 + d - std::sqrt(std::max(0.0L, r))) / (2.0L * b);
  }

  const long double value = detail::entropy_f(std::sqrt(b)) - detail::entropy_f(nu_minus) -
                            detail::entropy_f(nu_plus) +
                            detail::entropy_f(std::sqrt(std::max(0.0L, e_min)));
  return static_cast<double>(std::max(0.0L, value));
}

inline double nats_to_bits(double nats) { return nats / std::log(2.0); }

struct CovarianceReport {
  Matrix8 sigma_full = Matrix8::Zero();
  Matrix4 sigma_optical = Matrix4::Zero();
  double sigma_tot = 0.0;
  double within_mode = 0.0;
  double discord_xy = 0.0;  // measurement on the y cavity, nats
  double discord_yx = 0.0;  // measurement on the x cavity, nats
  double min_symplectic = 0.0;
  double residual = 0.0;
  double relative_residual = 0.0;
  bool well_conditioned = false;
  bool stable = false;
  double max_real_part = 0.0;
  Scenario scenario{};
};

inline CovarianceReport covariance_report(const LinearDynamics& dyn) {
  CovarianceReport out;
  out.scenario = dyn.scenario;
  const StabilityReport st = stability(dyn);
  out.stable = st.stable;
  out.max_real_part = st.max_real_part;
  const SteadyState ss = lyapunov_steady_state(dyn);
  out.sigma_full = ss.sigma;
  out.residual = ss.residual;
  out.relative_residual = ss.relative_residual;
  out.well_conditioned = ss.well_conditioned;
  out.sigma_optical = optical_block(ss.sigma);
  out.sigma_tot = sigma_tot(out.sigma_optical);
  out.within_mode = within_mode_offdiagonal(out.sigma_optical);
  out.min_symplectic = min_symplectic_eigenvalue(out.sigma_full);
  out.discord_xy = gaussian_discord(out.sigma_optical, MeasuredMode::Second);
  out.discord_yx = gaussian_discord(out.sigma_optical, MeasuredMode::First);
  return out;
}

struct ControlRange {
  double lo = 0.0;  // N/m
  double hi = 0.0;  // N/m
  std::size_t n_points = 0;

  void validate() const {
    if (n_points < 2) throw ConfigError("control range: n_points must be at least 2");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw ConfigError("control range: need finite lo < hi");
  }

  std::vector<double> points() const {
    validate();
    std::vector<double> v(n_points);
    const double last = static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) v[i] = lo + (hi - lo) * (static_cast<double>(i) / last);
    v.back() = hi;
    return v;
  }
};

struct SweepResult {
  std::vector<double> control;     // C1,x = C1,y, N/m
  std::vector<double> sigma_tot;   // NaN where unstable
  std::vector<double> within_mode;
  std::vector<double> discord_xy;  // nats
  std::vector<double> discord_yx;  // nats
  std::vector<double> relative_residual;
  std::vector<bool> stable;
  Scenario scenario{};
};

/// Far-field C1,x = C1,y traversed by scaling the source mass at fixed
/// geometry (d_x = d_y). All coefficients are linear in m1, so each point uses
/// the template coefficients multiplied by control / C1,x(template).
inline SweepResult sweep_c1(const SystemParameters& params_template, const ControlRange& range,
                            Scenario scenario, unsigned threads = default_thread_count()) {
  const Geometry& g = params_template.geometry;
  if (g.d_x != g.d_y)
    throw ConfigError("sweep_c1 needs d_x == d_y so that C1,x = C1,y (got d_x = " +
                      std::to_string(g.d_x) + ", d_y = " + std::to_string(g.d_y) + ")");
  const GravityCoefficients base = farfield_coefficients(params_template, scenario);
  if (!(base.c1_x > 0.0)) throw NumericError("sweep_c1: template C1,x must be positive");

  SweepResult out;
  out.scenario = scenario;
  out.control = range.points();
  const std::size_t n = out.control.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.sigma_tot.assign(n, nan);
  out.within_mode.assign(n, nan);
  out.discord_xy.assign(n, nan);
  out.discord_yx.assign(n, nan);
  out.relative_residual.assign(n, nan);
  std::vector<char> stable(n, 0);
  std::vector<double> growth(n, 0.0);

  parallel_for(n, threads, [&](std::size_t i) {
    const GravityCoefficients c = base.scaled(out.control[i] / base.c1_x);
    const LinearDynamics dyn = build_dynamics(params_template, c);
    const StabilityReport st = stability(dyn);
    growth[i] = st.max_real_part;
    if (!st.stable) return;
    const CovarianceReport rep = covariance_report(dyn);
    out.sigma_tot[i] = rep.sigma_tot;
    out.within_mode[i] = rep.within_mode;
    out.discord_xy[i] = rep.discord_xy;
    out.discord_yx[i] = rep.discord_yx;
    out.relative_residual[i] = rep.relative_residual;
    stable[i] = 1;
  });

  out.stable.assign(stable.begin(), stable.end());
  if (std::none_of(stable.begin(), stable.end(), [](char s) { return s != 0; }))
    throw InstabilityError("sweep_c1: every control point is unstable",
                           *std::min_element(growth.begin(), growth.end()));
  return out;
}

}  // namespace gravprobe
