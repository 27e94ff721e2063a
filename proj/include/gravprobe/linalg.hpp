#pragma once

// Small dense linear-algebra helpers on top of Eigen.
//
// The drift matrices here routinely mix entries from 1e-48 to 1e31, so anything
// that factors a drift (eigenvalues, resolvents) balances it first with a
// diagonal similarity made of powers of two, which is exact in floating point.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gravprobe/errors.hpp"

namespace gravprobe::linalg {

/// Osborne balancing: returns d such that diag(d)^-1 * A * diag(d) has
/// comparable off-diagonal row and column norms. Only the magnitudes of the
/// off-diagonal entries matter, so the same scaling serves A and s*I - A.
template <typename Derived>
Eigen::VectorXd balancing_scale(const Eigen::MatrixBase<Derived>& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd m = a.cwiseAbs().template cast<double>();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;

  for (int sweep = 0; sweep < 200; ++sweep) {
    bool converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += m(j, i);
        r += m(i, j);
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        scale(i) *= f;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
    if (converged) break;
  }
  return scale;
}

/// Eigenvalues of a real square matrix, computed on its balanced form.
inline Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a) {
  const Eigen::VectorXd d = balancing_scale(a);
  const Eigen::MatrixXd b = d.cwiseInverse().asDiagonal() * a * d.asDiagonal();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(b, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericError("eigenvalue computation did not converge");
  return solver.eigenvalues();
}

/// Symplectic form for n modes with canonical pairs adjacent: (q1, p1, q2, p2, ...).
inline Eigen::MatrixXd symplectic_form(Eigen::Index modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

/// Symplectic eigenvalues of a covariance matrix, ascending. Vacuum has 1/2.
inline std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& sigma) {
  const Eigen::Index modes = sigma.rows() / 2;
  const Eigen::MatrixXd m = symplectic_form(modes) * sigma;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericError("symplectic spectrum did not converge");
  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(sigma.rows()));
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    nu.push_back(std::abs(solver.eigenvalues()(i).imag()));
  std::sort(nu.begin(), nu.end());
  // Each symplectic eigenvalue appears as the pair +-i nu.
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < nu.size(); i += 2) out.push_back(0.5 * (nu[i] + nu[i + 1]));
  return out;
}

struct LyapunovResult {
  Eigen::MatrixXd sigma;
  double residual = 0.0;           // ||A S + S A^T + D||_F
  double relative_residual = 0.0;  // residual / ||D||_F
};

/// Solves A S + S A^T + D = 0 for S through the Kronecker form
/// (I (x) A + A (x) I) vec(S) = -vec(D), with two steps of iterative refinement.
/// The caller is responsible for A being Hurwitz.
inline LyapunovResult solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) {
  const Eigen::Index n = a.rows();
  const Eigen::Index nn = n * n;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nn, nn);
  // vec is column-major: vec(A S) = (I (x) A) vec S, vec(S A^T) = (A (x) I) vec S.
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      k.block(j * n, i * n, n, n) += eye(j, i) * a;
      k.block(j * n, i * n, n, n) += a(j, i) * eye;
    }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (!lu.isInvertible()) throw NumericError("Lyapunov operator is singular");

  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(d.data(), nn);
  Eigen::VectorXd x = lu.solve(rhs);
  for (int step = 0; step < 2; ++step) {
    const Eigen::VectorXd r = rhs - k * x;
    x += lu.solve(r);
  }

  LyapunovResult out;
  out.sigma = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
  out.sigma = 0.5 * (out.sigma + out.sigma.transpose()).eval();
  out.residual = (a * out.sigma + out.sigma * a.transpose() + d).norm();
  const double dn = d.norm();
  out.relative_residual = dn > 0.0 ? out.residual / dn : out.residual;
  return out;
}

}  // namespace gravprobe::linalg
