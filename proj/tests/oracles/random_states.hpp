#pragma once

// Random physical two-mode Gaussian covariances (vacuum = I/2):
// sigma = S diag(nu1, nu1, nu2, nu2) S^T with nu_k >= 1/2 and S a product of
// random local rotations, local squeezers, a beam splitter and a two-mode
// squeezer, all symplectic.

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::Matrix4d local(double theta_a, double r_a, double theta_b, double r_b) {
  auto single = [](double th, double r) {
    Eigen::Matrix2d rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Eigen::Matrix2d sq = Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal();
    return Eigen::Matrix2d(rot * sq);
  };
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  s.block<2, 2>(0, 0) = single(theta_a, r_a);
  s.block<2, 2>(2, 2) = single(theta_b, r_b);
  return s;
}

inline Eigen::Matrix4d beam_splitter(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
  m.block<2, 2>(0, 2) = s * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2, 0) = -s * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
  return m;
}

inline Eigen::Matrix4d two_mode_squeezer(double r) {
  const double c = std::cosh(r), s = std::sinh(r);
  const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
  m.block<2, 2>(0, 2) = s * z;
  m.block<2, 2>(2, 0) = s * z;
  return m;
}

/// Two-mode squeezed vacuum with squeezing r.
inline Eigen::Matrix4d tmsv(double r) {
  const Eigen::Matrix4d s = two_mode_squeezer(r);
  return 0.5 * s * s.transpose();
}

inline Eigen::Matrix4d random_covariance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> sq(-0.8, 0.8);
  std::uniform_real_distribution<double> tms(0.0, 1.0);
  std::uniform_real_distribution<double> thermal(0.0, 2.0);
  const Eigen::Matrix4d s = local(angle(rng), sq(rng), angle(rng), sq(rng)) * beam_splitter(angle(rng)) *
                            two_mode_squeezer(tms(rng)) * local(angle(rng), sq(rng), angle(rng), sq(rng));
  const double nu1 = 0.5 + thermal(rng);
  const double nu2 = 0.5 + thermal(rng);
  const Eigen::Matrix4d d = Eigen::Vector4d(nu1, nu1, nu2, nu2).asDiagonal();
  Eigen::Matrix4d out = s * d * s.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace oracle
