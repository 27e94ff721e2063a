#pragma once

#include <numbers>

namespace gravprobe {

/// CODATA 2018 values, SI units. Not configurable.
struct PhysicalConstants {
  static constexpr double G = 6.67430e-11;         // m^3 kg^-1 s^-2
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double kB = 1.380649e-23;       // J K^-1
  static constexpr double c = 299792458.0;         // m s^-1
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace gravprobe
