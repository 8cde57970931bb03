#pragma once

#include <numbers>

namespace mpnet::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;  // J s

/// Converts an ordinary frequency f = omega/2pi in Hz to an angular frequency in rad/s.
constexpr double angular(double hz) { return two_pi * hz; }
constexpr double ordinary(double rad_per_s) { return rad_per_s / two_pi; }

}  // namespace mpnet::units
