#pragma once

#include <numbers>

namespace spintorsion::constants {

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J / T

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Frequencies are carried as angular frequencies (rad/s); user-facing values
/// are "2pi x Hz".
constexpr double angular(double hertz) { return two_pi * hertz; }
constexpr double hertz(double angular_frequency) { return angular_frequency / two_pi; }

constexpr double degrees(double radians) { return radians * 180.0 / pi; }
constexpr double radians(double degrees) { return degrees * pi / 180.0; }

}  // namespace spintorsion::constants
