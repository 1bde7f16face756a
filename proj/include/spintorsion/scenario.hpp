#pragma once

#include "spintorsion/constants.hpp"

// Default physical scenario: a 40 x 20 nm prolate nanodiamond with one NV
// orientation class. Frequencies in Hz.
namespace spintorsion::scenario {

inline constexpr double zero_field_splitting_hz = 2.8e9;
inline constexpr double field_tesla = 0.05;
inline constexpr double long_semi_axis_m = 40e-9;
inline constexpr double short_semi_axis_m = 20e-9;
inline constexpr double density_kg_m3 = 3500.0;
inline constexpr double torsion_hz = 2.52e6;          // trapped torsional mode
inline constexpr double relaxed_torsion_hz = 50e3;    // after lowering the trap
inline constexpr double cat_coupling_hz = 331e3;      // g_N used for the cat state
inline constexpr double theta0 = constants::pi / 4.0;

// Effective LMG drive (units of 2 pi x MHz).
inline constexpr double lmg_g_mhz = 0.42;
inline constexpr double lmg_torsion_mhz = 2.52;
inline constexpr double lmg_frame_mhz = 1.0;

}  // namespace spintorsion::scenario
