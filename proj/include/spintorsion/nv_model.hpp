#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "spintorsion/constants.hpp"
#include "spintorsion/numerics.hpp"

namespace spintorsion::nv {

using numerics::HermitianMatrix;

/// Adiabatic labeling could not decide which eigenvector continues which
/// level (an exact or near crossing along the theta path).
class LevelCrossingError : public std::runtime_error {
 public:
  LevelCrossingError(const std::string& what, double theta)
      : std::runtime_error(what), theta_(theta) {}
  double theta() const noexcept { return theta_; }

 private:
  double theta_;
};

/// Single NV center (one orientation class) in a uniform field.
/// Frequencies are angular (rad/s); field in tesla; angles in radians.
struct NVSystem {
  double zero_field_splitting = constants::angular(2.8e9);
  double g_factor = 2.0;
  double field = 0.0;
  double theta = 0.0;
  double phi = 0.0;

  /// Delta = -g mu_B |B| / hbar, never positive.
  double zeeman() const noexcept { return -g_factor * constants::bohr_magneton * field / constants::hbar; }

  void validate() const;
};

struct SpheroidGeometry {
  double long_semi_axis = 40e-9;
  double short_semi_axis = 20e-9;
  double density = 3500.0;

  void validate() const;
};

struct Inertia {
  double mass = 0.0;    // kg
  double moment = 0.0;  // kg m^2
};

/// Quantized torsional (libration) mode.
struct TorsionalMode {
  double omega = 0.0;    // rad/s
  double inertia = 0.0;  // kg m^2

  /// Dimensionless rotational scale I*omega/hbar.
  double quantum_scale() const noexcept { return inertia * omega / constants::hbar; }
  void validate() const;
};

/// Eigenvalues of the NV Hamiltonian, labeled by continuity from theta = 0.
struct SpinLevels {
  double e_minus1 = 0.0;
  double e_0 = 0.0;
  double e_plus1 = 0.0;

  double gap() const noexcept { return e_minus1 - e_0; }
};

/// 3x3 Hamiltonian in the S_z' eigenbasis, rows ordered (m=+1, 0, -1).
HermitianMatrix build_nv_hamiltonian(const NVSystem& sys);

SpinLevels nv_levels(const NVSystem& sys);

/// Levels along a theta sweep; the sweep is continued adiabatically in the
/// order given, so pass thetas sorted for efficiency.
std::vector<SpinLevels> nv_level_sweep(const NVSystem& base, std::span<const double> thetas);

/// d E_gap / d theta in rad/s per rad. Central differences (h0 = 1e-4 rad)
/// with two Richardson levels, converged to 1e-6 relative (absolute 1e-9 D near a zero slope).
double transition_energy_derivative(const NVSystem& sys);

/// Uniform prolate spheroid rotating about a short axis:
///   m = 4/3 pi a b^2 rho,  I = m (a^2 + b^2) / 5.
Inertia moment_of_inertia(const SpheroidGeometry& geom);

/// g_N = sqrt(hbar / (2 I omega)) * dE_gap/dtheta, rad/s. Signed; the sign
/// follows the slope of the transition energy.
double coupling_strength(const NVSystem& sys, const TorsionalMode& mode);

struct SweepRange {
  double min = 0.0;
  double max = 0.0;
  int points = 1;

  double at(int i) const noexcept {
    return points == 1 ? min : min + (max - min) * static_cast<double>(i) / (points - 1);
  }
  void validate(const char* name) const;
};

struct CouplingArgmax {
  double field = 0.0;
  double theta = 0.0;
  double coupling = 0.0;  // |g_N| at the refined maximum, rad/s
};

/// |g_N| on a (B, theta) grid, row-major by field. The per-field maximum is
/// refined by golden-section search between the grid neighbours.
struct CouplingMap {
  std::vector<double> fields;
  std::vector<double> thetas;
  std::vector<double> magnitude;
  std::vector<CouplingArgmax> argmax;

  double at(std::size_t field_index, std::size_t theta_index) const {
    return magnitude.at(field_index * thetas.size() + theta_index);
  }
};

CouplingMap coupling_map(const NVSystem& base, const TorsionalMode& mode, SweepRange fields,
                         SweepRange thetas);

}  // namespace spintorsion::nv
