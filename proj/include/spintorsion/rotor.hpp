#pragma once

#include <vector>

#include "spintorsion/nv_model.hpp"
#include "spintorsion/numerics.hpp"

namespace spintorsion::rotor {

using numerics::Complex;

/// Two Gaussian wavepackets on the circle,
///   phi_pm(theta) = (q/pi)^{1/4} exp(-(q/2)(theta - theta0 -+ delta)^2),
/// with q = I omega'/hbar and delta = sqrt(2/q) g_N/omega'.
struct GaussianPeaks {
  double q = 0.0;
  double theta0 = 0.0;
  double half_separation = 0.0;  // delta, rad
  double inertia = 0.0;          // kg m^2

  double width() const;  // 1/sqrt(q): standard deviation of exp(-(q/2) x^2)
  double center_plus() const noexcept { return theta0 + half_separation; }
  double center_minus() const noexcept { return theta0 - half_separation; }
  /// Both center +- 3 width intervals lie inside (0, 2 pi).
  bool valid() const;
};

/// Throws std::invalid_argument for q <= 0 and std::domain_error when the
/// 3-sigma validity check fails.
GaussianPeaks gaussian_peak_params(const nv::TorsionalMode& relaxed, double coupling,
                                   double theta0);

/// ceil(3 sqrt(2 q)).
int truncation_bound(double q);

/// Coefficients A_m, m in [-m_max, m_max], of psi(theta) = sum_m A_m e^{i m theta}/sqrt(2 pi).
struct RotorState {
  int m_max = 0;
  std::vector<Complex> coeffs;  // index m + m_max
  GaussianPeaks peaks;
  double time = 0.0;            // elapsed free evolution, s

  Complex at(int m) const { return coeffs.at(static_cast<std::size_t>(m + m_max)); }
  double norm_squared() const;
};

/// Closed-form A_m^{sign}, sign = +1 or -1, from extending the Gaussian
/// integral over the whole real line:
///   (1/(pi q))^{1/4} e^{-m^2/2q} e^{-i m (theta0 + sign delta)}.
Complex closed_form_coefficient(const GaussianPeaks& peaks, int m, int sign);

/// Same coefficient from Gauss-Legendre quadrature of
/// int_0^{2 pi} phi_sign(theta) e^{-i m theta} dtheta / sqrt(2 pi).
Complex quadrature_coefficient(const GaussianPeaks& peaks, int m, int sign);

/// A_m = (A_m^+ + A_m^-)/sqrt2, renormalized so sum |A_m|^2 = 1.
/// Throws std::invalid_argument when m_max < truncation_bound(q).
RotorState fourier_coeffs(const GaussianPeaks& peaks, int m_max);

/// A_m -> A_m exp(-i m^2 hbar t / (2 I)).
RotorState evolve_free(const RotorState& state, double t);

struct FringeProfile {
  std::vector<double> theta;    // uniform on [0, 2 pi)
  std::vector<double> density;  // 1/rad
  double time = 0.0;

  /// Rectangle rule on the periodic grid (equal to the trapezoid rule).
  double integral() const;
};

/// P(theta) = |sum_m A_m e^{i m theta}/sqrt(2 pi)|^2 via an inverse FFT.
/// grid_size = 0 selects max(8192, 4 m_max); an explicit size below 4 m_max
/// throws std::invalid_argument.
FringeProfile fringe_profile(const RotorState& state, int grid_size = 0);

struct FringeSpacingOptions {
  double window_min_deg = 60.0;
  double window_max_deg = 190.0;
  double threshold = 0.1;       // fraction of the window maximum
  double smoothing_deg = 1.0;   // circular Gaussian kernel sigma, 0 disables
};

struct FringeSpacing {
  double spacing_deg = 0.0;       // median successive distance
  std::vector<double> peaks_deg;  // accepted maxima
};

/// Throws std::domain_error when fewer than 3 maxima survive in the window.
FringeSpacing fringe_spacing(const FringeProfile& profile, const FringeSpacingOptions& options = {});

/// Circular Gaussian smoothing with kernel standard deviation sigma_rad.
std::vector<double> smooth_circular(const std::vector<double>& values, double sigma_rad);

/// Largest |P(theta) - P(2 theta0 - theta)| over the grid, relative to max P.
/// Mirror points falling between grid nodes are linearly interpolated.
double mirror_asymmetry(const FringeProfile& profile, double theta0);

/// Grid angle of the global maximum on each side of theta0, in degrees.
std::pair<double, double> peak_centers_deg(const FringeProfile& profile, double theta0);

}  // namespace spintorsion::rotor
