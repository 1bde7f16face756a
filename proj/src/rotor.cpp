#include "spintorsion/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "spintorsion/constants.hpp"

namespace spintorsion::rotor {

namespace {

constexpr double kCoefficientSpan = 40.0;  // half-width of the resolved region, in widths
constexpr int kPanelNodes = 24;

// Quadrature panels per unit length for an integrand oscillating at
// wavenumber m under a Gaussian of curvature q.
int panels_for(double length, int m, double q) {
  const double rate = std::abs(m) + std::sqrt(q);
  return std::max(4, static_cast<int>(std::ceil(length * rate / constants::pi)));
}

}  // namespace

double GaussianPeaks::width() const { return 1.0 / std::sqrt(q); }

bool GaussianPeaks::valid() const {
  const double w3 = 3.0 * width();
  return center_minus() - w3 > 0.0 && center_plus() + w3 < constants::two_pi;
}

GaussianPeaks gaussian_peak_params(const nv::TorsionalMode& relaxed, double coupling,
                                   double theta0) {
  relaxed.validate();
  GaussianPeaks peaks;
  peaks.q = relaxed.quantum_scale();
  if (!(peaks.q > 0.0)) throw std::invalid_argument("rotational scale q must be > 0");
  peaks.theta0 = theta0;
  peaks.half_separation = std::sqrt(2.0 / peaks.q) * coupling / relaxed.omega;
  peaks.inertia = relaxed.inertia;
  if (!peaks.valid()) {
    std::ostringstream msg;
    msg << "Gaussian peaks at " << peaks.center_minus() << " and " << peaks.center_plus()
        << " rad with width " << peaks.width() << " do not fit inside (0, 2pi)";
    throw std::domain_error(msg.str());
  }
  return peaks;
}

int truncation_bound(double q) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be > 0");
  return static_cast<int>(std::ceil(3.0 * std::sqrt(2.0 * q)));
}

double RotorState::norm_squared() const {
  double s = 0.0;
  for (const Complex& a : coeffs) s += std::norm(a);
  return s;
}

Complex closed_form_coefficient(const GaussianPeaks& peaks, int m, int sign) {
  const double center = peaks.theta0 + sign * peaks.half_separation;
  const double md = m;
  return std::pow(constants::pi * peaks.q, -0.25) * std::exp(-md * md / (2.0 * peaks.q)) *
         std::polar(1.0, -md * center);
}

Complex quadrature_coefficient(const GaussianPeaks& peaks, int m, int sign) {
  static const numerics::GaussLegendreRule rule(kPanelNodes);
  const double q = peaks.q;
  const double center = peaks.theta0 + sign * peaks.half_separation;
  const double norm = std::pow(q / constants::pi, 0.25) / std::sqrt(constants::two_pi);
  auto integrand = [&](double theta) {
    const double x = theta - center;
    return norm * std::exp(-0.5 * q * x * x) * std::polar(1.0, -m * theta);
  };
  auto integrate = [&](double a, double b) {
    Complex sum = 0.0;
    if (b <= a) return sum;
    const int panels = panels_for(b - a, m, q);
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) sum += rule.integrate(integrand, a + k * h, a + (k + 1) * h);
    return sum;
  };
  const double lo = std::clamp(center - kCoefficientSpan * peaks.width(), 0.0, constants::two_pi);
  const double hi = std::clamp(center + kCoefficientSpan * peaks.width(), 0.0, constants::two_pi);
  Complex total = integrate(lo, hi);
  // Tails beyond 40 widths are below exp(-800) and are skipped.
  if (lo > 0.0 && std::abs(integrand(lo)) > 1e-300) total += integrate(0.0, lo);
  if (hi < constants::two_pi && std::abs(integrand(hi)) > 1e-300)
    total += integrate(hi, constants::two_pi);
  return total;
}

RotorState fourier_coeffs(const GaussianPeaks& peaks, int m_max) {
  const int bound = truncation_bound(peaks.q);
  if (m_max < bound) {
    std::ostringstream msg;
    msg << "m_max = " << m_max << " is below the truncation bound " << bound;
    throw std::invalid_argument(msg.str());
  }
  RotorState state;
  state.m_max = m_max;
  state.peaks = peaks;
  state.coeffs.resize(2 * static_cast<std::size_t>(m_max) + 1);
  for (int m = -m_max; m <= m_max; ++m)
    state.coeffs[m + m_max] =
        (closed_form_coefficient(peaks, m, +1) + closed_form_coefficient(peaks, m, -1)) /
        std::sqrt(2.0);
  const double scale = 1.0 / std::sqrt(state.norm_squared());
  for (Complex& a : state.coeffs) a *= scale;
  return state;
}

RotorState evolve_free(const RotorState& state, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("free evolution time must be >= 0");
  RotorState out = state;
  out.time = state.time + t;
  const double rate = constants::hbar * t / (2.0 * state.peaks.inertia);
  for (int m = -state.m_max; m <= state.m_max; ++m) {
    const double md = m;
    // m^2 rate can reach 1e6 rad; fmod keeps the argument small before polar().
    const double phase = std::fmod(md * md * rate, constants::two_pi);
    out.coeffs[m + state.m_max] *= std::polar(1.0, -phase);
  }
  return out;
}

double FringeProfile::integral() const {
  if (density.empty()) return 0.0;
  double s = 0.0;
  for (double p : density) s += p;
  return s * constants::two_pi / static_cast<double>(density.size());
}

FringeProfile fringe_profile(const RotorState& state, int grid_size) {
  const int minimum = 4 * state.m_max;
  if (grid_size == 0) grid_size = std::max(8192, minimum);
  if (grid_size < minimum) {
    std::ostringstream msg;
    msg << "grid size " << grid_size << " is below 4 m_max = " << minimum;
    throw std::invalid_argument(msg.str());
  }
  std::vector<Complex> spectrum(grid_size, Complex(0.0));
  for (int m = -state.m_max; m <= state.m_max; ++m)
    spectrum[static_cast<std::size_t>((m % grid_size + grid_size) % grid_size)] +=
        state.coeffs[m + state.m_max];

  Eigen::FFT<double> fft;
  std::vector<Complex> values;
  fft.inv(values, spectrum);  // (1/G) sum_m c_m e^{2 pi i m k / G}

  FringeProfile profile;
  profile.time = state.time;
  profile.theta.resize(grid_size);
  profile.density.resize(grid_size);
  const double scale = grid_size / std::sqrt(constants::two_pi);
  for (int k = 0; k < grid_size; ++k) {
    profile.theta[k] = constants::two_pi * k / grid_size;
    profile.density[k] = std::norm(values[k] * scale);
  }
  return profile;
}

std::vector<double> smooth_circular(const std::vector<double>& values, double sigma_rad) {
  if (sigma_rad <= 0.0 || values.empty()) return values;
  const int n = static_cast<int>(values.size());
  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, values);
  for (int k = 0; k < n; ++k) {
    const double freq = k <= n / 2 ? k : k - n;
    spectrum[k] *= std::exp(-0.5 * freq * freq * sigma_rad * sigma_rad);
  }
  std::vector<Complex> back;
  fft.inv(back, spectrum);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = back[k].real();
  return out;
}

FringeSpacing fringe_spacing(const FringeProfile& profile, const FringeSpacingOptions& options) {
  const int n = static_cast<int>(profile.density.size());
  if (n < 3) throw std::invalid_argument("profile too small");
  if (!(options.window_min_deg < options.window_max_deg))
    throw std::invalid_argument("fringe window must satisfy min < max");
  const std::vector<double> p =
      smooth_circular(profile.density, constants::radians(options.smoothing_deg));

  std::vector<int> window;
  for (int k = 0; k < n; ++k) {
    const double deg = constants::degrees(profile.theta[k]);
    if (deg >= options.window_min_deg && deg <= options.window_max_deg) window.push_back(k);
  }
  double top = 0.0;
  for (int k : window) top = std::max(top, p[k]);

  FringeSpacing result;
  for (int k : window) {
    const double left = p[(k - 1 + n) % n];
    const double right = p[(k + 1) % n];
    if (p[k] > left && p[k] >= right && p[k] > options.threshold * top)
      result.peaks_deg.push_back(constants::degrees(profile.theta[k]));
  }
  if (result.peaks_deg.size() < 3) {
    std::ostringstream msg;
    msg << "only " << result.peaks_deg.size() << " fringe maxima in [" << options.window_min_deg
        << ", " << options.window_max_deg << "] deg; need 3";
    throw std::domain_error(msg.str());
  }
  std::vector<double> gaps;
  for (std::size_t i = 1; i < result.peaks_deg.size(); ++i)
    gaps.push_back(result.peaks_deg[i] - result.peaks_deg[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  const std::size_t mid = gaps.size() / 2;
  result.spacing_deg = gaps.size() % 2 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
  return result;
}

double mirror_asymmetry(const FringeProfile& profile, double theta0) {
  const int n = static_cast<int>(profile.density.size());
  const double step = constants::two_pi / n;
  double top = 0.0, worst = 0.0;
  for (double v : profile.density) top = std::max(top, v);
  for (int k = 0; k < n; ++k) {
    double x = std::fmod(2.0 * theta0 - profile.theta[k], constants::two_pi);
    if (x < 0.0) x += constants::two_pi;
    const double pos = x / step;
    const double nearest = std::round(pos);
    double mirrored;
    if (std::abs(pos - nearest) < 1e-9) {
      mirrored = profile.density[static_cast<int>(nearest) % n];
    } else {
      const int i0 = static_cast<int>(std::floor(pos)) % n;
      const double f = pos - std::floor(pos);
      mirrored = (1.0 - f) * profile.density[i0] + f * profile.density[(i0 + 1) % n];
    }
    worst = std::max(worst, std::abs(profile.density[k] - mirrored));
  }
  return top > 0.0 ? worst / top : worst;
}

std::pair<double, double> peak_centers_deg(const FringeProfile& profile, double theta0) {
  const int n = static_cast<int>(profile.density.size());
  const double step = constants::two_pi / n;
  auto refine = [&](bool below) {
    int best = -1;
    for (int k = 0; k < n; ++k) {
      if ((profile.theta[k] < theta0) != below) continue;
      if (best < 0 || profile.density[k] > profile.density[best]) best = k;
    }
    if (best < 0) throw std::domain_error("no maximum on one side of theta0");
    const double left = profile.density[(best - 1 + n) % n];
    const double right = profile.density[(best + 1) % n];
    if (!(left > 0.0 && right > 0.0)) return constants::degrees(profile.theta[best]);
    // Parabola through log P: exact for a Gaussian peak.
    const double l = std::log(left);
    const double c = std::log(profile.density[best]);
    const double r = std::log(right);
    const double denom = l - 2.0 * c + r;
    const double shift = denom < 0.0 ? 0.5 * (l - r) / denom : 0.0;
    return constants::degrees(profile.theta[best] + shift * step);
  };
  return {refine(true), refine(false)};
}

}  // namespace spintorsion::rotor
