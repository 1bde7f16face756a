#include <doctest.h>

#include <cmath>

#include "spintorsion/constants.hpp"
#include "spintorsion/rotor.hpp"
#include "spintorsion/scenario.hpp"

using namespace spintorsion;
using namespace spintorsion::rotor;

namespace {

nv::TorsionalMode relaxed_mode() {
  const auto in = nv::moment_of_inertia(nv::SpheroidGeometry{});
  return {constants::angular(scenario::relaxed_torsion_hz), in.moment};
}

GaussianPeaks reference_peaks() {
  return gaussian_peak_params(relaxed_mode(), constants::angular(scenario::cat_coupling_hz),
                              scenario::theta0);
}

// Small synthetic rotor with hbar / I = 1 so the revival time is 4 pi.
GaussianPeaks synthetic_peaks(double q, double delta) {
  GaussianPeaks p;
  p.q = q;
  p.theta0 = constants::pi / 2;
  p.half_separation = delta;
  p.inertia = constants::hbar;
  return p;
}

double degrees(double rad) { return rad * 180.0 / constants::pi; }

}  // namespace

TEST_CASE("truncation bound") {
  CHECK(truncation_bound(4.5) == 9);
  CHECK(truncation_bound(reference_peaks().q) == 2244);
  CHECK_THROWS_AS(truncation_bound(0.0), std::invalid_argument);
}

TEST_CASE("wavepacket parameters") {
  const auto p = reference_peaks();
  CHECK(p.q == doctest::Approx(2.795e5).epsilon(2e-3));
  CHECK(degrees(p.width()) == doctest::Approx(0.108).epsilon(0.01));
  CHECK(degrees(p.center_minus()) == doctest::Approx(45.0 - 1.0146).epsilon(1e-3));
  CHECK(degrees(p.center_plus()) == doctest::Approx(45.0 + 1.0146).epsilon(1e-3));
  CHECK(p.valid());

  const auto zero = gaussian_peak_params(relaxed_mode(), 0.0, scenario::theta0);
  CHECK(zero.center_plus() == zero.center_minus());
  const auto twice = gaussian_peak_params(
      relaxed_mode(), 2.0 * constants::angular(scenario::cat_coupling_hz), scenario::theta0);
  CHECK(twice.half_separation == doctest::Approx(2.0 * p.half_separation));

  CHECK_THROWS_AS(gaussian_peak_params(relaxed_mode(), 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_peak_params(nv::TorsionalMode{0.0, 1e-34}, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("closed-form coefficients match quadrature") {
  const auto p = reference_peaks();
  for (int m : {0, 1, -1, 7, 150, -999, 1500, 2244, -2600})
    for (int sign : {+1, -1}) {
      const Complex a = closed_form_coefficient(p, m, sign);
      const Complex b = quadrature_coefficient(p, m, sign);
      CHECK(std::abs(a - b) < 1e-12);
    }
  const auto s = synthetic_peaks(60.0, 0.3);
  for (int m = -40; m <= 40; m += 3)
    CHECK(std::abs(closed_form_coefficient(s, m, 1) - quadrature_coefficient(s, m, 1)) < 1e-12);
}

TEST_CASE("coefficient set") {
  const auto p = reference_peaks();
  const auto s = fourier_coeffs(p, 3000);
  CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
  for (int m : {1, 40, 700, 2500}) CHECK(std::abs(s.at(m)) == doctest::Approx(std::abs(s.at(-m))).epsilon(1e-12));
  CHECK(std::norm(s.at(3000)) < 1e-15);
  CHECK_THROWS_AS(fourier_coeffs(p, 2243), std::invalid_argument);
}

TEST_CASE("free evolution keeps the norm and revives") {
  const auto s0 = fourier_coeffs(synthetic_peaks(200.0, 0.2), 80);
  const auto s1 = evolve_free(s0, 1.7);
  CHECK(s1.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(s1.time == 1.7);
  const auto revived = evolve_free(s0, 4.0 * constants::pi);
  for (int m = -80; m <= 80; ++m) CHECK(std::abs(revived.at(m) - s0.at(m)) < 1e-12);
  CHECK_THROWS_AS(evolve_free(s0, -1.0), std::invalid_argument);
}

TEST_CASE("profile at t = 0") {
  const auto s = fourier_coeffs(reference_peaks(), 3000);
  const auto prof = fringe_profile(s);
  REQUIRE(prof.theta.size() == 12000);
  CHECK(prof.integral() == doctest::Approx(1.0).epsilon(1e-10));
  for (double v : prof.density) CHECK(v >= -1e-12);
  const auto [left, right] = peak_centers_deg(prof, scenario::theta0);
  CHECK(left == doctest::Approx(43.9854).epsilon(1e-3));
  CHECK(right == doctest::Approx(46.0146).epsilon(1e-3));
  CHECK(mirror_asymmetry(prof, scenario::theta0) < 1e-6);
  CHECK_THROWS_AS(fringe_profile(s, 8000), std::invalid_argument);
}

TEST_CASE("profile keeps parity under free evolution") {
  const auto s = evolve_free(fourier_coeffs(reference_peaks(), 3000), 0.001);
  const auto prof = fringe_profile(s);
  CHECK(prof.integral() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mirror_asymmetry(prof, scenario::theta0) < 1e-6);
}

TEST_CASE("fringe spacing of a synthetic profile") {
  FringeProfile prof;
  const int n = 3600;
  for (int i = 0; i < n; ++i) {
    const double t = constants::two_pi * i / n;
    prof.theta.push_back(t);
    prof.density.push_back(1.0 + std::cos(12.0 * t));
  }
  const auto fs = fringe_spacing(prof);
  CHECK(fs.spacing_deg == doctest::Approx(30.0).epsilon(1e-6));
  // The maximum at exactly 60 deg sits on the window edge and is not a local maximum inside it.
  CHECK(fs.peaks_deg.size() == 4);
  CHECK(fs.peaks_deg.front() == doctest::Approx(90.0));

  FringeSpacingOptions narrow;
  narrow.window_min_deg = 80.0;
  narrow.window_max_deg = 130.0;
  CHECK_THROWS_AS(fringe_spacing(prof, narrow), std::domain_error);
}

TEST_CASE("fringe spacing grows linearly with time") {
  FringeSpacingOptions o;
  o.window_min_deg = 0.0;
  o.window_max_deg = 360.0;
  o.smoothing_deg = 0.0;
  const auto s = fourier_coeffs(reference_peaks(), 3000);
  const double a = fringe_spacing(fringe_profile(evolve_free(s, 0.0005)), o).spacing_deg;
  const double b = fringe_spacing(fringe_profile(evolve_free(s, 0.001)), o).spacing_deg;
  CHECK(b / a == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("circular smoothing preserves the mean") {
  std::vector<double> v(256, 0.0);
  v[3] = 1.0;
  const auto sm = smooth_circular(v, 0.1);
  double sum = 0.0;
  for (double x : sm) sum += x;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sm[3] > sm[10]);
  CHECK(sm[0] == doctest::Approx(sm[6]).epsilon(1e-9));
}
