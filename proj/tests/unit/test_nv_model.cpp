#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "spintorsion/nv_model.hpp"

using namespace spintorsion;
using namespace spintorsion::nv;

namespace {

// Real roots of E^3 - 2D E^2 + (D^2 - Delta^2) E + D Delta^2 sin^2(theta), ascending,
// by the trigonometric cubic formula.
std::array<double, 3> cubic_levels(double d, double delta, double theta) {
  const double a = -2.0 * d;
  const double b = d * d - delta * delta;
  const double c = d * delta * delta * std::sin(theta) * std::sin(theta);
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double phi = std::acos(std::clamp(3.0 * q / (p * r), -1.0, 1.0));
  std::array<double, 3> e;
  for (int k = 0; k < 3; ++k) e[k] = r * std::cos((phi - 2.0 * constants::pi * k) / 3.0) - a / 3.0;
  std::sort(e.begin(), e.end());
  return e;
}

// Implicit differentiation of the characteristic polynomial.
double root_slope(double e, double d, double delta, double theta) {
  const double dp_dtheta = d * delta * delta * 2.0 * std::sin(theta) * std::cos(theta);
  const double dp_de = 3.0 * e * e - 4.0 * d * e + (d * d - delta * delta);
  return -dp_dtheta / dp_de;
}

NVSystem at(double field, double theta) {
  NVSystem s;
  s.field = field;
  s.theta = theta;
  return s;
}

}  // namespace

TEST_CASE("Hamiltonian layout and theta = 0 levels") {
  const NVSystem s = at(0.05, 0.0);
  const auto h = build_nv_hamiltonian(s);
  const double d = s.zero_field_splitting, delta = s.zeeman();
  CHECK(delta < 0.0);
  CHECK(h(0, 0).real() == doctest::Approx(d - delta));
  CHECK(h(2, 2).real() == doctest::Approx(d + delta));
  CHECK(std::abs(h(0, 1)) == 0.0);

  const auto l = nv_levels(s);
  CHECK(l.e_plus1 == doctest::Approx(d - delta).epsilon(1e-14));
  CHECK(std::abs(l.e_0) < 1e-6);
  CHECK(l.e_minus1 == doctest::Approx(d + delta).epsilon(1e-14));
}

TEST_CASE("off-diagonal entries carry the azimuthal phase") {
  NVSystem s = at(0.03, 0.9);
  s.phi = 0.4;
  const auto h = build_nv_hamiltonian(s);
  const double mag = std::abs(s.zeeman()) * std::sin(0.9) / std::sqrt(2.0);
  CHECK(std::abs(h(0, 1)) == doctest::Approx(mag));
  CHECK(std::arg(h(0, 1) / s.zeeman()) == doctest::Approx(-0.4));
  CHECK(std::abs(h(0, 2)) == 0.0);
}

TEST_CASE("levels match the cubic formula and Vieta identities") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> theta_dist(0.0, constants::pi);
  std::uniform_real_distribution<double> field_dist(0.001, 0.09);
  for (int i = 0; i < 50; ++i) {
    const NVSystem s = at(field_dist(rng), theta_dist(rng));
    const auto l = nv_levels(s);
    const auto e = cubic_levels(s.zero_field_splitting, s.zeeman(), s.theta);
    const double scale = s.zero_field_splitting;
    CHECK(std::abs(l.e_0 - e[0]) < 1e-12 * scale);
    CHECK(std::abs(l.e_minus1 - e[1]) < 1e-12 * scale);
    CHECK(std::abs(l.e_plus1 - e[2]) < 1e-12 * scale);
    const double d = s.zero_field_splitting, delta = s.zeeman(), sn = std::sin(s.theta);
    CHECK(std::abs(l.e_0 * l.e_minus1 * l.e_plus1 + d * delta * delta * sn * sn) <
          1e-12 * d * d * d);
  }
}

TEST_CASE("sweep labels are continuous") {
  std::vector<double> thetas;
  for (int i = 0; i <= 200; ++i) thetas.push_back(constants::pi * i / 200.0);
  const auto levels = nv_level_sweep(at(0.05, 0.0), thetas);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    CHECK(levels[i].e_0 < levels[i].e_minus1);
    CHECK(levels[i].e_minus1 < levels[i].e_plus1);
  }
}

TEST_CASE("transition slope matches implicit differentiation") {
  for (double theta : {0.2, 0.785, 1.3, 2.0, 2.9}) {
    const NVSystem s = at(0.05, theta);
    const auto e = cubic_levels(s.zero_field_splitting, s.zeeman(), theta);
    const double expected = root_slope(e[1], s.zero_field_splitting, s.zeeman(), theta) -
                            root_slope(e[0], s.zero_field_splitting, s.zeeman(), theta);
    CHECK(transition_energy_derivative(s) == doctest::Approx(expected).epsilon(1e-8));
  }
  const NVSystem mid = at(0.05, constants::pi / 2);
  CHECK(std::abs(transition_energy_derivative(mid)) < 1e-9 * mid.zero_field_splitting);
}

TEST_CASE("moment of inertia against Monte Carlo integration") {
  const SpheroidGeometry g;
  const Inertia in = moment_of_inertia(g);
  CHECK(in.mass == doctest::Approx(2.34572251468e-19).epsilon(1e-10));
  CHECK(in.moment == doctest::Approx(9.38289005872e-35).epsilon(1e-10));

  // Long axis along z; rotation about the short x axis: I = int rho (y^2 + z^2).
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = g.long_semi_axis, b = g.short_semi_axis;
  double acc = 0.0;
  int inside = 0;
  const int samples = 400000;
  for (int i = 0; i < samples; ++i) {
    const double x = u(rng) * b, y = u(rng) * b, z = u(rng) * a;
    if (x * x / (b * b) + y * y / (b * b) + z * z / (a * a) > 1.0) continue;
    ++inside;
    acc += y * y + z * z;
  }
  const double box = 8.0 * a * b * b;
  const double mass_mc = g.density * box * inside / samples;
  const double moment_mc = g.density * box * acc / samples;
  CHECK(mass_mc == doctest::Approx(in.mass).epsilon(0.01));
  CHECK(moment_mc == doctest::Approx(in.moment).epsilon(0.01));
}

TEST_CASE("coupling strength at the reference point") {
  const Inertia in = moment_of_inertia(SpheroidGeometry{});
  const TorsionalMode trapped{constants::angular(2.52e6), in.moment};
  const double g = constants::hertz(coupling_strength(at(0.05, constants::pi / 4), trapped));
  // Frozen from tools/oracles/coupling_golden.py.
  CHECK(g == doctest::Approx(331905.88413555225).epsilon(1e-6));

  const TorsionalMode relaxed{constants::angular(50e3), in.moment};
  const double g_relaxed =
      constants::hertz(coupling_strength(at(0.05, constants::pi / 4), relaxed));
  CHECK(g_relaxed == doctest::Approx(g * std::sqrt(2.52e6 / 50e3)).epsilon(1e-9));
}

TEST_CASE("coupling map") {
  const Inertia in = moment_of_inertia(SpheroidGeometry{});
  const TorsionalMode mode{constants::angular(2.52e6), in.moment};
  const auto map = coupling_map(NVSystem{}, mode, {0.0, 0.06, 4}, {0.0, constants::pi, 37});
  REQUIRE(map.magnitude.size() == 4 * 37);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(map.at(i, 0) < 1e-6);
    for (std::size_t j = 0; j < 37; ++j)
      CHECK(map.at(i, j) == doctest::Approx(map.at(i, 36 - j)).epsilon(1e-6).scale(1.0));
  }
  for (std::size_t j = 0; j < 37; ++j) CHECK(map.at(0, j) == 0.0);
  const auto& peak = map.argmax[2];  // 0.04 T
  CHECK(peak.theta < constants::pi / 2);
  CHECK(peak.coupling >= map.at(2, 10));

  const auto at05 = coupling_map(NVSystem{}, mode, {0.05, 0.05, 1}, {0.0, constants::pi, 91});
  CHECK(at05.argmax[0].theta == doctest::Approx(0.765).epsilon(0.01));
  CHECK(constants::hertz(at05.argmax[0].coupling) > 3.0e5);
  CHECK(constants::hertz(at05.argmax[0].coupling) < 3.4e5);
}

TEST_CASE("input validation and level crossings") {
  CHECK_THROWS_AS(nv_levels(at(0.05, -0.1)), std::invalid_argument);
  CHECK_THROWS_AS(nv_levels(at(-0.01, 0.1)), std::invalid_argument);
  CHECK_THROWS_AS(SweepRange({1.0, 0.0, 3}).validate("x"), std::invalid_argument);

  // At B = D hbar / (g mu_B) the |0> and |-1> levels are degenerate at theta = 0.
  NVSystem s;
  s.field = s.zero_field_splitting * constants::hbar / (s.g_factor * constants::bohr_magneton);
  s.theta = 0.3;
  CHECK_THROWS_AS(nv_levels(s), LevelCrossingError);
}
