#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spintorsion/constants.hpp"
#include "spintorsion/spin_boson.hpp"

using namespace spintorsion;
using namespace spintorsion::spin_boson;

namespace {

SpinBosonConfig single(int n_cut, double omega, double g, double gap) {
  SpinBosonConfig c;
  c.N = 1;
  c.n_cut = n_cut;
  c.omega = omega;
  c.coupling = g;
  c.spin_gap = gap;
  return c;
}

std::vector<double> sorted_spectrum(const HermitianMatrix& h) {
  const auto dec = numerics::eigen_hermitian(h);
  return std::vector<double>(dec.eigenvalues.data(), dec.eigenvalues.data() + dec.eigenvalues.size());
}

}  // namespace

TEST_CASE("decoupled single-spin spectrum") {
  const auto h = build_single_spin_hamiltonian(single(10, 1.0, 0.0, 0.37));
  std::vector<double> expected;
  for (int n = 0; n < 10; ++n) {
    expected.push_back(n + 0.185);
    expected.push_back(n - 0.185);
  }
  std::sort(expected.begin(), expected.end());
  const auto got = sorted_spectrum(h);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_CASE("polaron-shifted spectrum") {
  const double w = 1.0, g = 0.8, e = 0.37;
  const auto got = sorted_spectrum(build_single_spin_hamiltonian(single(64, w, g, e)));
  std::vector<double> expected;
  for (int n = 0; n < 12; ++n)
    for (double s : {+1.0, -1.0}) expected.push_back(w * n - g * g / (4.0 * w) + s * e / 2.0);
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < 20; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-9));
}

TEST_CASE("single-spin matrix is real symmetric") {
  const auto h = build_single_spin_hamiltonian(single(8, 1.3, 0.4, 2.0));
  CHECK(h.entries().imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK((h.entries() - h.entries().transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_single_spin_hamiltonian([] {
                    auto c = single(8, 1.0, 0.1, 1.0);
                    c.N = 2;
                    return c;
                  }()),
                  std::invalid_argument);
}

TEST_CASE("dimension limit") {
  SpinBosonConfig c = single(2048, 1.0, 0.1, 1.0);
  c.N = 2;
  CHECK_THROWS_AS(c.validate(), std::length_error);
  c.max_dimension = 1 << 16;
  CHECK_NOTHROW(c.validate());
  c.n_cut = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("collective Pauli algebra") {
  const auto s = collective_spin(3);
  const CMatrix comm = s.sx * s.sy - s.sy * s.sx;
  CHECK((comm - Complex(0.0, 2.0) * s.sz).norm() < 1e-12);
  CHECK((s.splus - 0.5 * (s.sx + Complex(0.0, 1.0) * s.sy)).norm() < 1e-12);
  CHECK(s.sz(0, 0).real() == 3.0);
}

TEST_CASE("without drive every spin's sigma_z is conserved") {
  SpinBosonConfig c;
  c.N = 2;
  c.n_cut = 12;
  c.omega = 1.0;
  c.coupling = 0.3;
  c.spin_gap = 0.8;
  const auto h = build_driven_hamiltonian(c);
  CHECK_FALSE(h.time_dependent());
  const CMatrix hm = h.at(0.0).entries();
  for (int j = 0; j < 2; ++j) {
    CMatrix sz_j = CMatrix::Zero(4 * 12, 4 * 12);
    for (int cfg = 0; cfg < 4; ++cfg) {
      const double v = (cfg >> (1 - j)) & 1 ? -1.0 : 1.0;
      for (int n = 0; n < 12; ++n) sz_j(cfg * 12 + n, cfg * 12 + n) = v;
    }
    CHECK((hm * sz_j - sz_j * hm).norm() < 1e-12);
  }
}

TEST_CASE("resonant Rabi oscillation") {
  SpinBosonConfig c = single(4, 1.0, 0.0, 5.0);
  c.rabi = 0.3;
  c.drive_frequency = 5.0;
  const auto h = build_driven_hamiltonian(c);
  CVector spin(2);
  spin << 0.0, 1.0;  // |0>, sigma_z = -1
  const auto start = product_state(spin, c.n_cut);
  numerics::OdeOptions opts;
  opts.tol = 1e-12;
  for (double t : {1.0, 4.0, 7.5}) {
    const auto r = numerics::integrate_ode(h.generator(), start.amplitudes, 0.0, t, opts);
    const double up = std::norm(r.state(0));
    CHECK(up == doctest::Approx(std::pow(std::sin(c.rabi * t / 2.0), 2)).epsilon(1e-8));
    CHECK(r.norm_drift < 1e-8);
  }
}

TEST_CASE("rotating frame equivalence over one drive period") {
  SpinBosonConfig c = single(16, 1.0, 0.25, 4.0);
  c.rabi = 0.5;
  c.drive_frequency = 3.7;
  const double period = constants::two_pi / c.drive_frequency;
  const auto lab = build_driven_hamiltonian(c);
  const auto rot = to_rotating_frame(lab);
  CHECK(rot.frame() == Frame::drive_rotating);
  CHECK_FALSE(rot.time_dependent());
  CHECK_THROWS_AS(to_rotating_frame(rot), FrameMismatch);

  CVector spin(2);
  spin << std::sqrt(0.3), std::sqrt(0.7);
  const auto start = product_state(spin, c.n_cut);
  numerics::OdeOptions opts;
  opts.tol = 1e-12;
  const CVector via_ode = numerics::integrate_ode(lab.generator(), start.amplitudes, 0.0, period, opts).state;

  SpinBosonState r = to_rotating_frame(start, c.drive_frequency);
  r.amplitudes = numerics::propagate_eigen(rot.at(0.0), r.amplitudes, period);
  r.time = period;
  const auto back = from_rotating_frame(r, c.drive_frequency);
  CHECK(std::norm(back.amplitudes.dot(via_ode)) >= 1.0 - 1e-7);
  CHECK_THROWS_AS(from_rotating_frame(back, c.drive_frequency), FrameMismatch);
}

TEST_CASE("rotated Hamiltonian carries the detuned splitting") {
  SpinBosonConfig c = single(4, 1.0, 0.0, 4.0);
  c.drive_frequency = 4.0;
  const auto rot = to_rotating_frame(build_driven_hamiltonian(c)).at(0.0);
  // E0' = 0 and Omega = 0: only the oscillator remains.
  for (int n = 0; n < 4; ++n) {
    CHECK(rot(n, n).real() == doctest::Approx(n));
    CHECK(rot(4 + n, 4 + n).real() == doctest::Approx(n));
  }
}

TEST_CASE("rotation without drive or coupling only rephases") {
  CVector spin(2);
  spin << 0.6, 0.8;
  SpinBosonState s = product_state(spin, 3);
  s.time = 1.3;
  const auto r = to_rotating_frame(s, 2.0);
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i)
    CHECK(std::abs(r.amplitudes(i)) == doctest::Approx(std::abs(s.amplitudes(i))));
}

TEST_CASE("cat displacement") {
  CatConfig c{2.0, 1.0, 3.0, 64};
  CHECK(std::abs(cat_displacement(c, 0.0)) == 0.0);
  CHECK(std::abs(cat_displacement(c, constants::pi)) == doctest::Approx(2.0));
  for (int k = 0; k <= 50; ++k)
    CHECK(std::abs(cat_displacement(c, 0.2 * k)) <= 2.0 + 1e-15);
  CHECK(cutoff_adequate(2.0, 26));
  CHECK_FALSE(cutoff_adequate(2.0, 25));
}

TEST_CASE("cat state at t = 0 is the initial product state") {
  CatConfig c{2.0, 1.0, 3.0, 64};
  const auto s = embed(analytic_cat_state(c, 0.0), c);
  CVector expected = CVector::Zero(128);
  expected(0) = expected(64) = 1.0 / std::sqrt(2.0);
  CHECK(std::norm(s.amplitudes.dot(expected)) == doctest::Approx(1.0).epsilon(1e-15));
  const auto v = validate_cat_against_ode(c, 0.0);
  CHECK(v.fidelity == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("closed-form cat state is exact") {
  for (double ratio : {1.0, 2.0, 3.0})
    for (double t : {constants::pi / 2.0, constants::pi, 2.0 * constants::pi}) {
      CatConfig c{ratio, 1.0, 2.9, 64};
      const auto v = validate_cat_against_ode(c, t);
      CHECK(v.fidelity >= 1.0 - 1e-6);
      CHECK(std::abs(v.phase_residual) <= 1e-6);
      CHECK(v.top_population < 1e-6);
      CHECK(v.norm_drift <= 1e-8);
    }
}

TEST_CASE("second-order phase") {
  // Omega2 = i (g^2/4)(t/omega - sin(omega t)/omega^2); at t = pi it is i pi for g = 2.
  CatConfig c{2.0, 1.0, 0.0, 64};
  const auto v = validate_cat_against_ode(c, constants::pi);
  const auto cat = analytic_cat_state(c, constants::pi);
  CHECK(cat.omega2_phase == doctest::Approx(constants::pi));
  CHECK(std::abs(v.phase_residual) < 1e-6);
}

TEST_CASE("branch overlap") {
  CatConfig c{3.0, 1.0, 0.0, 64};
  const auto cat = analytic_cat_state(c, constants::pi);
  const auto s = embed(cat, c);
  const CVector up = s.amplitudes.head(64), down = s.amplitudes.tail(64);
  const double overlap = std::abs(down.dot(up)) / (up.norm() * down.norm());
  CHECK(std::abs(overlap - std::exp(-2.0 * std::norm(cat.beta))) < 1e-8);
}

TEST_CASE("cat cutoff rule") {
  CatConfig c{6.0, 1.0, 0.0, 40};
  CHECK_THROWS_AS(embed(analytic_cat_state(c, constants::pi), c), std::domain_error);
  CHECK_THROWS_AS(validate_cat_against_ode(c, constants::pi), std::domain_error);
}

TEST_CASE("full dynamics against the LMG model") {
  lmg::DriveParams p;
  p.N = 2;
  p.omega_torsion = 2.52;
  p.omega_frame = 1.0;

  SUBCASE("no coupling") {
    p.g = 0.0;
    LmgComparisonOptions o;
    o.span = 50.0;
    o.samples = 200;
    CHECK(compare_full_vs_lmg(p, o).max_deviation < 1e-10);
  }
  SUBCASE("deviation shrinks with the validity ratio") {
    double previous = 1e9;
    for (double ratio : {2.0, 5.0, 10.0}) {
      p.g = std::sqrt(2.0) * 1.52 / ratio;
      const auto r = compare_full_vs_lmg(p);
      CHECK(r.max_deviation < previous);
      CHECK(r.warnings.empty() == (ratio > 5.0));
      previous = r.max_deviation;
    }
  }
  SUBCASE("thermal boson") {
    p.g = std::sqrt(2.0) * 1.52 / 10.0;
    p.n_phonon = 0.2;
    const auto r = compare_full_vs_lmg(p);
    CHECK(r.max_deviation >= 0.0);
    CHECK(r.top_population < 1e-6);
  }
  SUBCASE("preconditions") {
    p.g = 0.1;
    p.N = 4;
    CHECK_THROWS_AS(compare_full_vs_lmg(p), std::invalid_argument);
  }
}
