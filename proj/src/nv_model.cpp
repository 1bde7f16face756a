#include "spintorsion/nv_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace spintorsion::nv {

using numerics::CMatrix;
using numerics::Complex;

namespace {

constexpr double kMaxContinuationStep = 0.05;  // rad
constexpr double kMinContinuationStep = 1e-9;  // rad
constexpr double kOverlapThreshold = 0.9;
constexpr double kDegeneracyTol = 1e-9;        // relative to the level scale

CMatrix nv_matrix(const NVSystem& sys, double theta) {
  const double d = sys.zero_field_splitting;
  const double delta = sys.zeeman();
  const double c = std::cos(theta);
  const Complex off = delta * std::sin(theta) / std::sqrt(2.0) * std::polar(1.0, -sys.phi);
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 0) = d - delta * c;
  h(2, 2) = d + delta * c;
  h(0, 1) = off;
  h(1, 2) = off;
  h(1, 0) = std::conj(off);
  h(2, 1) = std::conj(off);
  return h;
}

double level_scale(const NVSystem& sys) {
  return std::max({std::abs(sys.zero_field_splitting), std::abs(sys.zeeman()), 1.0});
}

// Follows the three levels from theta = 0, where the Hamiltonian is diagonal
// and the labels are the basis states (+1, 0, -1).
class LevelTracker {
 public:
  explicit LevelTracker(const NVSystem& sys) : sys_(sys), scale_(level_scale(sys)) {
    vectors_ = CMatrix::Identity(3, 3);
    const CMatrix h = nv_matrix(sys_, 0.0);
    for (int i = 0; i < 3; ++i) energies_[i] = h(i, i).real();
  }

  double theta() const noexcept { return theta_; }

  void advance_to(double target) {
    double step = kMaxContinuationStep;
    while (theta_ != target) {
      const double remaining = target - theta_;
      const double h = std::copysign(std::min(step, std::abs(remaining)), remaining);
      const double next = std::abs(h) >= std::abs(remaining) ? target : theta_ + h;
      if (try_step(next)) {
        step = std::min(kMaxContinuationStep, 2.0 * step);
      } else {
        step *= 0.5;
        if (step < kMinContinuationStep) {
          std::ostringstream msg;
          msg << "ambiguous NV level labeling near theta = " << theta_
              << " rad (levels cross or are degenerate)";
          throw LevelCrossingError(msg.str(), theta_);
        }
      }
    }
  }

  SpinLevels levels() const { return SpinLevels{energies_[2], energies_[1], energies_[0]}; }
  double gap() const noexcept { return energies_[2] - energies_[1]; }

 private:
  bool try_step(double next) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(nv_matrix(sys_, next));
    const auto& values = solver.eigenvalues();
    const CMatrix& vecs = solver.eigenvectors();

    // Group (near-)degenerate eigenvalues; labels are matched to subspaces.
    std::array<int, 3> cluster{0, 0, 0};
    for (int j = 1; j < 3; ++j)
      cluster[j] = (values(j) - values(j - 1) <= kDegeneracyTol * scale_) ? cluster[j - 1]
                                                                          : cluster[j - 1] + 1;
    const CMatrix overlaps = vectors_.adjoint() * vecs;  // (label, new index)

    std::array<int, 3> assigned{};
    for (int label = 0; label < 3; ++label) {
      double best = -1.0;
      int best_cluster = -1;
      for (int c = 0; c <= cluster[2]; ++c) {
        double p = 0.0;
        for (int j = 0; j < 3; ++j)
          if (cluster[j] == c) p += std::norm(overlaps(label, j));
        if (p > best) {
          best = p;
          best_cluster = c;
        }
      }
      if (best <= kOverlapThreshold) return false;
      assigned[label] = best_cluster;
    }
    for (int c = 0; c <= cluster[2]; ++c) {
      const auto size = std::count(cluster.begin(), cluster.end(), c);
      const auto count = std::count(assigned.begin(), assigned.end(), c);
      if (size != count) return false;
    }

    CMatrix next_vectors(3, 3);
    for (int label = 0; label < 3; ++label) {
      const int c = assigned[label];
      std::vector<int> members;
      for (int j = 0; j < 3; ++j)
        if (cluster[j] == c) members.push_back(j);
      if (members.size() == 1) {
        next_vectors.col(label) = vecs.col(members[0]);
        energies_[label] = values(members[0]);
      } else {
        // Degenerate subspace: continue with the projection of the old vector.
        numerics::CVector proj = numerics::CVector::Zero(3);
        double energy = 0.0;
        for (int j : members) {
          proj += overlaps(label, j) * vecs.col(j);
          energy += values(j);
        }
        next_vectors.col(label) = proj.normalized();
        energies_[label] = energy / static_cast<double>(members.size());
      }
    }
    vectors_ = next_vectors;
    theta_ = next;
    return true;
  }

  NVSystem sys_;
  double scale_;
  double theta_ = 0.0;
  CMatrix vectors_;
  std::array<double, 3> energies_{};  // indexed by basis label (+1, 0, -1)
};

// dE_gap/dtheta at the tracker's current angle.
double gap_derivative(const LevelTracker& at, double scale) {
  const double theta = at.theta();
  auto central = [&](double h) {
    LevelTracker up = at;
    up.advance_to(theta + h);
    LevelTracker down = at;
    down.advance_to(theta - h);
    return (up.gap() - down.gap()) / (2.0 * h);
  };
  // Rounding noise of the differences is ~1e-16 scale / h; near a zero slope
  // convergence is judged against this absolute floor instead.
  const double floor = 1e-3 * scale;
  double h = 1e-4;
  for (int attempt = 0; attempt < 6; ++attempt, h *= 0.5) {
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    const double d4 = central(0.25 * h);
    const double r1a = (4.0 * d2 - d1) / 3.0;
    const double r1b = (4.0 * d4 - d2) / 3.0;
    const double r2 = (16.0 * r1b - r1a) / 15.0;
    if (std::abs(r2 - r1b) <= 1e-6 * std::max(std::abs(r2), floor)) return r2;
  }
  std::ostringstream msg;
  msg << "dE/dtheta extrapolation did not converge at theta = " << theta;
  throw std::runtime_error(msg.str());
}

double golden_section_max(const auto& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void NVSystem::validate() const {
  if (!(field >= 0.0) || !std::isfinite(field)) throw std::invalid_argument("field must be >= 0");
  if (!(theta >= 0.0 && theta <= constants::pi))
    throw std::invalid_argument("theta must lie in [0, pi]");
  if (!(phi >= 0.0 && phi < constants::two_pi))
    throw std::invalid_argument("phi must lie in [0, 2pi)");
  if (!std::isfinite(zero_field_splitting) || !std::isfinite(g_factor) || g_factor < 0.0)
    throw std::invalid_argument("invalid NV constants");
}

void SpheroidGeometry::validate() const {
  if (!(short_semi_axis > 0.0) || !(long_semi_axis >= short_semi_axis))
    throw std::invalid_argument("spheroid requires a >= b > 0");
  if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
}

void TorsionalMode::validate() const {
  if (!(omega > 0.0) || !(inertia > 0.0) || !std::isfinite(omega) || !std::isfinite(inertia))
    throw std::invalid_argument("torsional mode needs omega > 0 and I > 0");
}

void SweepRange::validate(const char* name) const {
  if (points < 1 || !std::isfinite(min) || !std::isfinite(max) || min > max ||
      (points == 1 && min != max) || (points > 1 && min == max)) {
    std::ostringstream msg;
    msg << "bad " << name << " range [" << min << ", " << max << "] x " << points;
    throw std::invalid_argument(msg.str());
  }
}

HermitianMatrix build_nv_hamiltonian(const NVSystem& sys) {
  sys.validate();
  return HermitianMatrix(nv_matrix(sys, sys.theta));
}

SpinLevels nv_levels(const NVSystem& sys) {
  sys.validate();
  LevelTracker tracker(sys);
  tracker.advance_to(sys.theta);
  return tracker.levels();
}

std::vector<SpinLevels> nv_level_sweep(const NVSystem& base, std::span<const double> thetas) {
  base.validate();
  LevelTracker tracker(base);
  std::vector<SpinLevels> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    NVSystem probe = base;
    probe.theta = theta;
    probe.validate();
    tracker.advance_to(theta);
    out.push_back(tracker.levels());
  }
  return out;
}

double transition_energy_derivative(const NVSystem& sys) {
  sys.validate();
  LevelTracker tracker(sys);
  tracker.advance_to(sys.theta);
  return gap_derivative(tracker, level_scale(sys));
}

Inertia moment_of_inertia(const SpheroidGeometry& geom) {
  geom.validate();
  const double a = geom.long_semi_axis;
  const double b = geom.short_semi_axis;
  const double mass = 4.0 / 3.0 * constants::pi * a * b * b * geom.density;
  return Inertia{mass, mass * (a * a + b * b) / 5.0};
}

double coupling_strength(const NVSystem& sys, const TorsionalMode& mode) {
  mode.validate();
  const double slope = transition_energy_derivative(sys);
  return std::sqrt(constants::hbar / (2.0 * mode.inertia * mode.omega)) * slope;
}

CouplingMap coupling_map(const NVSystem& base, const TorsionalMode& mode, SweepRange fields,
                         SweepRange thetas) {
  fields.validate("field");
  thetas.validate("theta");
  mode.validate();
  const double prefactor = std::sqrt(constants::hbar / (2.0 * mode.inertia * mode.omega));

  CouplingMap map;
  for (int i = 0; i < fields.points; ++i) map.fields.push_back(fields.at(i));
  for (int j = 0; j < thetas.points; ++j) map.thetas.push_back(thetas.at(j));
  map.magnitude.reserve(map.fields.size() * map.thetas.size());

  for (double field : map.fields) {
    NVSystem sys = base;
    sys.field = field;
    sys.theta = 0.0;
    sys.validate();
    const double scale = level_scale(sys);

    std::vector<LevelTracker> column;
    column.reserve(map.thetas.size());
    LevelTracker tracker(sys);
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t j = 0; j < map.thetas.size(); ++j) {
      tracker.advance_to(map.thetas[j]);
      column.push_back(tracker);
      const double g = std::abs(prefactor * gap_derivative(tracker, scale));
      map.magnitude.push_back(g);
      // |g_N| is symmetric about theta = pi/2; near-ties keep the smaller angle.
      if (g > best_value * (1.0 + 1e-9)) {
        best_value = g;
        best = j;
      }
    }

    CouplingArgmax peak{field, map.thetas[best], best_value};
    if (map.thetas.size() >= 3) {
      const double lo = map.thetas[best == 0 ? 0 : best - 1];
      const double hi = map.thetas[std::min(best + 1, map.thetas.size() - 1)];
      auto g_at = [&](double theta) {
        LevelTracker probe = column[best];
        probe.advance_to(theta);
        return std::abs(prefactor * gap_derivative(probe, scale));
      };
      if (hi > lo) {
        const double theta_star = golden_section_max(g_at, lo, hi, 1e-7);
        const double g_star = g_at(theta_star);
        if (g_star > best_value) peak = CouplingArgmax{field, theta_star, g_star};
      }
    }
    map.argmax.push_back(peak);
  }
  return map;
}

}  // namespace spintorsion::nv
