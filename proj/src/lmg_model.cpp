#include "spintorsion/lmg_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spintorsion::lmg {

using numerics::CMatrix;
using numerics::Complex;
using numerics::HermitianMatrix;

namespace {

// Two ladder states whose scaled energies differ by less than this are
// treated as degenerate (the exact jump point). In units of h N / (2 lambda).
constexpr double kTieTolerance = 1e-9;

void require_ferromagnetic(const LMGParams& p) {
  if (p.N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(p.lambda < 0.0))
    throw std::domain_error("only the ferromagnetic branch (lambda < 0) is modeled");
  if (!std::isfinite(p.h)) throw std::invalid_argument("h must be finite");
}

// Integer part of x, taken as the left limit when x sits on a positive integer.
int left_floor(double x) {
  const double n = std::round(x);
  if (n >= 1.0 && std::abs(x - n) <= 0.5 * kTieTolerance) return static_cast<int>(n) - 1;
  return static_cast<int>(std::floor(x));
}

// m_z = 2|M|/N and m_xy = sqrt(1 + 2/N - m_z^2) = sqrt(N(N+2) - (2M)^2)/N.
OrderParameters from_twice_m(int N, int twice_m) {
  const double n = N;
  const long long radicand = static_cast<long long>(N) * (N + 2) - static_cast<long long>(twice_m) * twice_m;
  return OrderParameters{std::sqrt(static_cast<double>(radicand)) / n, std::abs(twice_m) / n};
}

CMatrix collective_matrices(int N, CMatrix& jx, CMatrix& jy) {
  const int dim = N + 1;
  const double s = 0.5 * N;
  CMatrix jz = CMatrix::Zero(dim, dim);
  CMatrix jp = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = s - i;
    jz(i, i) = m;
    if (i > 0) jp(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  const CMatrix jm = jp.adjoint();
  jx = 0.5 * (jp + jm);
  jy = Complex(0.0, -0.5) * (jp - jm);
  return jz;
}

}  // namespace

double DriveParams::single_spin_coupling() const {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  return g / std::sqrt(static_cast<double>(N));
}

LMGParams LMGParams::in_collective_spin() const {
  if (convention == Convention::collective_spin) return *this;
  return LMGParams{4.0 * lambda, 2.0 * h, N, Convention::collective_spin};
}

LMGParams LMGParams::in_pauli_sum() const {
  if (convention == Convention::pauli_sum) return *this;
  return LMGParams{0.25 * lambda, 0.5 * h, N, Convention::pauli_sum};
}

MappedParams lmg_from_physical(const DriveParams& p) {
  if (p.N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(p.n_phonon >= 0.0)) throw std::invalid_argument("n_phonon must be >= 0");
  const double denom = p.omega_frame * p.omega_frame - p.omega_torsion * p.omega_torsion;
  if (p.omega_frame == p.omega_torsion || denom == 0.0)
    throw std::domain_error("adiabatic elimination is singular at Omega0 = omega_theta");

  const double n = static_cast<double>(p.N);
  MappedParams out;
  out.params.N = p.N;
  out.params.convention = Convention::pauli_sum;
  out.params.lambda = p.g * p.g / 8.0 * p.omega_torsion / denom;
  out.params.h = p.h0 / 2.0 + p.omega_frame / denom * (p.n_phonon + 0.5) * p.g * p.g / (2.0 * n);

  const double detuning = std::min(std::abs(p.omega_frame + p.omega_torsion),
                                   std::abs(p.omega_frame - p.omega_torsion));
  const double perturbation = std::max(p.single_spin_coupling(), std::abs(p.h0));
  out.validity_ratio =
      perturbation > 0.0 ? detuning / perturbation : std::numeric_limits<double>::infinity();
  if (out.validity_ratio <= 5.0) {
    std::ostringstream msg;
    msg << "adiabatic elimination validity ratio " << out.validity_ratio
        << " <= 5; the LMG description is unreliable";
    out.warnings.push_back(msg.str());
  }
  return out;
}

DickeGroundState ground_dicke(const LMGParams& params) {
  const LMGParams p = params.in_collective_spin();
  require_ferromagnetic(p);
  const int n = p.N;
  const double y = p.h * n / (2.0 * p.lambda);
  const double ss1 = n * (n + 2.0) / 4.0;  // S(S+1)

  // E = lambda/N * score with lambda < 0, so the ground state maximizes score.
  int best_tm = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  bool first = true;
  for (int tm = -n; tm <= n; tm += 2) {
    const double score = ss1 - tm * tm / 4.0 + y * tm;
    if (first || score > best_score + kTieTolerance) {
      best_score = score;
      best_tm = tm;
      first = false;
    } else if (std::abs(score - best_score) <= kTieTolerance) {
      const bool smaller = std::abs(tm) < std::abs(best_tm);
      const bool same_prefer_sign = std::abs(tm) == std::abs(best_tm) && (tm > 0) == (y >= 0.0);
      if (smaller || same_prefer_sign) {
        best_tm = tm;
        best_score = std::max(best_score, score);
      }
    }
  }
  const double m = 0.5 * best_tm;
  DickeGroundState ground;
  ground.N = n;
  ground.twice_m = best_tm;
  ground.energy = p.lambda / n * (ss1 - m * m) + p.h * m;
  return ground;
}

OrderParameters order_params_exact(const LMGParams& params) {
  const LMGParams p = params.in_collective_spin();
  const DickeGroundState ground = ground_dicke(p);
  const double n = p.N;

  const auto decomposition = numerics::eigen_hermitian(dicke_hamiltonian(p));
  const double e_matrix = decomposition.eigenvalues(0);
  const double scale = (std::abs(p.lambda) + std::abs(p.h)) * (n + 1.0);
  if (std::abs(e_matrix - ground.energy) > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "Dicke-matrix ground energy " << e_matrix << " disagrees with ladder scan "
        << ground.energy;
    throw std::logic_error(msg.str());
  }
  return from_twice_m(p.N, ground.twice_m);
}

OrderParameters order_params_analytic(const LMGParams& params) {
  const LMGParams p = params.in_collective_spin();
  if (p.N < 1) throw std::invalid_argument("N must be >= 1");
  if (p.lambda == 0.0 && p.h == 0.0) throw std::domain_error("h/lambda undefined");
  const double ratio = p.lambda == 0.0 ? std::numeric_limits<double>::infinity()
                                       : std::abs(p.h / p.lambda);
  // N m_z is an integer; keep it exact.
  int twice_m = p.N;
  if (ratio < 1.0) {
    const double y = ratio * p.N / 2.0;
    twice_m = p.N % 2 == 1 ? 1 + 2 * left_floor(y) : 2 * left_floor(y + 0.5);
  }
  return from_twice_m(p.N, twice_m);
}

std::vector<double> jump_positions(int N) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  std::vector<double> out;
  for (int k = 1; k <= N / 2; ++k)
    out.push_back(N % 2 == 1 ? 2.0 * k / N : (2.0 * k - 1.0) / N);
  return out;
}

OrderParameters thermodynamic_limit(double h_over_lambda) {
  const double r = std::abs(h_over_lambda);
  if (r >= 1.0) return OrderParameters{0.0, 1.0};
  return OrderParameters{std::sqrt(1.0 - r * r), r};
}

HermitianMatrix dicke_hamiltonian(const LMGParams& params, double transverse) {
  const LMGParams p = params.in_collective_spin();
  if (p.N < 1) throw std::invalid_argument("N must be >= 1");
  CMatrix jx, jy;
  const CMatrix jz = collective_matrices(p.N, jx, jy);
  CMatrix h = p.lambda / p.N * (jx * jx + jy * jy) + p.h * jz + transverse * jx;
  return HermitianMatrix(std::move(h));
}

OrderParameters order_params_symmetry_broken(const LMGParams& params, double epsilon_fraction) {
  const LMGParams p = params.in_collective_spin();
  require_ferromagnetic(p);
  CMatrix jx, jy;
  const CMatrix jz = collective_matrices(p.N, jx, jy);
  const auto decomposition =
      numerics::eigen_hermitian(dicke_hamiltonian(p, epsilon_fraction * std::abs(p.lambda)));
  const numerics::CVector v = decomposition.eigenvectors.col(0);
  const double n = p.N;
  const double z2 = v.dot(jz * jz * v).real();
  const double xy2 = v.dot((jx * jx + jy * jy) * v).real();
  return OrderParameters{2.0 / n * std::sqrt(std::max(0.0, xy2)),
                         2.0 / n * std::sqrt(std::max(0.0, z2))};
}

}  // namespace spintorsion::lmg
