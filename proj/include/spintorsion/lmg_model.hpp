#pragma once

#include <string>
#include <vector>

#include "spintorsion/numerics.hpp"

namespace spintorsion::lmg {

/// Which collective operators the (lambda, h) coefficients multiply in
///   H = lambda/N (Sx^2 + Sy^2) + h Sz.
///
/// `collective_spin`: S are spin-N/2 operators (S = sum sigma/2). This is the
/// convention of the order parameters and the finite-N staircase.
/// `pauli_sum`: S are sums of Pauli matrices, the operators the driven
/// spin-torsion Hamiltonian is written in. The physical parameter map yields
/// coefficients in this convention; converting multiplies lambda by 4 and h by 2.
enum class Convention { collective_spin, pauli_sum };

/// Physical inputs of the effective model, angular frequencies in any
/// consistent unit.
struct DriveParams {
  double g = 0.0;              // collective coupling sqrt(N) g_N
  double omega_torsion = 0.0;  // omega_theta
  double omega_frame = 0.0;    // Omega_0
  double h0 = 0.0;             // Omega - Omega_0, signed
  int N = 1;
  double n_phonon = 0.0;       // <b^dagger b>, replaced by a c-number

  double single_spin_coupling() const;
};

struct LMGParams {
  double lambda = -1.0;
  double h = 0.0;
  int N = 1;
  Convention convention = Convention::collective_spin;

  LMGParams in_collective_spin() const;
  LMGParams in_pauli_sum() const;
};

struct MappedParams {
  LMGParams params;             // pauli_sum convention
  double validity_ratio = 0.0;  // min(|Omega0 +- omega|) / max(g_N, |h0|)
  std::vector<std::string> warnings;
};

/// lambda = g^2/8 * omega/(Omega0^2 - omega^2),
/// h = h0/2 + Omega0/(Omega0^2 - omega^2) (n + 1/2) g^2/(2N).
/// Throws std::domain_error at the pole Omega0 = omega. A validity ratio
/// below 5 is reported as a warning, not an error.
MappedParams lmg_from_physical(const DriveParams& p);

/// |S = N/2, M> ground state. `twice_m` keeps the half-integer M exact.
struct DickeGroundState {
  int N = 1;
  int twice_m = 0;
  double energy = 0.0;  // in the collective-spin convention

  double spin() const noexcept { return 0.5 * N; }
  double m() const noexcept { return 0.5 * twice_m; }
};

struct OrderParameters {
  double m_xy = 0.0;
  double m_z = 0.0;
};

/// Brute-force minimization of E(M) = lambda/N (S(S+1) - M^2) + h M over the
/// ladder. Only the ferromagnetic branch (lambda < 0) is modeled. At an exact
/// level crossing the smaller |M| is returned (left limit of the staircase).
DickeGroundState ground_dicke(const LMGParams& params);

/// Order parameters of the exact ground state; cross-checked against
/// diagonalization of the (N+1)x(N+1) Dicke-basis matrix.
OrderParameters order_params_exact(const LMGParams& params);

/// Closed-form finite-N staircase. The integer part is taken as a left limit
/// at jump points so it agrees with `order_params_exact` everywhere.
OrderParameters order_params_analytic(const LMGParams& params);

/// Ascending h/lambda values in (0, 1] where m_z jumps for N spins.
std::vector<double> jump_positions(int N);

/// N -> infinity curves.
OrderParameters thermodynamic_limit(double h_over_lambda);

/// Dense Dicke-basis matrix, basis ordered M = S, S-1, ..., -S, with an
/// optional transverse term `transverse * Sx`. Collective-spin convention.
numerics::HermitianMatrix dicke_hamiltonian(const LMGParams& params, double transverse = 0.0);

/// Ground state of the matrix with a symmetry-breaking field
/// epsilon = epsilon_fraction * |lambda| along Sx; order parameters from
/// expectation values. Reproduces an adiabatic sweep through the jumps.
OrderParameters order_params_symmetry_broken(const LMGParams& params,
                                             double epsilon_fraction = 1e-6);

}  // namespace spintorsion::lmg
