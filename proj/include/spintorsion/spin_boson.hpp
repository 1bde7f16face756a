#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "spintorsion/lmg_model.hpp"
#include "spintorsion/numerics.hpp"

namespace spintorsion::spin_boson {

using numerics::CMatrix;
using numerics::Complex;
using numerics::CVector;
using numerics::HermitianMatrix;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Basis: |spin configuration> (x) |n>, flat index = spin_index * n_cut + n.
/// Each spin has local index 0 for sigma_z = +1 (NV |-1>) and 1 for
/// sigma_z = -1 (NV |0>); spin 0 is the most significant bit.
enum class Frame { lab, drive_rotating, interaction };

const char* frame_name(Frame f) noexcept;

class FrameMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SpinBosonConfig {
  int N = 1;
  int n_cut = 16;               // Fock states 0 .. n_cut-1
  double omega = 0.0;           // boson frequency
  double coupling = 0.0;        // g_N, single spin
  double spin_gap = 0.0;        // E0
  double rabi = 0.0;            // Omega
  double drive_frequency = 0.0; // omega_l
  std::size_t max_dimension = 4096;

  Eigen::Index spin_dimension() const noexcept { return Eigen::Index{1} << N; }
  Eigen::Index dimension() const noexcept { return spin_dimension() * n_cut; }
  void validate() const;
};

struct SpinBosonState {
  CVector amplitudes;
  int N = 1;
  int n_cut = 2;
  Frame frame = Frame::lab;
  double time = 0.0;

  double norm() const { return amplitudes.norm(); }
  /// Largest population in the last Fock level over all spin configurations.
  double top_fock_population() const;
  /// ||psi|| = 1 within 1e-8 and top-Fock population < 1e-6.
  void validate() const;
};

/// Collective Pauli sums S_a = sum_j sigma_a^j on the 2^N spin space.
struct CollectiveSpin {
  CMatrix sx, sy, sz, splus;
};
CollectiveSpin collective_spin(int N);

/// H = omega b^dag b + (E0/2) sigma_z + (g_N/2) sigma_z (b^dag + b), N = 1.
HermitianMatrix build_single_spin_hamiltonian(const SpinBosonConfig& cfg);

/// Multi-spin driven Hamiltonian
///   H(t) = omega b^dag b + E0/2 S_z + g_N/2 S_z (b^dag + b)
///          + Omega/2 (e^{-i omega_l t} S+ + h.c.)
/// or its drive-rotating form (static, E0 -> E0 - omega_l, drive -> Omega/2 S_x).
class DrivenHamiltonian {
 public:
  Frame frame() const noexcept { return frame_; }
  const SpinBosonConfig& config() const noexcept { return cfg_; }
  bool time_dependent() const noexcept { return frame_ == Frame::lab && cfg_.rabi != 0.0; }

  void apply(double t, const CVector& psi, CVector& out) const;
  numerics::Generator generator() const;
  HermitianMatrix at(double t) const;

 private:
  friend DrivenHamiltonian build_driven_hamiltonian(const SpinBosonConfig& cfg);
  friend DrivenHamiltonian to_rotating_frame(const DrivenHamiltonian& h);

  SpinBosonConfig cfg_;
  Frame frame_ = Frame::lab;
  SparseMatrix static_;
  SparseMatrix raise_;  // S+ (x) 1, unused in the rotating frame
  SparseMatrix lower_;
};

DrivenHamiltonian build_driven_hamiltonian(const SpinBosonConfig& cfg);

/// U = exp(-i omega_l t S_z / 2), psi_lab = U psi_rot. The generator form
/// returns the time-independent rotated Hamiltonian.
DrivenHamiltonian to_rotating_frame(const DrivenHamiltonian& h);
SpinBosonState to_rotating_frame(const SpinBosonState& s, double drive_frequency);
SpinBosonState from_rotating_frame(const SpinBosonState& s, double drive_frequency);

SpinBosonState product_state(const CVector& spin, int n_cut, int fock = 0);

// ---- cat state ----------------------------------------------------------

struct CatConfig {
  double coupling = 0.0;  // g_N
  double omega = 0.0;     // relaxed trap frequency omega'
  double spin_gap = 0.0;  // E(theta0)
  int n_cut = 64;

  void validate() const;
};

/// Closed form of e^{-i H t} (|0> + |-1>)/sqrt2 (x) |vac> for
/// H = omega' b^dag b + E/2 sigma_z + g_N/2 sigma_z (b^dag + b):
///   |-1> (x) e^{-iEt/2} |beta>  +  |0> (x) e^{+iEt/2} |-beta>,
/// times the global phase e^{Omega2}.
struct CatStateAnalytic {
  double t = 0.0;
  Complex beta;              // displacement of the |-1> (sigma_z = +1) branch
  double omega2_phase = 0.0; // Omega2 = i * omega2_phase
  Complex phase_minus1;      // e^{-iEt/2}
  Complex phase_0;           // e^{+iEt/2}
};

/// beta(t) = (g_N / 2 omega') (e^{-i omega' t} - 1).
Complex cat_displacement(const CatConfig& cfg, double t);
/// Cutoff rule n_cut >= |beta|^2 + 6|beta| + 10.
bool cutoff_adequate(double beta_abs, int n_cut) noexcept;

CatStateAnalytic analytic_cat_state(const CatConfig& cfg, double t);
/// Embeds the closed form into the truncated space (frame tag lab).
/// Throws std::domain_error when the cutoff rule fails for |beta(t)|.
SpinBosonState embed(const CatStateAnalytic& cat, const CatConfig& cfg);
/// Truncated coherent state |alpha>, computed by the recurrence
/// c_{n+1} = c_n alpha / sqrt(n+1).
CVector coherent_state(Complex alpha, int n_cut);

struct CatValidation {
  double fidelity = 0.0;
  double phase_residual = 0.0;  // arg <analytic|numeric>, wrapped to (-pi, pi]
  double top_population = 0.0;
  double norm_drift = 0.0;
  std::size_t steps = 0;
};

/// Integrates i d/dt psi = (g_N/2) sigma_z (b^dag e^{i omega' t} + b e^{-i omega' t}) psi
/// from the initial product state, restores the lab frame and compares.
CatValidation validate_cat_against_ode(const CatConfig& cfg, double t, double tol = 1e-12);

// ---- adiabatic elimination ---------------------------------------------

struct LmgComparisonOptions {
  int n_cut = 16;
  double span = 0.0;   // 0 -> 2 pi / |lambda|
  int samples = 2000;
  CVector spin_state;  // empty -> every spin in sigma_z'' = +1
};

struct LmgComparison {
  double max_deviation = 0.0;  // Pauli-sum units, |<S~>| <= N
  double validity_ratio = 0.0; // min|Omega0 +- omega| / max(g_N, |h0|)
  double lambda = 0.0;         // Pauli-sum convention
  double h = 0.0;
  double span = 0.0;
  double top_population = 0.0;
  std::vector<std::string> warnings;
};

/// Compares <S~_a>(t), a in {x, y, z}, between the drive-rotating Hamiltonian
/// (resonant, Omega = Omega0 + h0) viewed in the Omega0 frame and
/// H_LMG = lambda/N (S~x^2 + S~y^2) + h S~z. The boson starts in the vacuum,
/// or in a diagonal thermal mixture when p.n_phonon > 0. Operator relabeling:
/// S~x = S_z'', S~y = -S_y'', S~z = S_x''.
LmgComparison compare_full_vs_lmg(const lmg::DriveParams& p, const LmgComparisonOptions& opts = {});

}  // namespace spintorsion::spin_boson
