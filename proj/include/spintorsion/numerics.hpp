#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spintorsion::numerics {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised when an input violates a numerical precondition (non-Hermitian,
/// non-finite, wrong dimension, unnormalized state).
class NumericsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive integration gave up: the controller asked for a step smaller than
/// the configured floor. `time()` is where it happened.
class StepUnderflow : public std::runtime_error {
 public:
  StepUnderflow(double time, double step);
  double time() const noexcept { return time_; }
  double step() const noexcept { return step_; }

 private:
  double time_;
  double step_;
};

/// Dense Hermitian matrix. Construction checks finiteness and
/// |H_ij - conj(H_ji)| <= 1e-12 * max(1, max|H|).
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix entries);

  static HermitianMatrix zero(Eigen::Index dimension);

  Eigen::Index dimension() const noexcept { return entries_.rows(); }
  const CMatrix& entries() const noexcept { return entries_; }
  double max_abs() const noexcept;

  Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double scale) const;

 private:
  CMatrix entries_;
};

/// Eigenvalues ascending, eigenvectors as unitary columns.
struct EigenDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  /// e^{-iHt} psi0 using the stored spectrum.
  CVector evolve(const CVector& psi0, double t) const;
};

EigenDecomposition eigen_hermitian(const HermitianMatrix& h);

/// e^{-iHt} psi0 for time-independent H. psi0 must be normalized to 1e-10.
CVector propagate_eigen(const HermitianMatrix& h, const CVector& psi0, double t);

/// Applies H(t) to psi: out = H(t) * psi. The integrator solves i dpsi/dt = H(t) psi.
using Generator = std::function<void(double t, const CVector& psi, CVector& out)>;

struct OdeOptions {
  double tol = 1e-10;          // local error bound per step (max-abs norm)
  double initial_step = 0.0;   // 0 -> heuristic
  double min_step = 0.0;       // 0 -> 1e-13 * |t1 - t0|
  std::size_t max_steps = 50'000'000;
};

struct OdeResult {
  CVector state;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double norm_drift = 0.0;  // | ||psi(t1)|| - ||psi(t0)|| |
};

/// Dormand-Prince 5(4) with local extrapolation and FSAL.
OdeResult integrate_ode(const Generator& generator, const CVector& psi0, double t0, double t1,
                        const OdeOptions& options = {});

/// Gauss-Legendre rule on [-1, 1].
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int n_points);

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  Complex integrate(const std::function<Complex(double)>& f, double a, double b) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

Complex gauss_quadrature(const std::function<Complex(double)>& f, double a, double b,
                         int n_points);

}  // namespace spintorsion::numerics
