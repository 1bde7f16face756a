#include "spintorsion/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace spintorsion::numerics {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kNormTol = 1e-10;

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

void require_normalized(const CVector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg << "state is not normalized (norm = " << norm << ")";
    throw NumericsError(msg.str());
  }
}

}  // namespace

StepUnderflow::StepUnderflow(double time, double step)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "ODE step underflow at t = " << time << " (step " << step << ")";
        return msg.str();
      }()),
      time_(time),
      step_(step) {}

HermitianMatrix::HermitianMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw NumericsError("Hermitian matrix must be square and non-empty");
  if (!all_finite(entries_)) throw NumericsError("Hermitian matrix has non-finite entries");
  const double tol = kHermitianTol * std::max(1.0, max_abs());
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (max |H - H^dagger| = " << asym << ")";
    throw NumericsError(msg.str());
  }
  // Remove rounding-level asymmetry so downstream solvers see an exact Hermitian.
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dimension) {
  return HermitianMatrix(CMatrix::Zero(dimension, dimension));
}

double HermitianMatrix::max_abs() const noexcept {
  return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  if (other.dimension() != dimension()) throw NumericsError("dimension mismatch in sum");
  return HermitianMatrix(entries_ + other.entries_);
}

HermitianMatrix HermitianMatrix::operator*(double scale) const {
  return HermitianMatrix(entries_ * scale);
}

CVector EigenDecomposition::evolve(const CVector& psi0, double t) const {
  if (psi0.size() != eigenvalues.size()) throw NumericsError("state dimension mismatch");
  CVector coeffs = eigenvectors.adjoint() * psi0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    coeffs(k) *= std::polar(1.0, -eigenvalues(k) * t);
  return eigenvectors * coeffs;
}

EigenDecomposition eigen_hermitian(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.entries(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericsError("eigensolver did not converge");
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

CVector propagate_eigen(const HermitianMatrix& h, const CVector& psi0, double t) {
  if (psi0.size() != h.dimension()) throw NumericsError("state dimension mismatch");
  require_normalized(psi0);
  return eigen_hermitian(h).evolve(psi0, t);
}

OdeResult integrate_ode(const Generator& generator, const CVector& psi0, double t0, double t1,
                        const OdeOptions& options) {
  if (!(options.tol > 0.0)) throw NumericsError("ODE tolerance must be positive");
  OdeResult result;
  result.state = psi0;
  const double span = t1 - t0;
  if (span == 0.0) return result;

  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Eigen::Index n = psi0.size();
  auto rhs = [&](double t, const CVector& y, CVector& dy) {
    generator(t, y, dy);
    dy *= Complex(0.0, -1.0);
  };

  CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y_tmp(n), y_new(n), err(n);
  CVector& y = result.state;
  const double direction = span > 0 ? 1.0 : -1.0;
  const double min_step = options.min_step > 0 ? options.min_step : 1e-13 * std::abs(span);

  double t = t0;
  rhs(t, y, k1);
  double h = options.initial_step;
  if (h <= 0.0) {
    const double fnorm = k1.cwiseAbs().maxCoeff();
    h = fnorm > 0 ? 0.01 / fnorm : std::abs(span);
    h = std::min(h, std::abs(span));
  }

  const double norm0 = psi0.norm();
  bool last_rejected = false;
  std::size_t steps = 0;
  while (direction * (t1 - t) > 0.0) {
    if (++steps > options.max_steps) throw StepUnderflow(t, h);
    if (h < min_step) throw StepUnderflow(t, h);
    const double remaining = std::abs(t1 - t);
    const bool final_step = h >= remaining;
    const double hs = direction * (final_step ? remaining : h);

    y_tmp = y + hs * (a21 * k1);
    rhs(t + c2 * hs, y_tmp, k2);
    y_tmp = y + hs * (a31 * k1 + a32 * k2);
    rhs(t + c3 * hs, y_tmp, k3);
    y_tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * hs, y_tmp, k4);
    y_tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * hs, y_tmp, k5);
    y_tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + hs, y_tmp, k6);
    y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + hs, y_new, k7);
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err_ratio = err.cwiseAbs().maxCoeff() / options.tol;
    if (!std::isfinite(err_ratio)) throw StepUnderflow(t, h);
    if (err_ratio <= 1.0) {
      t = final_step ? t1 : t + hs;
      y.swap(y_new);
      k1.swap(k7);
      ++result.accepted_steps;
      double factor = err_ratio == 0.0 ? 5.0 : 0.9 * std::pow(err_ratio, -0.2);
      factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 5.0);
      if (!final_step) h *= factor;
      last_rejected = false;
    } else {
      ++result.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(err_ratio, -0.2));
      last_rejected = true;
    }
  }
  result.norm_drift = std::abs(result.state.norm() - norm0);
  return result;
}

GaussLegendreRule::GaussLegendreRule(int n_points) {
  if (n_points < 2) throw NumericsError("Gauss-Legendre rule needs at least 2 points");
  const int n = n_points;
  nodes_.resize(n);
  weights_.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guesses; roots are symmetric.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
}

Complex GaussLegendreRule::integrate(const std::function<Complex(double)>& f, double a,
                                     double b) const {
  if (!(a < b)) throw NumericsError("quadrature interval must satisfy a < b");
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Complex v = f(mid + half * nodes_[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericsError("non-finite integrand sample");
    sum += weights_[i] * v;
  }
  return half * sum;
}

Complex gauss_quadrature(const std::function<Complex(double)>& f, double a, double b,
                         int n_points) {
  return GaussLegendreRule(n_points).integrate(f, a, b);
}

}  // namespace spintorsion::numerics
