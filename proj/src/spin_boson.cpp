#include "spintorsion/spin_boson.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spintorsion::spin_boson {

namespace {

using Triplet = Eigen::Triplet<Complex>;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

constexpr double kNormTol = 1e-8;
constexpr double kTopPopulationTol = 1e-6;

// sigma_z eigenvalue sum of a spin configuration: bit 0 -> +1, bit 1 -> -1.
int sz_of(Eigen::Index config, int N) {
  return N - 2 * std::popcount(static_cast<unsigned long long>(config));
}

// spin (x) boson with either factor possibly the identity (empty matrix).
SparseMatrix kron(const CMatrix& spin, const CMatrix& boson, Eigen::Index spin_dim,
                  Eigen::Index n_cut) {
  const CMatrix s = spin.size() ? spin : CMatrix::Identity(spin_dim, spin_dim);
  const CMatrix b = boson.size() ? boson : CMatrix::Identity(n_cut, n_cut);
  std::vector<Triplet> entries;
  for (Eigen::Index i = 0; i < spin_dim; ++i)
    for (Eigen::Index j = 0; j < spin_dim; ++j) {
      if (s(i, j) == Complex(0.0)) continue;
      for (Eigen::Index m = 0; m < n_cut; ++m)
        for (Eigen::Index n = 0; n < n_cut; ++n)
          if (b(m, n) != Complex(0.0))
            entries.emplace_back(i * n_cut + m, j * n_cut + n, s(i, j) * b(m, n));
    }
  SparseMatrix out(spin_dim * n_cut, spin_dim * n_cut);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

CMatrix annihilation(int n_cut) {
  CMatrix b = CMatrix::Zero(n_cut, n_cut);
  for (int n = 0; n + 1 < n_cut; ++n) b(n, n + 1) = std::sqrt(n + 1.0);
  return b;
}

CMatrix number_operator(int n_cut) {
  CMatrix nb = CMatrix::Zero(n_cut, n_cut);
  for (int n = 0; n < n_cut; ++n) nb(n, n) = n;
  return nb;
}

double wrap_phase(double x) { return std::arg(std::polar(1.0, x)); }

SpinBosonState rotate_spin_phases(const SpinBosonState& s, double drive_frequency, double sign) {
  SpinBosonState out = s;
  const Eigen::Index spin_dim = Eigen::Index{1} << s.N;
  for (Eigen::Index c = 0; c < spin_dim; ++c) {
    const Complex phase = std::polar(1.0, sign * drive_frequency * s.time * sz_of(c, s.N) / 2.0);
    out.amplitudes.segment(c * s.n_cut, s.n_cut) *= phase;
  }
  return out;
}

}  // namespace

const char* frame_name(Frame f) noexcept {
  switch (f) {
    case Frame::lab: return "lab";
    case Frame::drive_rotating: return "drive-rotating";
    case Frame::interaction: return "interaction";
  }
  return "unknown";
}

void SpinBosonConfig::validate() const {
  if (N < 1 || N > 16) throw std::invalid_argument("spin count must lie in [1, 16]");
  if (n_cut < 2) throw std::invalid_argument("n_cut must be >= 2");
  if (static_cast<std::size_t>(dimension()) > max_dimension) {
    std::ostringstream msg;
    msg << "Hilbert-space dimension " << dimension() << " exceeds the limit " << max_dimension;
    throw std::length_error(msg.str());
  }
  for (double v : {omega, coupling, spin_gap, rabi, drive_frequency})
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite spin-boson parameter");
}

double SpinBosonState::top_fock_population() const {
  const Eigen::Index spin_dim = Eigen::Index{1} << N;
  double worst = 0.0;
  for (Eigen::Index c = 0; c < spin_dim; ++c)
    worst = std::max(worst, std::norm(amplitudes(c * n_cut + n_cut - 1)));
  return worst;
}

void SpinBosonState::validate() const {
  if (amplitudes.size() != (Eigen::Index{1} << N) * n_cut)
    throw numerics::NumericsError("state size does not match N and n_cut");
  if (std::abs(norm() - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg << "state norm " << norm() << " differs from 1";
    throw numerics::NumericsError(msg.str());
  }
  if (top_fock_population() >= kTopPopulationTol) {
    std::ostringstream msg;
    msg << "top Fock level population " << top_fock_population() << " >= 1e-6; raise n_cut";
    throw std::domain_error(msg.str());
  }
}

CollectiveSpin collective_spin(int N) {
  if (N < 1 || N > 16) throw std::invalid_argument("spin count must lie in [1, 16]");
  const Eigen::Index dim = Eigen::Index{1} << N;
  CollectiveSpin s{CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim),
                   CMatrix::Zero(dim, dim)};
  for (Eigen::Index c = 0; c < dim; ++c) {
    s.sz(c, c) = sz_of(c, N);
    for (int j = 0; j < N; ++j) {
      const Eigen::Index bit = Eigen::Index{1} << (N - 1 - j);
      const Eigen::Index flipped = c ^ bit;
      s.sx(flipped, c) += 1.0;
      // sigma_y |up> = i |down>, sigma_y |down> = -i |up>; up is bit 0.
      s.sy(flipped, c) += (c & bit) ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
      if (c & bit) s.splus(flipped, c) += 1.0;
    }
  }
  return s;
}

HermitianMatrix build_single_spin_hamiltonian(const SpinBosonConfig& cfg) {
  if (cfg.N != 1) throw std::invalid_argument("single-spin Hamiltonian requires N = 1");
  cfg.validate();
  SpinBosonConfig undriven = cfg;
  undriven.rabi = 0.0;
  return build_driven_hamiltonian(undriven).at(0.0);
}

DrivenHamiltonian build_driven_hamiltonian(const SpinBosonConfig& cfg) {
  cfg.validate();
  const Eigen::Index sd = cfg.spin_dimension();
  const CollectiveSpin s = collective_spin(cfg.N);
  const CMatrix b = annihilation(cfg.n_cut);
  const CMatrix none;

  DrivenHamiltonian h;
  h.cfg_ = cfg;
  h.frame_ = Frame::lab;
  h.static_ = cfg.omega * kron(none, number_operator(cfg.n_cut), sd, cfg.n_cut) +
              (cfg.spin_gap / 2.0) * kron(s.sz, none, sd, cfg.n_cut) +
              (cfg.coupling / 2.0) * kron(s.sz, b + b.adjoint(), sd, cfg.n_cut);
  h.raise_ = kron(s.splus, none, sd, cfg.n_cut);
  h.lower_ = SparseMatrix(h.raise_.adjoint());
  return h;
}

void DrivenHamiltonian::apply(double t, const CVector& psi, CVector& out) const {
  out.noalias() = static_ * psi;
  if (time_dependent()) {
    const Complex w = std::polar(cfg_.rabi / 2.0, -cfg_.drive_frequency * t);
    out.noalias() += w * (raise_ * psi);
    out.noalias() += std::conj(w) * (lower_ * psi);
  }
}

numerics::Generator DrivenHamiltonian::generator() const {
  return [self = *this](double t, const CVector& psi, CVector& out) { self.apply(t, psi, out); };
}

HermitianMatrix DrivenHamiltonian::at(double t) const {
  CMatrix dense = CMatrix(static_);
  if (time_dependent()) {
    const Complex w = std::polar(cfg_.rabi / 2.0, -cfg_.drive_frequency * t);
    dense += w * CMatrix(raise_) + std::conj(w) * CMatrix(lower_);
  }
  return HermitianMatrix(std::move(dense));
}

DrivenHamiltonian to_rotating_frame(const DrivenHamiltonian& h) {
  if (h.frame_ != Frame::lab)
    throw FrameMismatch(std::string("expected a lab-frame Hamiltonian, got ") +
                        frame_name(h.frame_));
  const Eigen::Index sd = h.cfg_.spin_dimension();
  const CollectiveSpin s = collective_spin(h.cfg_.N);
  const CMatrix none;
  DrivenHamiltonian out = h;
  out.frame_ = Frame::drive_rotating;
  out.static_ = h.static_ - (h.cfg_.drive_frequency / 2.0) * kron(s.sz, none, sd, h.cfg_.n_cut) +
                (h.cfg_.rabi / 2.0) * kron(s.sx, none, sd, h.cfg_.n_cut);
  return out;
}

SpinBosonState to_rotating_frame(const SpinBosonState& s, double drive_frequency) {
  if (s.frame != Frame::lab)
    throw FrameMismatch(std::string("expected a lab-frame state, got ") + frame_name(s.frame));
  SpinBosonState out = rotate_spin_phases(s, drive_frequency, +1.0);
  out.frame = Frame::drive_rotating;
  return out;
}

SpinBosonState from_rotating_frame(const SpinBosonState& s, double drive_frequency) {
  if (s.frame != Frame::drive_rotating)
    throw FrameMismatch(std::string("expected a drive-rotating state, got ") +
                        frame_name(s.frame));
  SpinBosonState out = rotate_spin_phases(s, drive_frequency, -1.0);
  out.frame = Frame::lab;
  return out;
}

SpinBosonState product_state(const CVector& spin, int n_cut, int fock) {
  const int N = std::countr_zero(static_cast<unsigned long long>(spin.size()));
  if (spin.size() < 2 || (Eigen::Index{1} << N) != spin.size())
    throw std::invalid_argument("spin vector size must be a power of two");
  if (fock < 0 || fock >= n_cut) throw std::invalid_argument("Fock index outside cutoff");
  SpinBosonState s;
  s.N = N;
  s.n_cut = n_cut;
  s.amplitudes = CVector::Zero(spin.size() * n_cut);
  for (Eigen::Index c = 0; c < spin.size(); ++c) s.amplitudes(c * n_cut + fock) = spin(c);
  return s;
}

// ---- cat state ----------------------------------------------------------

void CatConfig::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega' must be > 0");
  if (!std::isfinite(coupling) || !std::isfinite(spin_gap))
    throw std::invalid_argument("non-finite cat parameters");
  if (n_cut < 2) throw std::invalid_argument("n_cut must be >= 2");
}

Complex cat_displacement(const CatConfig& cfg, double t) {
  return cfg.coupling / (2.0 * cfg.omega) * (std::polar(1.0, -cfg.omega * t) - 1.0);
}

bool cutoff_adequate(double beta_abs, int n_cut) noexcept {
  return beta_abs * beta_abs + 6.0 * beta_abs + 10.0 <= n_cut;
}

CatStateAnalytic analytic_cat_state(const CatConfig& cfg, double t) {
  cfg.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  const double g = cfg.coupling, w = cfg.omega;
  CatStateAnalytic cat;
  cat.t = t;
  cat.beta = cat_displacement(cfg, t);
  cat.omega2_phase = g * g / 4.0 * (t / w - std::sin(w * t) / (w * w));
  cat.phase_minus1 = std::polar(1.0, -cfg.spin_gap * t / 2.0);
  cat.phase_0 = std::polar(1.0, cfg.spin_gap * t / 2.0);
  return cat;
}

CVector coherent_state(Complex alpha, int n_cut) {
  CVector c(n_cut);
  c(0) = std::exp(-std::norm(alpha) / 2.0);
  for (int n = 0; n + 1 < n_cut; ++n) c(n + 1) = c(n) * alpha / std::sqrt(n + 1.0);
  return c;
}

SpinBosonState embed(const CatStateAnalytic& cat, const CatConfig& cfg) {
  if (!cutoff_adequate(std::abs(cat.beta), cfg.n_cut)) {
    std::ostringstream msg;
    msg << "n_cut = " << cfg.n_cut << " is below |beta|^2 + 6|beta| + 10 for |beta| = "
        << std::abs(cat.beta);
    throw std::domain_error(msg.str());
  }
  const Complex global = std::polar(1.0 / std::sqrt(2.0), cat.omega2_phase);
  SpinBosonState s;
  s.N = 1;
  s.n_cut = cfg.n_cut;
  s.time = cat.t;
  s.amplitudes.resize(2 * cfg.n_cut);
  s.amplitudes.head(cfg.n_cut) = global * cat.phase_minus1 * coherent_state(cat.beta, cfg.n_cut);
  s.amplitudes.tail(cfg.n_cut) = global * cat.phase_0 * coherent_state(-cat.beta, cfg.n_cut);
  return s;
}

CatValidation validate_cat_against_ode(const CatConfig& cfg, double t, double tol) {
  cfg.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  const double g = cfg.coupling, w = cfg.omega;
  const int nc = cfg.n_cut;
  // Largest |beta| reached on [0, t].
  const double beta_max =
      std::abs(g) / w * (w * t >= std::numbers::pi ? 1.0 : std::abs(std::sin(w * t / 2.0)));
  if (!cutoff_adequate(beta_max, nc)) {
    std::ostringstream msg;
    msg << "n_cut = " << nc << " is below |beta|^2 + 6|beta| + 10 for |beta| = " << beta_max;
    throw std::domain_error(msg.str());
  }

  CVector psi0 = CVector::Zero(2 * nc);
  psi0(0) = psi0(nc) = 1.0 / std::sqrt(2.0);

  numerics::Generator interaction = [g, w, nc](double time, const CVector& psi, CVector& out) {
    const Complex up = std::polar(g / 2.0, w * time);  // multiplies b^dag
    const Complex down = std::conj(up);                 // multiplies b
    for (int branch = 0; branch < 2; ++branch) {
      const double sign = branch == 0 ? 1.0 : -1.0;
      const Eigen::Index o = branch * nc;
      for (int n = 0; n < nc; ++n) {
        Complex v = 0.0;
        if (n > 0) v += up * std::sqrt(static_cast<double>(n)) * psi(o + n - 1);
        if (n + 1 < nc) v += down * std::sqrt(n + 1.0) * psi(o + n + 1);
        out(o + n) = sign * v;
      }
    }
  };

  CatValidation result;
  CVector psi = psi0;
  if (t > 0.0) {
    numerics::OdeOptions opts;
    opts.tol = tol;
    const numerics::OdeResult run = numerics::integrate_ode(interaction, psi0, 0.0, t, opts);
    psi = run.state;
    result.norm_drift = run.norm_drift;
    result.steps = run.accepted_steps;
  }
  // Back to the lab frame: e^{-i(omega' n + sigma_z E/2) t}.
  for (int branch = 0; branch < 2; ++branch) {
    const double sign = branch == 0 ? 1.0 : -1.0;
    for (int n = 0; n < nc; ++n)
      psi(branch * nc + n) *= std::polar(1.0, -(w * n + sign * cfg.spin_gap / 2.0) * t);
  }

  SpinBosonState numeric;
  numeric.N = 1;
  numeric.n_cut = nc;
  numeric.time = t;
  numeric.amplitudes = psi;
  result.top_population = numeric.top_fock_population();

  const SpinBosonState analytic = embed(analytic_cat_state(cfg, t), cfg);
  const Complex overlap = analytic.amplitudes.dot(psi);
  result.fidelity = std::norm(overlap);
  result.phase_residual = wrap_phase(std::arg(overlap));
  return result;
}

// ---- adiabatic elimination ---------------------------------------------

LmgComparison compare_full_vs_lmg(const lmg::DriveParams& p, const LmgComparisonOptions& opts) {
  if (p.N < 1 || p.N > 3) throw std::invalid_argument("full-vs-LMG comparison requires N <= 3");
  if (opts.n_cut < 2 || opts.n_cut > 16)
    throw std::invalid_argument("full-vs-LMG comparison requires 2 <= n_cut <= 16");
  if (opts.samples < 2) throw std::invalid_argument("need at least two samples");

  const lmg::MappedParams mapped = lmg::lmg_from_physical(p);
  LmgComparison result;
  result.lambda = mapped.params.lambda;
  result.h = mapped.params.h;
  result.validity_ratio = mapped.validity_ratio;
  result.warnings = mapped.warnings;
  if (opts.span > 0.0)
    result.span = opts.span;
  else if (result.lambda != 0.0)
    result.span = 2.0 * std::numbers::pi / std::abs(result.lambda);
  else
    throw std::invalid_argument("lambda = 0: an explicit span is required");

  const int N = p.N;
  const int nc = opts.n_cut;
  const Eigen::Index sd = Eigen::Index{1} << N;
  const CollectiveSpin s = collective_spin(N);
  // Relabeled operators of the Omega0 frame.
  const CMatrix tx = s.sz;
  const CMatrix ty = -s.sy;
  const CMatrix tz = s.sx;

  CVector spin0 = opts.spin_state;
  if (spin0.size() == 0) {
    spin0 = CVector::Zero(sd);
    spin0(0) = 1.0;
  }
  if (spin0.size() != sd) throw std::invalid_argument("spin_state has the wrong dimension");
  if (std::abs(spin0.norm() - 1.0) > kNormTol)
    throw numerics::NumericsError("spin_state is not normalized");

  // Full resonant drive-rotating dynamics, E0' = 0, Omega = Omega0 + h0.
  SpinBosonConfig cfg;
  cfg.N = N;
  cfg.n_cut = nc;
  cfg.omega = p.omega_torsion;
  cfg.coupling = p.single_spin_coupling();
  cfg.rabi = p.omega_frame + p.h0;
  const auto full = numerics::eigen_hermitian(to_rotating_frame(build_driven_hamiltonian(cfg)).at(0.0));

  const lmg::LMGParams& lp = mapped.params;
  const auto lmg_spec = numerics::eigen_hermitian(
      HermitianMatrix(lp.lambda / N * (tx * tx + ty * ty) + lp.h * tz));
  const auto frame = numerics::eigen_hermitian(HermitianMatrix(s.sx));

  // Diagonal thermal boson state, truncated to the cutoff.
  std::vector<double> weights(nc, 0.0);
  if (p.n_phonon > 0.0) {
    const double nb = p.n_phonon;
    double total = 0.0;
    for (int n = 0; n < nc; ++n) total += weights[n] = std::pow(nb / (1.0 + nb), n) / (1.0 + nb);
    if (1.0 - total > kTopPopulationTol) {
      std::ostringstream msg;
      msg << "thermal weight beyond the cutoff is " << 1.0 - total << "; raise n_cut";
      throw std::domain_error(msg.str());
    }
    for (double& x : weights) x /= total;
  } else {
    weights[0] = 1.0;
  }

  std::vector<CVector> initial;
  std::vector<int> occupied;
  for (int n = 0; n < nc; ++n) {
    if (weights[n] == 0.0) continue;
    initial.push_back(product_state(spin0, nc, n).amplitudes);
    occupied.push_back(n);
  }

  const CMatrix* ops[3] = {&tx, &ty, &tz};
  for (int k = 0; k < opts.samples; ++k) {
    const double t = result.span * k / (opts.samples - 1);
    // Spin part of exp(+i Omega0 t S_x''/2).
    CMatrix rotation = frame.eigenvectors;
    for (Eigen::Index j = 0; j < sd; ++j)
      rotation.col(j) *= std::polar(1.0, p.omega_frame * t * frame.eigenvalues(j) / 2.0);
    rotation = rotation * frame.eigenvectors.adjoint();

    double expect_full[3] = {0.0, 0.0, 0.0};
    double top = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i) {
      const double wgt = weights[occupied[i]];
      const CVector psi = full.evolve(initial[i], t);
      const CMatrix amp = rotation * RowMajorMap(psi.data(), sd, nc);
      for (int a = 0; a < 3; ++a)
        expect_full[a] += wgt * (amp.adjoint() * (*ops[a]) * amp).trace().real();
      double top_i = 0.0;
      for (Eigen::Index c = 0; c < sd; ++c) top_i = std::max(top_i, std::norm(psi(c * nc + nc - 1)));
      top += wgt * top_i;
    }
    result.top_population = std::max(result.top_population, top);

    const CVector phi = lmg_spec.evolve(spin0, t);
    for (int a = 0; a < 3; ++a) {
      const double e_lmg = phi.dot(*ops[a] * phi).real();
      result.max_deviation = std::max(result.max_deviation, std::abs(expect_full[a] - e_lmg));
    }
  }
  if (result.top_population >= kTopPopulationTol) {
    std::ostringstream msg;
    msg << "top Fock level population " << result.top_population << " >= 1e-6; raise n_cut";
    throw std::domain_error(msg.str());
  }
  return result;
}

}  // namespace spintorsion::spin_boson
