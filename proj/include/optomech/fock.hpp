#pragma once

// Truncated number-basis engine for the two optical modes (A, C).
//
// Every map that acts on a single mode is represented as a superoperator on
// that mode's operator space, so the environment modes of the
// storage/retrieval dilation (B_in, dA, dB) are never held in the joint
// state: each beam-splitter stage is contracted against its (diagonal)
// environment state immediately.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/errors.hpp"
#include "optomech/gauss_hermite.hpp"
#include "optomech/gaussian.hpp"

namespace optomech::fock {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class Mode { A = 0, C = 1 };

inline constexpr int kDefaultLevels = 16;            // n_max = 15
inline constexpr double kDefaultLeakageBudget = 1e-6;

/// Density operator on (A, C) with per-mode cutoffs. Joint index is a * dim_c + c.
struct FockDensityMatrix {
  int dim_a = 0;
  int dim_c = 0;
  CMatrix data;

  static FockDensityMatrix from_pure(const CVector& psi, int dim_a, int dim_c) {
    if (psi.size() != static_cast<Eigen::Index>(dim_a) * dim_c)
      throw StructuralError("state vector size does not match mode dimensions");
    return {dim_a, dim_c, psi * psi.adjoint()};
  }

  int index(int a, int c) const { return a * dim_c + c; }
  int dim(Mode m) const { return m == Mode::A ? dim_a : dim_c; }

  double trace() const { return data.trace().real(); }
  double purity() const { return (data * data).trace().real() / (trace() * trace()); }
  double hermiticity_error() const { return (data - data.adjoint()).cwiseAbs().maxCoeff(); }

  CMatrix reduced(Mode keep) const {
    const int d = dim(keep);
    CMatrix out = CMatrix::Zero(d, d);
    for (int a = 0; a < dim_a; ++a)
      for (int a2 = 0; a2 < dim_a; ++a2)
        for (int c = 0; c < dim_c; ++c)
          for (int c2 = 0; c2 < dim_c; ++c2) {
            if (keep == Mode::A && c == c2) out(a, a2) += data(index(a, c), index(a2, c2));
            if (keep == Mode::C && a == a2) out(c, c2) += data(index(a, c), index(a2, c2));
          }
    return out;
  }
};

/// Linear map on the operator space of one mode; vec index is i * dim + j
/// for the operator element |i><j|.
struct Superoperator {
  int dim = 0;
  CMatrix matrix;

  static Superoperator identity(int dim) {
    return {dim, CMatrix::Identity(dim * dim, dim * dim)};
  }

  /// Adds weight * K (.) K^dag.
  void add_kraus(const CMatrix& k, double weight = 1.0) {
    for (int i = 0; i < dim; ++i)
      for (int kk = 0; kk < dim; ++kk) {
        const Complex left = weight * k(i, kk);
        if (left == Complex{}) continue;
        for (int j = 0; j < dim; ++j)
          for (int l = 0; l < dim; ++l) matrix(i * dim + j, kk * dim + l) += left * std::conj(k(j, l));
      }
  }

  /// `then` applied after `*this`.
  Superoperator followed_by(const Superoperator& then) const {
    if (then.dim != dim) throw StructuralError("superoperator dimensions differ");
    return {dim, then.matrix * matrix};
  }
};

// ---------------------------------------------------------------------------
// Single-mode operators

inline CMatrix annihilation_matrix(int n_levels) {
  if (n_levels < 2) throw DomainError("need at least two Fock levels");
  CMatrix a = CMatrix::Zero(n_levels, n_levels);
  for (int n = 1; n < n_levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Quadratures X = (a + a^dag)/sqrt2 and P = -i(a - a^dag)/sqrt2, truncated.
inline CMatrix x_quadrature(int n_levels) {
  const CMatrix a = annihilation_matrix(n_levels);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

inline CMatrix p_quadrature(int n_levels) {
  const CMatrix a = annihilation_matrix(n_levels);
  return Complex(0.0, -1.0) * (a - a.adjoint()) / std::sqrt(2.0);
}

namespace detail {

// exp(-i H) for Hermitian H.
inline CMatrix expm_hermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector phases = (Complex(0.0, -1.0) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// exp(alpha a^dag - alpha^* a) of the truncated generator. Exactly unitary;
/// agrees with the true displacement only while |alpha|^2 is well below the cutoff.
inline CMatrix displacement_matrix(Complex alpha, int n_levels) {
  const CMatrix a = annihilation_matrix(n_levels);
  const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  // gen = -i H with H = i gen Hermitian.
  return detail::expm_hermitian(Complex(0.0, 1.0) * gen);
}

/// Exact matrix elements <m|D(alpha)|n> of the untruncated displacement for
/// m, n < n_levels:
///   sqrt(n!/m!) alpha^(m-n) e^{-|alpha|^2/2} L_n^(m-n)(|alpha|^2),  m >= n,
/// and the mirrored form for m < n. Not unitary: weight pushed past the cutoff
/// is lost, which is what a phase-space average over large kicks needs.
inline CMatrix displacement_matrix_projected(Complex alpha, int n_levels) {
  if (n_levels < 1) throw DomainError("need at least one Fock level");
  const double x = std::norm(alpha);
  // laguerre[k][j] = L_j^(k)(x)
  std::vector<std::vector<double>> laguerre(n_levels, std::vector<double>(n_levels, 0.0));
  for (int k = 0; k < n_levels; ++k) {
    auto& l = laguerre[k];
    l[0] = 1.0;
    if (n_levels > 1) l[1] = 1.0 + k - x;
    for (int j = 1; j + 1 < n_levels; ++j) l[j + 1] = ((2.0 * j + 1.0 + k - x) * l[j] - (j + k) * l[j - 1]) / (j + 1.0);
  }
  CMatrix d(n_levels, n_levels);
  for (int m = 0; m < n_levels; ++m)
    for (int n = 0; n < n_levels; ++n) {
      const int lo = std::min(m, n);
      const int k = std::abs(m - n);
      // sqrt(lo!/hi!) x^{k/2} e^{-x/2} in log form; the phase is carried separately.
      const double log_mag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)) - 0.5 * x;
      const double radial = k == 0 ? std::exp(log_mag) : std::exp(log_mag + 0.5 * k * std::log(x));
      const Complex phase = k == 0 || x == 0.0
                                ? Complex(1.0)
                                : std::pow(m >= n ? alpha / std::sqrt(x) : -std::conj(alpha) / std::sqrt(x), k);
      d(m, n) = (k > 0 && x == 0.0) ? Complex{} : radial * phase * laguerre[k][lo];
    }
  return d;
}

/// exp(theta (e^{i phi} a b^dag - e^{-i phi} a^dag b)) on modes of dims
/// (dim_a, dim_b), joint index a * dim_b + b.
///
/// The generator conserves a^dag a + b^dag b, so each total-number sector is
/// exponentiated in full and then projected onto the kept levels. Entries are
/// therefore the exact matrix elements of the untruncated operator; the result
/// is exactly unitary on every sector that fits entirely inside the cutoffs.
inline CMatrix beam_splitter_unitary(double theta, double phi, int dim_a, int dim_b) {
  if (dim_a < 2 || dim_b < 2) throw DomainError("beam splitter modes need at least two levels");
  const int dim = dim_a * dim_b;
  CMatrix u = CMatrix::Zero(dim, dim);
  const Complex e_phi = std::polar(1.0, phi);

  for (int total = 0; total <= (dim_a - 1) + (dim_b - 1); ++total) {
    // Sector basis |n, total - n>, n = 0..total.
    const int size = total + 1;
    CMatrix gen = CMatrix::Zero(size, size);
    for (int n = 0; n <= total; ++n) {
      const int m = total - n;
      // a b^dag |n, m> = sqrt(n (m+1)) |n-1, m+1>
      if (n > 0) gen(n - 1, n) += theta * e_phi * std::sqrt(static_cast<double>(n) * (m + 1));
      // a^dag b |n, m> = sqrt((n+1) m) |n+1, m-1>
      if (m > 0) gen(n + 1, n) -= theta * std::conj(e_phi) * std::sqrt(static_cast<double>(n + 1) * m);
    }
    const CMatrix block = detail::expm_hermitian(Complex(0.0, 1.0) * gen);
    for (int n_out = 0; n_out <= total; ++n_out) {
      const int m_out = total - n_out;
      if (n_out >= dim_a || m_out >= dim_b) continue;
      for (int n_in = 0; n_in <= total; ++n_in) {
        const int m_in = total - n_in;
        if (n_in >= dim_a || m_in >= dim_b) continue;
        u(n_out * dim_b + m_out, n_in * dim_b + m_in) = block(n_out, n_in);
      }
    }
  }
  return u;
}

struct ThermalState {
  Eigen::VectorXd populations;
  double leakage = 0.0;  ///< weight beyond the cutoff before renormalization
  Warnings warnings;

  CMatrix matrix() const { return populations.cast<Complex>().asDiagonal(); }
  double mean_occupation() const {
    double s = 0.0;
    for (Eigen::Index n = 0; n < populations.size(); ++n) s += n * populations[n];
    return s;
  }
};

/// Geometric populations N^n/(N+1)^(n+1); leakage above `leakage_budget` is warned about.
inline ThermalState thermal_state(double mean_occupation, int n_levels, bool renormalize = true,
                                  double leakage_budget = kDefaultLeakageBudget) {
  optomech::detail::require_finite(mean_occupation, "thermal occupation");
  if (mean_occupation < 0.0) throw DomainError("thermal occupation must be >= 0");
  if (n_levels < 1) throw DomainError("need at least one Fock level");

  ThermalState th;
  th.populations.resize(n_levels);
  const double ratio = mean_occupation / (mean_occupation + 1.0);
  double weight = 1.0 / (mean_occupation + 1.0);
  for (int n = 0; n < n_levels; ++n) {
    th.populations[n] = weight;
    weight *= ratio;
  }
  th.leakage = std::pow(ratio, n_levels);  // exact geometric tail
  if (renormalize) th.populations /= th.populations.sum();
  if (th.leakage > leakage_budget) {
    std::ostringstream os;
    os << "thermal state N=" << mean_occupation << " truncated at " << n_levels
       << " levels loses weight " << th.leakage;
    th.warnings.add(os.str());
  }
  return th;
}

// ---------------------------------------------------------------------------
// Input states

/// (D(alpha)|1>_A |0>_C + D(alpha)|0>_A |1>_C) / sqrt2.
inline FockDensityMatrix single_photon_entangled_input(Complex alpha, int dim_a, int dim_c = 2) {
  if (dim_c < 2) throw DomainError("mode C needs at least two levels");
  const CMatrix d = displacement_matrix(alpha, dim_a);
  CVector psi = CVector::Zero(dim_a * dim_c);
  for (int a = 0; a < dim_a; ++a) {
    psi[a * dim_c + 0] += d(a, 1) / std::sqrt(2.0);
    psi[a * dim_c + 1] += d(a, 0) / std::sqrt(2.0);
  }
  return FockDensityMatrix::from_pure(psi, dim_a, dim_c);
}

/// sqrt(1 - t^2) sum_n t^n |n, n>, t = tanh r; weight beyond the cutoff is dropped.
inline FockDensityMatrix two_mode_squeezed_input(double r, int dim_a, int dim_c) {
  optomech::detail::require_finite(r, "squeezing r");
  if (r < 0.0) throw DomainError("squeezing r must be >= 0");
  const double t = std::tanh(r);
  CVector psi = CVector::Zero(dim_a * dim_c);
  double amp = std::sqrt(1.0 - t * t);
  for (int n = 0; n < std::min(dim_a, dim_c); ++n) {
    psi[n * dim_c + n] = amp;
    amp *= t;
  }
  return FockDensityMatrix::from_pure(psi, dim_a, dim_c);
}

// ---------------------------------------------------------------------------
// Superoperators

/// Photon loss: Kraus E_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|.
inline Superoperator loss_superoperator(double eta, int dim) {
  gaussian::detail::require_unit_interval(eta, "transmission eta");
  Superoperator s{dim, CMatrix::Zero(dim * dim, dim * dim)};
  for (int k = 0; k < dim; ++k) {
    CMatrix e = CMatrix::Zero(dim, dim);
    for (int n = k; n < dim; ++n) {
      const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      const double kept = n - k == 0 ? 0.0 : (n - k) * std::log(eta);
      const double lost = k == 0 ? 0.0 : k * std::log1p(-eta);
      e(n - k, n) = std::exp(0.5 * (log_binom + kept + lost));
    }
    s.add_kraus(e);
  }
  return s;
}

/// Mixes the mode with an environment mode in the diagonal state
/// `env_populations` on a beam splitter of transmission amplitude cos(theta),
/// then traces the environment out.
inline Superoperator beam_splitter_superoperator(double theta, int dim, const Eigen::VectorXd& env_populations) {
  const int env_in = static_cast<int>(env_populations.size());
  // Outgoing environment levels are never truncated: they are traced out, and
  // photon conservation bounds them by dim + env_in - 2.
  const int env_out = dim + env_in - 1;
  const CMatrix u = beam_splitter_unitary(theta, 0.0, dim, env_out);

  Superoperator s{dim, CMatrix::Zero(dim * dim, dim * dim)};
  CMatrix k(dim, dim);
  for (int in = 0; in < env_in; ++in) {
    const double p = env_populations[in];
    if (p == 0.0) continue;
    for (int out = 0; out < env_out; ++out) {
      for (int a_out = 0; a_out < dim; ++a_out)
        for (int a_in = 0; a_in < dim; ++a_in) k(a_out, a_in) = u(a_out * env_out + out, a_in * env_out + in);
      s.add_kraus(k, p);
    }
  }
  return s;
}

/// a -> -a, i.e. (-1)^n.
inline Superoperator parity_superoperator(int dim) {
  CMatrix flip = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) flip(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  Superoperator s{dim, CMatrix::Zero(dim * dim, dim * dim)};
  s.add_kraus(flip);
  return s;
}

/// Beam-splitter angles realizing the coefficient row (c1, c2, f1, f2) as the
/// cascade (A,B_in) -> (A,dA) -> (A,dB):
///   f2 = sin t3,  f1 = sin t2 cos t3,  c2 = sin t1 cos t2 cos t3.
struct CascadeAngles {
  double theta_mech = 0.0;
  double theta_optical_noise = 0.0;
  double theta_mech_noise = 0.0;
};

inline CascadeAngles cascade_angles(const gaussian::ChannelCoefficients& k) {
  auto safe_asin = [](double v) { return std::asin(std::clamp(v, 0.0, 1.0)); };
  CascadeAngles ang;
  ang.theta_mech_noise = safe_asin(k.f2);
  const double t3 = std::cos(ang.theta_mech_noise);
  ang.theta_optical_noise = t3 > 0.0 ? safe_asin(k.f1 / t3) : 0.0;
  const double t23 = t3 * std::cos(ang.theta_optical_noise);
  ang.theta_mech = t23 > 1e-300 ? safe_asin(k.c2_mag / t23) : 0.0;
  return ang;
}

inline constexpr double kClosureTol = 1e-9;

/// Storage/retrieval channel on mode A as its beam-splitter cascade:
///   A_out = -c1 A + (phase) c2 B_in + f1 dA + f2 dB
/// with B_in thermal(N_in), dA vacuum, dB thermal(N_th). Only the magnitude of
/// the environment amplitudes is observable once they are traced out. The
/// final stage is the parity flip giving the sign of c1.
inline std::vector<Superoperator> channel_stages(const gaussian::ChannelCoefficients& k, double n_in, double n_th,
                                                 int dim, int env_dim, Warnings* warnings = nullptr,
                                                 double leakage_budget = kDefaultLeakageBudget) {
  if (std::abs(k.closure() - 1.0) > kClosureTol)
    throw NumericalError("channel coefficients violate the commutator closure");
  const CascadeAngles ang = cascade_angles(k);

  const ThermalState mech = thermal_state(n_in, env_dim, true, leakage_budget);
  const ThermalState bath = thermal_state(n_th, env_dim, true, leakage_budget);
  const Eigen::VectorXd vacuum = Eigen::VectorXd::Ones(1);
  if (warnings) {
    warnings->append(mech.warnings);
    warnings->append(bath.warnings);
  }
  return {beam_splitter_superoperator(ang.theta_mech, dim, mech.populations),
          beam_splitter_superoperator(ang.theta_optical_noise, dim, vacuum),
          beam_splitter_superoperator(ang.theta_mech_noise, dim, bath.populations), parity_superoperator(dim)};
}

inline Superoperator channel_superoperator(const gaussian::ChannelCoefficients& k, double n_in, double n_th,
                                           int dim, int env_dim, Warnings* warnings = nullptr,
                                           double leakage_budget = kDefaultLeakageBudget) {
  const auto stages = channel_stages(k, n_in, n_th, dim, env_dim, warnings, leakage_budget);
  Superoperator s = stages.front();
  for (std::size_t i = 1; i < stages.size(); ++i) s = s.followed_by(stages[i]);
  return s;
}

/// Average of D(i dp/sqrt2) (.) D^dag over dp ~ Normal(0, variance): a random
/// displacement along the momentum axis, restricted to the kept levels.
///
/// Projected displacement elements are exp(-dp^2/4) times a polynomial of
/// degree <= dim - 1 in dp, so the integrand is Normal(0, variance) *
/// exp(-dp^2/2) * (polynomial of degree <= 4(dim - 1)). The Gaussian factors
/// are merged into Normal(0, v) with v = variance/(1 + variance) and the
/// Gauss-Hermite rule is taken against that weight; with n_nodes >= 2 dim - 1
/// the average is exact for any variance.
inline Superoperator phase_noise_superoperator(double variance, int dim, int n_nodes) {
  optomech::detail::require_finite(variance, "phase-noise variance");
  if (variance < 0.0) throw DomainError("phase-noise variance must be >= 0");
  if (n_nodes < 3 || n_nodes % 2 == 0) throw DomainError("quadrature node count must be odd and >= 3");
  if (variance == 0.0) return Superoperator::identity(dim);

  const NormalQuadrature q = gauss_hermite_normal(n_nodes);
  const double merged = variance / (1.0 + variance);
  const double scale = std::sqrt(merged);
  const double norm = std::sqrt(merged / variance);

  Superoperator s{dim, CMatrix::Zero(dim * dim, dim * dim)};
  for (int w = 0; w < n_nodes; ++w) {
    // Momentum kick dp is the displacement beta = i dp / sqrt2.
    const double dp = scale * q.nodes[w];
    const double weight = norm * std::exp(q.log_weights[w] + 0.5 * dp * dp);
    s.add_kraus(displacement_matrix_projected(Complex(0.0, dp / std::sqrt(2.0)), dim), weight);
  }
  return s;
}

/// rho -> S(rho) on one mode of the joint state.
inline FockDensityMatrix apply(const FockDensityMatrix& rho, Mode mode, const Superoperator& s) {
  const int d = rho.dim(mode);
  if (s.dim != d) throw StructuralError("superoperator does not match mode dimension");
  const int other = mode == Mode::A ? rho.dim_c : rho.dim_a;
  auto joint = [&](int here, int there) { return mode == Mode::A ? rho.index(here, there) : rho.index(there, here); };

  CMatrix stacked(d * d, other * other);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int o = 0; o < other; ++o)
        for (int o2 = 0; o2 < other; ++o2) stacked(k * d + l, o * other + o2) = rho.data(joint(k, o), joint(l, o2));

  const CMatrix mapped = s.matrix * stacked;

  FockDensityMatrix out{rho.dim_a, rho.dim_c, CMatrix(rho.data.rows(), rho.data.cols())};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int o = 0; o < other; ++o)
        for (int o2 = 0; o2 < other; ++o2) out.data(joint(i, o), joint(j, o2)) = mapped(i * d + j, o * other + o2);
  return out;
}

// ---------------------------------------------------------------------------
// State-level operations

inline FockDensityMatrix pure_loss_channel(const FockDensityMatrix& rho, Mode mode, double eta) {
  if (eta == 1.0) return rho;
  return apply(rho, mode, loss_superoperator(eta, rho.dim(mode)));
}

/// Storage/retrieval on mode A. Trace lost to the mode-A cutoff beyond the
/// budget is reported as a warning.
inline FockDensityMatrix linear_channel_apply(const FockDensityMatrix& rho, const gaussian::ChannelCoefficients& k,
                                              double n_in, double n_th, int env_dim = kDefaultLevels,
                                              Warnings* warnings = nullptr,
                                              double leakage_budget = kDefaultLeakageBudget) {
  FockDensityMatrix out = rho;
  for (const auto& stage : channel_stages(k, n_in, n_th, rho.dim_a, env_dim, warnings, leakage_budget))
    out = apply(out, Mode::A, stage);
  const double lost = rho.trace() - out.trace();
  if (warnings && lost > leakage_budget) {
    std::ostringstream os;
    os << "storage/retrieval channel overflows the mode-A cutoff; trace loss " << lost;
    warnings->add(os.str());
  }
  return out;
}

inline FockDensityMatrix phase_noise_average(const FockDensityMatrix& rho, Mode mode, double variance,
                                             int n_nodes = 21) {
  if (variance == 0.0) return rho;
  return apply(rho, mode, phase_noise_superoperator(variance, rho.dim(mode), n_nodes));
}

// ---------------------------------------------------------------------------
// Qubit projection and concurrence

struct TwoQubitState {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();  ///< basis |00>,|01>,|10>,|11> as |A C>
  double projection_probability = 0.0;
};

inline TwoQubitState qubit_project(const FockDensityMatrix& rho) {
  if (rho.dim_a < 2 || rho.dim_c < 2) throw DomainError("qubit projection needs two levels per mode");
  TwoQubitState q;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q.rho(i, j) = rho.data(rho.index(i / 2, i % 2), rho.index(j / 2, j % 2));
  q.projection_probability = q.rho.trace().real();
  if (q.projection_probability < 1e-12) throw NumericalError("qubit projection has vanishing weight");
  q.rho /= q.projection_probability;
  return q;
}

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the square roots of the
/// eigenvalues of rho (Y x Y) rho^* (Y x Y) in decreasing order.
inline double concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1).
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd flipped = yy * rho.conjugate() * yy;
  const Eigen::Vector4cd ev = Eigen::ComplexEigenSolver<Eigen::Matrix4cd>(rho * flipped, false).eigenvalues();

  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i) {
    const double re = ev[i].real();
    if (re < -1e-9) throw NumericalError("concurrence matrix has a negative eigenvalue");
    l[i] = std::sqrt(std::max(re, 0.0));
  }
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double concurrence(const TwoQubitState& q) { return concurrence(q.rho); }

/// Peres-Horodecki test on a two-qubit state: entangled iff the partial
/// transpose has a negative eigenvalue.
inline bool ppt_entangled(const Eigen::Matrix4cd& rho, double tol = 1e-12) {
  Eigen::Matrix4cd pt;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int c2 = 0; c2 < 2; ++c2) pt(2 * a + c, 2 * a2 + c2) = rho(2 * a + c2, 2 * a2 + c);
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(pt, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() < -tol;
}

// ---------------------------------------------------------------------------
// Gaussian moments of a Fock state

/// Mean vector and symmetrized covariance in the (X_A, P_A, X_C, P_C)
/// convention of gaussian_core, normalized by the trace.
inline gaussian::GaussianTwoModeState moments(const FockDensityMatrix& rho) {
  const double tr = rho.trace();
  const CMatrix rho_a = rho.reduced(Mode::A) / tr;
  const CMatrix rho_c = rho.reduced(Mode::C) / tr;
  const std::array<CMatrix, 2> ops_a{x_quadrature(rho.dim_a), p_quadrature(rho.dim_a)};
  const std::array<CMatrix, 2> ops_c{x_quadrature(rho.dim_c), p_quadrature(rho.dim_c)};

  gaussian::GaussianTwoModeState s;
  for (int i = 0; i < 2; ++i) {
    s.mean[i] = (rho_a * ops_a[i]).trace().real();
    s.mean[2 + i] = (rho_c * ops_c[i]).trace().real();
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      s.cov(i, j) = 0.5 * (rho_a * (ops_a[i] * ops_a[j] + ops_a[j] * ops_a[i])).trace().real() - s.mean[i] * s.mean[j];
      s.cov(2 + i, 2 + j) =
          0.5 * (rho_c * (ops_c[i] * ops_c[j] + ops_c[j] * ops_c[i])).trace().real() - s.mean[2 + i] * s.mean[2 + j];
      // Operators on different modes commute: <O_A O_C> = Tr(rho O_A (x) O_C).
      Complex cross{};
      for (int a = 0; a < rho.dim_a; ++a)
        for (int c = 0; c < rho.dim_c; ++c)
          for (int a2 = 0; a2 < rho.dim_a; ++a2) {
            const Complex oa = ops_a[i](a2, a);
            if (oa == Complex{}) continue;
            for (int c2 = 0; c2 < rho.dim_c; ++c2)
              cross += rho.data(rho.index(a, c), rho.index(a2, c2)) * oa * ops_c[j](c2, c);
          }
      s.cov(i, 2 + j) = s.cov(2 + j, i) = cross.real() / tr - s.mean[i] * s.mean[2 + j];
    }
  return s;
}

}  // namespace optomech::fock
