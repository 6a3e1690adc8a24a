#pragma once

// Two-mode Gaussian states (optical modes A and C) described by first and
// second moments, with the maps needed by the storage/retrieval protocol.
//
// Quadratures are X = (a + a^dag)/sqrt2, P = -i(a - a^dag)/sqrt2, so the
// vacuum has variance 1/2. Ordering everywhere is (X_A, P_A, X_C, P_C).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "optomech/errors.hpp"

namespace optomech::gaussian {

enum class Mode { A = 0, C = 1 };

struct GaussianTwoModeState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = 0.5 * Eigen::Matrix4d::Identity();

  static GaussianTwoModeState vacuum() { return {}; }

  Eigen::Matrix2d block(Mode row, Mode col) const {
    return cov.block<2, 2>(2 * static_cast<int>(row), 2 * static_cast<int>(col));
  }
  /// Squared magnitude |<a>|^2 of the mean field of one mode.
  double mean_amplitude_sq(Mode m) const {
    const int i = 2 * static_cast<int>(m);
    return 0.5 * (mean[i] * mean[i] + mean[i + 1] * mean[i + 1]);
  }
};

/// Amplitudes of the retrieved field
///   A_out = -c1 A_in - i c2 B_in + f1 dA + f2 dB
/// for damping ratio x = gamma/G and coupling parameter y = exp(-G' tau).
struct ChannelCoefficients {
  double x = 0.0;
  double y = 1.0;
  double c1 = 0.0;
  double c2_mag = 0.0;
  double f1 = 1.0;
  double f2 = 0.0;

  double closure() const { return c1 * c1 + c2_mag * c2_mag + f1 * f1 + f2 * f2; }
};

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPhysicalTol = 1e-9;
inline constexpr double kClampTol = 1e-12;

namespace detail {

inline int offset(Mode m) { return 2 * static_cast<int>(m); }

inline void require_unit_interval(double eta, const char* what) {
  optomech::detail::require_finite(eta, what);
  if (eta < 0.0 || eta > 1.0) throw DomainError(std::string(what) + " must lie in [0,1]");
}

}  // namespace detail

/// Two-mode squeezed vacuum with squeezing strength r.
inline GaussianTwoModeState tmsv_state(double r) {
  optomech::detail::require_finite(r, "squeezing r");
  if (r < 0.0) throw DomainError("squeezing r must be >= 0");
  const double sh = std::sinh(r);
  const double ch = std::cosh(r);
  GaussianTwoModeState s;
  s.cov = (sh * sh + 0.5) * Eigen::Matrix4d::Identity();
  s.cov(0, 2) = s.cov(2, 0) = sh * ch;
  s.cov(1, 3) = s.cov(3, 1) = -sh * ch;
  return s;
}

/// D(alpha) on one mode: shifts that mode's mean by sqrt2 (Re alpha, Im alpha).
inline GaussianTwoModeState displace(GaussianTwoModeState s, Mode mode, std::complex<double> alpha) {
  optomech::detail::require_finite(alpha.real(), "displacement");
  optomech::detail::require_finite(alpha.imag(), "displacement");
  const int i = detail::offset(mode);
  s.mean[i] += std::sqrt(2.0) * alpha.real();
  s.mean[i + 1] += std::sqrt(2.0) * alpha.imag();
  return s;
}

/// Photon-number variance (2n+1)|alpha|^2 of the displaced Fock state D(alpha)|n>.
inline double component_variance(int n, double displacement_photons) {
  if (n < 0) throw DomainError("photon number must be >= 0");
  if (displacement_photons < 0.0) throw DomainError("N_D must be >= 0");
  return (2.0 * n + 1.0) * displacement_photons;
}

/// Beam splitter of transmission eta with a vacuum port on one mode.
inline GaussianTwoModeState loss_channel(GaussianTwoModeState s, Mode mode, double eta) {
  detail::require_unit_interval(eta, "transmission eta");
  const int i = detail::offset(mode);
  const double t = std::sqrt(eta);
  Eigen::Vector4d scale = Eigen::Vector4d::Ones();
  scale[i] = scale[i + 1] = t;
  s.mean = s.mean.cwiseProduct(scale);
  s.cov = scale.asDiagonal() * s.cov * scale.asDiagonal();
  s.cov(i, i) += 0.5 * (1.0 - eta);
  s.cov(i + 1, i + 1) += 0.5 * (1.0 - eta);
  return s;
}

/// Storage/retrieval amplitudes. The time variable is eliminated through
/// G' tau = -ln y, so sqrt(2 cosh(2 G' tau) - 2) = (1 - y^2)/y.
inline ChannelCoefficients channel_coefficients(double x, double y) {
  optomech::detail::require_finite(x, "x");
  optomech::detail::require_finite(y, "y");
  if (x < 0.0) throw DomainError("x = gamma/G must be >= 0");
  if (y <= 0.0 || y > 1.0) throw DomainError("y must lie in (0,1]");

  ChannelCoefficients k;
  k.x = x;
  k.y = y;
  if (y == 1.0) return k;  // no coupling: the output is pure optical noise

  const double one_minus_y2 = (1.0 - y) * (1.0 + y);
  const double inv = 1.0 / (1.0 + x);
  // 4 x y^2 ln y / (1 - y^2) <= 0
  const double log_term = 4.0 * x * y * y * std::log(y) / one_minus_y2;

  k.c1 = one_minus_y2 * inv;
  k.c2_mag = y * std::sqrt(one_minus_y2 * inv);
  const double f1_sq = x * x + y * y - log_term;
  const double f2_sq = x * (1.0 + y * y) + x * one_minus_y2 * one_minus_y2 + log_term;
  k.f1 = inv * std::sqrt(optomech::detail::clamp_tiny_negative(f1_sq, kClampTol, "f1 radicand"));
  k.f2 = inv * std::sqrt(optomech::detail::clamp_tiny_negative(f2_sq, kClampTol, "f2 radicand"));
  return k;
}

/// Retrieved field after storing mode A on the mechanical oscillator.
/// Mechanical input B_in is thermal(N_in), dA vacuum, dB thermal(N_th).
///   X_out = -c1 X_A + c2 P_B + f1 dX_A + f2 dX_B
///   P_out = -c1 P_A - c2 X_B + f1 dP_A + f2 dP_B
/// The noise modes are phase-symmetric, so they contribute isotropically.
inline GaussianTwoModeState storage_retrieval_channel(GaussianTwoModeState s, const ChannelCoefficients& k,
                                                      double n_in, double n_th) {
  optomech::detail::require_finite(n_in, "N_in");
  optomech::detail::require_finite(n_th, "N_th");
  if (n_in < 0.0 || n_th < 0.0) throw DomainError("thermal occupations must be >= 0");

  const double gain = -k.c1;
  s.mean.head<2>() *= gain;
  s.cov.block<2, 2>(0, 0) *= k.c1 * k.c1;
  s.cov.block<2, 2>(0, 2) *= gain;
  s.cov.block<2, 2>(2, 0) *= gain;
  const double noise = k.c2_mag * k.c2_mag * (n_in + 0.5) + k.f1 * k.f1 * 0.5 + k.f2 * k.f2 * (n_th + 0.5);
  s.cov(0, 0) += noise;
  s.cov(1, 1) += noise;
  return s;
}

/// Leading-order effect of a small random phase (std sigma) on a bright mode
/// with |<a>|^2 = amp_sq: extra P-quadrature variance 2 amp_sq sigma^2.
inline GaussianTwoModeState phase_noise(GaussianTwoModeState s, Mode mode, double sigma, double amp_sq) {
  optomech::detail::require_finite(sigma, "sigma");
  optomech::detail::require_finite(amp_sq, "amp_sq");
  if (sigma < 0.0 || amp_sq < 0.0) throw DomainError("sigma and amp_sq must be >= 0");
  const int p = detail::offset(mode) + 1;
  s.cov(p, p) += 2.0 * amp_sq * sigma * sigma;
  return s;
}

struct LogNegativity {
  double value = 0.0;
  double nu_min = 0.5;
};

/// Logarithmic negativity from the smallest symplectic eigenvalue of the
/// partially transposed covariance matrix.
inline LogNegativity log_negativity(const GaussianTwoModeState& s) {
  const Eigen::Matrix2d a = s.block(Mode::A, Mode::A);
  const Eigen::Matrix2d b = s.block(Mode::C, Mode::C);
  const Eigen::Matrix2d c = s.block(Mode::A, Mode::C);
  const double sigma = a.determinant() + b.determinant() - 2.0 * c.determinant();
  const double det_v = s.cov.determinant();
  const double disc = sigma * sigma - 4.0 * det_v;
  if (disc < -kPhysicalTol) throw NumericalError("partial-transpose discriminant is negative");
  const double root = std::sqrt(std::max(disc, 0.0));
  // (sigma - root)/2 rewritten to avoid cancellation for strongly squeezed states.
  const double denom = sigma + root;
  const double nu_sq = denom > 0.0 ? 2.0 * det_v / denom : 0.0;
  LogNegativity out;
  out.nu_min = std::sqrt(optomech::detail::clamp_tiny_negative(nu_sq, kClampTol, "nu_min^2"));
  out.value = 2.0 * out.nu_min >= 1.0 ? 0.0 : -std::log(2.0 * out.nu_min);
  return out;
}

struct PhysicalityReport {
  bool physical = false;
  double nu_minus = 0.0;
  double nu_plus = 0.0;
};

/// Symplectic eigenvalues of cov itself and the uncertainty-relation verdict.
inline PhysicalityReport physicality_check(const GaussianTwoModeState& s) {
  if ((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
    throw StructuralError("covariance matrix is not symmetric");

  // Eigenvalues of Omega*cov come in pairs +-i nu.
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  const Eigen::Vector4cd ev = (omega * s.cov).eigenvalues();
  std::array<double, 4> mags{};
  for (int i = 0; i < 4; ++i) mags[i] = std::abs(ev[i]);
  std::sort(mags.begin(), mags.end());

  PhysicalityReport rep;
  rep.nu_minus = 0.5 * (mags[0] + mags[1]);
  rep.nu_plus = 0.5 * (mags[2] + mags[3]);
  const bool positive = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(s.cov, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .minCoeff() > 0.0;
  rep.physical = positive && rep.nu_minus >= 0.5 - kPhysicalTol;
  return rep;
}

}  // namespace optomech::gaussian
