#pragma once

// The full storage/retrieval entanglement protocol, composed from the
// Gaussian and Fock primitives, plus threshold search.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "optomech/errors.hpp"
#include "optomech/fock.hpp"
#include "optomech/gaussian.hpp"

namespace optomech {

enum class Engine { gaussian, fock };

/// How the phase-noise amplitude |<a>|^2 at the insertion point is chosen.
///  - propagated_mean: the actual mean amplitude after eta1 and the channel,
///    N_D * eta1 * c1^2.
///  - paper_literal: N_D (1 - y^2)^2, ignoring eta1 and the 1/(1+x) factor.
enum class PhaseNoiseConvention { propagated_mean, paper_literal };

/// Amount removed by the final undisplacement of mode A.
///  - propagated_mean: the exact propagated mean, leaving zero residual.
///  - paper_literal: (1 - y^2) alpha.
enum class UndisplacementConvention { propagated_mean, paper_literal };

struct ProtocolConfig {
  double r = 0.5;        ///< two-mode squeezing
  double N_D = 5000.0;   ///< displacement photon number |alpha|^2
  double y = 0.1;        ///< exp(-G' tau)
  double x = 0.01;       ///< gamma / G
  double N_in = 1.0;     ///< initial mechanical occupation
  double N_th = 10.0;    ///< bath occupation
  double sigma = 0.01;   ///< phase-noise standard deviation (rad)
  double eta1 = 0.8;     ///< transmission before the opto-mechanical system
  double eta2 = 0.8;     ///< transmission after it
  double eta_c = 0.8;    ///< transmission on mode C
  Engine engine = Engine::gaussian;
  PhaseNoiseConvention phase_noise_convention = PhaseNoiseConvention::propagated_mean;
  UndisplacementConvention undisplacement = UndisplacementConvention::propagated_mean;
  int fock_dims = fock::kDefaultLevels;
  int quadrature_nodes = 21;
  bool truncation_override = false;

  bool operator==(const ProtocolConfig&) const = default;
};

/// Numeric fields addressable by name from config files, --set and sweeps.
struct NumericField {
  std::string_view name;
  double ProtocolConfig::*member;
};

inline constexpr std::array<NumericField, 10> kNumericFields{{
    {"r", &ProtocolConfig::r},
    {"N_D", &ProtocolConfig::N_D},
    {"y", &ProtocolConfig::y},
    {"x", &ProtocolConfig::x},
    {"N_in", &ProtocolConfig::N_in},
    {"N_th", &ProtocolConfig::N_th},
    {"sigma", &ProtocolConfig::sigma},
    {"eta1", &ProtocolConfig::eta1},
    {"eta2", &ProtocolConfig::eta2},
    {"eta_c", &ProtocolConfig::eta_c},
}};

inline double ProtocolConfig::* numeric_field(std::string_view name) {
  for (const auto& f : kNumericFields)
    if (f.name == name) return f.member;
  throw ConfigError("unknown numeric parameter '" + std::string(name) + "'");
}

inline ProtocolConfig with_value(ProtocolConfig cfg, std::string_view name, double value) {
  cfg.*numeric_field(name) = value;
  return cfg;
}

inline constexpr double kFockThermalLimit = 0.5;

inline void validate(const ProtocolConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
  };
  for (const auto& f : kNumericFields) detail::require_finite(c.*f.member, std::string(f.name).c_str());
  need(c.r >= 0.0, "r must be >= 0");
  need(c.N_D >= 0.0, "N_D must be >= 0");
  need(c.y > 0.0 && c.y <= 1.0, "y must lie in (0,1]");
  need(c.x >= 0.0, "x must be >= 0");
  need(c.N_in >= 0.0 && c.N_th >= 0.0, "thermal occupations must be >= 0");
  need(c.sigma >= 0.0, "sigma must be >= 0");
  for (double eta : {c.eta1, c.eta2, c.eta_c}) need(eta >= 0.0 && eta <= 1.0, "transmissions must lie in [0,1]");
  need(c.fock_dims >= 2, "fock_dims must be >= 2");
  need(c.quadrature_nodes >= 3 && c.quadrature_nodes % 2 == 1, "quadrature_nodes must be odd and >= 3");
  if (c.engine == Engine::fock && c.N_th > kFockThermalLimit && !c.truncation_override)
    throw DomainError("fock engine cannot hold N_th > 0.5 at this cutoff; set truncation_override = true");
}

/// |<a>|^2 of mode A where phase noise acts, per the configured convention.
inline double phase_noise_amplitude_sq(const ProtocolConfig& c, const gaussian::ChannelCoefficients& k) {
  if (c.phase_noise_convention == PhaseNoiseConvention::paper_literal) {
    const double t = 1.0 - c.y * c.y;
    return c.N_D * t * t;
  }
  return c.N_D * c.eta1 * k.c1 * k.c1;
}

// ---------------------------------------------------------------------------
// Gaussian engine

struct GaussianResult {
  double log_negativity = 0.0;
  double nu_min = 0.5;
  gaussian::GaussianTwoModeState output_state;
  double mean_residual = 0.0;  ///< |<a>| of mode A after undisplacement
};

/// displace -> eta1 -> storage/retrieval -> phase noise -> eta2 -> undisplace -> eta_c -> E_N
inline GaussianResult run_gaussian_protocol(const ProtocolConfig& c) {
  validate(c);
  using gaussian::Mode;
  const double alpha = std::sqrt(c.N_D);
  const gaussian::ChannelCoefficients k = gaussian::channel_coefficients(c.x, c.y);

  auto s = gaussian::tmsv_state(c.r);
  s = gaussian::displace(s, Mode::A, alpha);
  s = gaussian::loss_channel(s, Mode::A, c.eta1);
  s = gaussian::storage_retrieval_channel(s, k, c.N_in, c.N_th);
  if (c.sigma > 0.0) {
    const double amp_sq = c.phase_noise_convention == PhaseNoiseConvention::propagated_mean
                              ? s.mean_amplitude_sq(Mode::A)
                              : phase_noise_amplitude_sq(c, k);
    s = gaussian::phase_noise(s, Mode::A, c.sigma, amp_sq);
  }
  s = gaussian::loss_channel(s, Mode::A, c.eta2);
  if (c.undisplacement == UndisplacementConvention::propagated_mean) {
    s.mean.head<2>().setZero();
  } else {
    s = gaussian::displace(s, Mode::A, (1.0 - c.y * c.y) * alpha);
  }
  s = gaussian::loss_channel(s, Mode::C, c.eta_c);

  const auto en = gaussian::log_negativity(s);
  return {en.value, en.nu_min, s, std::sqrt(s.mean_amplitude_sq(Mode::A))};
}

// ---------------------------------------------------------------------------
// Fock engine (displaced single-photon entanglement)

struct FockResult {
  double concurrence = 0.0;
  double projection_probability = 0.0;
  double leakage = 0.0;             ///< trace lost to the mode-A cutoff
  double concurrence_check = 0.0;   ///< same pipeline with quadrature_nodes + 10
  Warnings warnings;
};

namespace detail {

// Everything after the channel, from the phase-noise average to the projection.
inline fock::TwoQubitState finish_pipeline(const ProtocolConfig& c, fock::FockDensityMatrix rho, double variance,
                                           int nodes, double* trace_out = nullptr) {
  rho = fock::phase_noise_average(rho, fock::Mode::A, variance, nodes);
  rho = fock::pure_loss_channel(rho, fock::Mode::A, c.eta2);
  rho = fock::pure_loss_channel(rho, fock::Mode::C, c.eta_c);
  if (trace_out) *trace_out = rho.trace();
  return fock::qubit_project(rho);
}

}  // namespace detail

/// Displaced-frame single-photon input -> eta1 -> channel -> momentum-noise
/// average -> eta2 -> eta_c -> qubit projection -> concurrence. The
/// macroscopic displacement cancels against the undisplacement and only
/// enters through the phase-noise variance.
inline FockResult run_fock_protocol(const ProtocolConfig& c) {
  validate(c);
  const gaussian::ChannelCoefficients k = gaussian::channel_coefficients(c.x, c.y);
  const auto input = fock::single_photon_entangled_input(0.0, c.fock_dims, 2);

  FockResult res;
  auto rho = fock::pure_loss_channel(input, fock::Mode::A, c.eta1);
  rho = fock::linear_channel_apply(rho, k, c.N_in, c.N_th, c.fock_dims, &res.warnings);
  const double variance = 2.0 * phase_noise_amplitude_sq(c, k) * c.sigma * c.sigma;

  double trace = 1.0;
  const auto q = detail::finish_pipeline(c, rho, variance, c.quadrature_nodes, &trace);
  res.concurrence = fock::concurrence(q);
  res.projection_probability = q.projection_probability;
  res.leakage = 1.0 - trace;

  if (variance > 0.0) {
    res.concurrence_check = fock::concurrence(detail::finish_pipeline(c, rho, variance, c.quadrature_nodes + 10));
    if (std::abs(res.concurrence_check - res.concurrence) > 1e-6) {
      std::ostringstream os;
      os.precision(12);
      os << "phase-noise quadrature not converged: concurrence " << res.concurrence << " (" << c.quadrature_nodes
         << " nodes) vs " << res.concurrence_check << " (" << c.quadrature_nodes + 10 << " nodes)";
      res.warnings.add(os.str());
    }
  } else {
    res.concurrence_check = res.concurrence;
  }
  if (res.leakage > fock::kDefaultLeakageBudget) {
    std::ostringstream os;
    os << "mode-A cutoff leakage " << res.leakage;
    res.warnings.add(os.str());
  }
  return res;
}

/// E_N for the gaussian engine, concurrence for the fock engine.
inline double entanglement_metric(const ProtocolConfig& c, Warnings* warnings = nullptr) {
  if (c.engine == Engine::gaussian) return run_gaussian_protocol(c).log_negativity;
  auto res = run_fock_protocol(c);
  if (warnings) warnings->append(res.warnings);
  return res.concurrence;
}

// ---------------------------------------------------------------------------
// Threshold search

/// Entanglement counts as exactly zero below this (nu_min >= 1/2 for E_N).
inline constexpr double kZeroMetric = 1e-12;
inline constexpr double kThresholdTol = 1e-5;

/// Bisects `parameter` over [lo, hi] for the boundary between entangled and
/// separable outputs; returns the endpoint of the final bracket (width below
/// 1e-5) on the separable side.
inline double find_threshold(const ProtocolConfig& base, std::string_view parameter, double lo, double hi,
                             double tol = kThresholdTol) {
  if (!(lo < hi)) throw BracketError("threshold bracket must satisfy lo < hi");
  auto entangled = [&](double v) { return entanglement_metric(with_value(base, parameter, v)) > kZeroMetric; };
  const bool lo_entangled = entangled(lo);
  if (lo_entangled == entangled(hi)) {
    std::ostringstream os;
    os << "no entanglement boundary for " << parameter << " in [" << lo << ", " << hi << "]";
    throw BracketError(os.str());
  }
  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (entangled(mid) == lo_entangled ? lo : hi) = mid;
  }
  return lo_entangled ? hi : lo;
}

}  // namespace optomech
