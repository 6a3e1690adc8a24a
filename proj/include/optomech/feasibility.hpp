#pragma once

// Experimental-parameter calculator: effective coupling, damping ratio,
// coupling parameter, thermal occupation and regime checks from hardware
// numbers. All frequencies are angular (rad/s).

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/errors.hpp"

namespace optomech {

inline constexpr double kHbar = 1.05457181765e-34;       // J s
inline constexpr double kBoltzmann = 1.38064900000e-23;  // J / K
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct FeasibilityInput {
  double omega_m = 0.0;              ///< mechanical frequency
  double kappa = 0.0;                ///< cavity decay rate
  std::optional<double> gamma;       ///< mechanical damping; or derived from Q
  std::optional<double> Q;           ///< mechanical quality factor, gamma = omega_m / Q
  std::optional<double> g;           ///< drive-enhanced coupling
  std::optional<double> G;           ///< effective coupling, if g is not given
  std::optional<double> tau;         ///< storage (and retrieval) duration, s
  double T = 0.0;                    ///< bath temperature, K
  double ratio_threshold = 5.0;      ///< factor standing in for ">>"
  double detectable_threshold = 0.2; ///< upper bound on N_th * x
};

struct FeasibilityReport {
  double G = 0.0;
  double g = 0.0;
  double gamma = 0.0;
  double x = 0.0;
  std::optional<double> y_G;       ///< exp(-G tau)
  std::optional<double> y_Gprime;  ///< exp(-(G + gamma) tau)
  double N_th = 0.0;
  double suppression = 0.0;        ///< (kappa / omega_m)^2
  double decoherence_time = 0.0;   ///< 1 / (N_th gamma)
  double decoherence_rate = 0.0;   ///< N_th gamma
  bool resolved_sideband = false;  ///< omega_m >> kappa
  bool adiabatic = false;          ///< kappa >> g
  bool detectable = false;         ///< N_th x below threshold
  std::vector<std::string> notes;
};

/// Mean Bose-Einstein occupation at angular frequency omega and temperature T.
inline double bose_einstein(double omega, double temperature) {
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

inline FeasibilityReport feasibility(const FeasibilityInput& in) {
  auto positive = [](std::optional<double> v, const char* what) {
    if (v && !(*v > 0.0 && std::isfinite(*v))) throw DomainError(std::string(what) + " must be positive");
  };
  positive(in.omega_m, "omega_m");
  positive(in.kappa, "kappa");
  positive(in.T, "T");
  positive(in.gamma, "gamma");
  positive(in.Q, "Q");
  positive(in.g, "g");
  positive(in.G, "G");
  positive(in.tau, "tau");
  positive(in.ratio_threshold, "ratio_threshold");
  positive(in.detectable_threshold, "detectable_threshold");

  FeasibilityReport rep;
  if (in.gamma) rep.gamma = *in.gamma;
  else if (in.Q) rep.gamma = in.omega_m / *in.Q;
  else throw DomainError("either gamma or Q is required");

  if (in.g) {
    rep.g = *in.g;
    rep.G = rep.g * rep.g / in.kappa;
  } else if (in.G) {
    rep.G = *in.G;
    rep.g = std::sqrt(rep.G * in.kappa);
  } else {
    throw DomainError("either g or G is required");
  }

  rep.x = rep.gamma / rep.G;
  if (in.tau) {
    rep.y_G = std::exp(-rep.G * *in.tau);
    rep.y_Gprime = std::exp(-(rep.G + rep.gamma) * *in.tau);
  }
  rep.N_th = bose_einstein(in.omega_m, in.T);
  rep.suppression = (in.kappa / in.omega_m) * (in.kappa / in.omega_m);
  rep.decoherence_rate = rep.N_th * rep.gamma;
  rep.decoherence_time = 1.0 / rep.decoherence_rate;
  rep.resolved_sideband = in.omega_m >= in.ratio_threshold * in.kappa;
  rep.adiabatic = in.kappa >= in.ratio_threshold * rep.g;
  rep.detectable = rep.N_th * rep.x <= in.detectable_threshold;

  if (rep.y_G && std::abs(*rep.y_G - 0.1) > 0.02) {
    std::ostringstream os;
    os.precision(4);
    os << "y = exp(-G tau) evaluates to " << *rep.y_G << ", not the often-quoted 0.1";
    rep.notes.push_back(os.str());
  }
  if (!rep.adiabatic && in.kappa >= in.ratio_threshold * rep.G)
    rep.notes.push_back("kappa >> g fails but kappa >> G holds");
  return rep;
}

/// Integrated nanoscale opto-mechanical crystal at 2 K.
inline FeasibilityInput nanobeam_preset() {
  FeasibilityInput in;
  in.omega_m = kTwoPi * 3.7e9;
  in.kappa = kTwoPi * 500e6;
  in.gamma = kTwoPi * 35e3;
  in.g = kTwoPi * 40e6;
  in.tau = 100e-9;
  in.T = 2.0;
  return in;
}

/// Trampoline resonator in a high-finesse cavity at 1 mK.
inline FeasibilityInput trampoline_preset() {
  FeasibilityInput in;
  in.omega_m = kTwoPi * 10e3;
  in.Q = 1e6;
  in.kappa = kTwoPi * 1.5e3;
  in.G = kTwoPi * 200.0;
  in.T = 1e-3;
  return in;
}

}  // namespace optomech
