#pragma once

// Quick invariant checks for `optomech selftest`. The unit and acceptance
// suites cover the same ground in more depth.

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "optomech/fock.hpp"
#include "optomech/gaussian.hpp"
#include "optomech/protocol.hpp"
#include "optomech/sweep.hpp"

namespace optomech::selftest {

struct Check {
  std::string name;
  std::function<bool()> run;
};

inline std::vector<Check> checks() {
  return {
      {"E_N of an ideal transfer equals 2r",
       [] {
         for (double r : {0.1, 0.5, 1.0}) {
           ProtocolConfig c;
           c.r = r;
           c.y = 1e-8;
           c.x = c.N_in = c.N_th = c.sigma = 0.0;
           c.eta1 = c.eta2 = c.eta_c = 1.0;
           if (std::abs(run_gaussian_protocol(c).log_negativity - 2.0 * r) > 1e-10) return false;
         }
         return true;
       }},
      {"channel coefficients close to one",
       [] {
         std::mt19937_64 g(1);
         std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.01, 0.99);
         for (int i = 0; i < 1000; ++i)
           if (std::abs(gaussian::channel_coefficients(ux(g), uy(g)).closure() - 1.0) > 1e-12) return false;
         return true;
       }},
      {"E_N independent of N_D without phase noise",
       [] {
         ProtocolConfig c;
         c.sigma = 0.0;
         const double ref = run_gaussian_protocol(with_value(c, "N_D", 0.0)).log_negativity;
         return run_gaussian_protocol(with_value(c, "N_D", 1e8)).log_negativity == ref;
       }},
      {"fock moments match the gaussian channel",
       [] {
         const auto k = gaussian::channel_coefficients(0.05, 0.3);
         const auto g = gaussian::storage_retrieval_channel(gaussian::tmsv_state(0.2), k, 0.2, 0.5);
         const auto f = fock::moments(fock::linear_channel_apply(fock::two_mode_squeezed_input(0.2, 16, 16), k, 0.2, 0.5));
         return (f.cov - g.cov).cwiseAbs().maxCoeff() < 1e-4 && (f.mean - g.mean).cwiseAbs().maxCoeff() < 1e-4;
       }},
      {"single-photon pipeline is perfect without imperfections",
       [] {
         ProtocolConfig c;
         c.engine = Engine::fock;
         c.y = 1e-8;
         c.x = c.N_in = c.N_th = c.sigma = 0.0;
         c.eta1 = c.eta2 = c.eta_c = 1.0;
         return std::abs(run_fock_protocol(c).concurrence - 1.0) < 1e-6;
       }},
      {"threshold of N_th x near 0.2",
       [] {
         const double xs = find_threshold(figure_base(), "x", 0.0, 1.0);
         return 10.0 * xs >= 0.1 && 10.0 * xs <= 0.4;
       }},
      {"sweep independent of worker count",
       [] {
         SweepSpec s;
         s.base = figure_base();
         s.axis1 = linear_axis("y", 0.05, 0.95, 19);
         s.series = Axis{"N_in", {0.0, 1.0}};
         return run_sweep(s, 1).csv == run_sweep(s, 4).csv;
       }},
  };
}

/// Prints one line per check; true if all pass.
inline bool run(std::ostream& out) {
  bool ok = true;
  for (const auto& c : checks()) {
    bool pass = false;
    try {
      pass = c.run();
    } catch (const std::exception& e) {
      out << "  error: " << e.what() << "\n";
    }
    out << (pass ? "ok   " : "FAIL ") << c.name << "\n";
    ok = ok && pass;
  }
  return ok;
}

}  // namespace optomech::selftest
