#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "optomech/fock.hpp"
#include "optomech/gauss_hermite.hpp"
#include "optomech/gaussian.hpp"
#include "optomech/protocol.hpp"
#include "oracles.hpp"

using namespace optomech;
using namespace optomech::fock;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

FockDensityMatrix number_state(int n, int dim_a, int c = 0, int dim_c = 2) {
  CVector psi = CVector::Zero(dim_a * dim_c);
  psi[n * dim_c + c] = 1.0;
  return FockDensityMatrix::from_pure(psi, dim_a, dim_c);
}

double mean_photons_a(const FockDensityMatrix& rho) {
  const CMatrix r = rho.reduced(Mode::A);
  double n = 0.0;
  for (int i = 0; i < r.rows(); ++i) n += i * r(i, i).real();
  return n;
}

double max_moment_error(const gaussian::GaussianTwoModeState& a, const gaussian::GaussianTwoModeState& b) {
  return std::max((a.mean - b.mean).cwiseAbs().maxCoeff(), (a.cov - b.cov).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("annihilation_matrix", "[fock][ladder]") {
  const CMatrix a2 = annihilation_matrix(2);
  CHECK(a2(0, 1) == Complex(1.0));
  CHECK(a2(0, 0) == Complex(0.0));
  CHECK(a2(1, 0) == Complex(0.0));
  CHECK(a2(1, 1) == Complex(0.0));

  const CMatrix a = annihilation_matrix(16);
  const CMatrix num = a.adjoint() * a;
  for (int n = 0; n < 16; ++n) CHECK_THAT(num(n, n).real(), WithinAbs(n, 1e-13));

  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  CHECK((comm.topLeftCorner(15, 15) - CMatrix::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THAT(comm(15, 15).real(), WithinAbs(-15.0, 1e-13));

  CHECK_THROWS_AS(annihilation_matrix(1), DomainError);
}

TEST_CASE("displacement_matrix", "[fock][displacement]") {
  CHECK((displacement_matrix(0.0, 16) - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-14);

  for (Complex alpha : {Complex(1.0, 0.0), Complex(0.6, -0.9), Complex(0.0, std::sqrt(2.0))}) {
    const CMatrix d = displacement_matrix(alpha, 16);
    const CVector coh = d.col(0);
    double n = 0.0;
    for (int k = 0; k < 16; ++k) n += k * std::norm(coh[k]);
    CHECK_THAT(n, WithinAbs(std::norm(alpha), 1e-4));
    CHECK((coh - oracle::coherent(alpha, 16)).cwiseAbs().maxCoeff() < 1e-4);
    CHECK((d * displacement_matrix(-alpha, 16) - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("displacement_matrix_projected matches exact elements", "[fock][displacement]") {
  for (Complex alpha : {Complex(0.4, 0.3), Complex(0.0, 2.5), Complex(-3.0, 1.0)}) {
    const CMatrix d = displacement_matrix_projected(alpha, 24);
    CHECK((d.col(0) - oracle::coherent(alpha, 24)).cwiseAbs().maxCoeff() < 1e-12);
    // D(alpha)|1> = (a^dag - alpha^*) D(alpha)|0>.
    const CVector one = annihilation_matrix(24).adjoint() * d.col(0) - std::conj(alpha) * d.col(0);
    CHECK((d.col(1).head(23) - one.head(23)).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Small amplitudes: both constructions agree on the well-populated block.
  const CMatrix d1 = displacement_matrix({0.3, 0.2}, 16);
  const CMatrix d2 = displacement_matrix_projected({0.3, 0.2}, 16);
  CHECK((d1 - d2).topLeftCorner(8, 8).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("beam_splitter_unitary", "[fock][beamsplitter]") {
  const int da = 6, db = 5;
  CHECK((beam_splitter_unitary(0.0, 0.3, da, db) - CMatrix::Identity(da * db, da * db)).cwiseAbs().maxCoeff() <
        1e-14);

  // theta = pi/2 swaps the modes up to phase: |n, m> -> phase |m, n>.
  const CMatrix swap = beam_splitter_unitary(kPi / 2, 0.0, 4, 4);
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) CHECK_THAT(std::abs(swap(m * 4 + n, n * 4 + m)), WithinAbs(1.0, 1e-12));

  const double phi = 0.7;
  const CMatrix bs = beam_splitter_unitary(kPi / 4, phi, 3, 3);
  const CVector out = bs.col(1 * 3 + 0);
  CHECK(std::abs(out[1 * 3 + 0] - Complex(1.0 / std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(out[0 * 3 + 1] - std::polar(1.0 / std::sqrt(2.0), phi)) < 1e-12);
  CHECK_THAT(out.norm(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("beam splitter conserves total photon number", "[fock][beamsplitter][property]") {
  const int da = 8, db = 7;
  CMatrix total = CMatrix::Zero(da * db, da * db);
  for (int n = 0; n < da; ++n)
    for (int m = 0; m < db; ++m) total(n * db + m, n * db + m) = n + m;
  for (double theta : {0.1, 0.9, 2.3}) {
    const CMatrix u = beam_splitter_unitary(theta, 0.4, da, db);
    CHECK((u * total - total * u).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Sectors that fit inside the cutoffs are exactly unitary.
  const CMatrix u = beam_splitter_unitary(0.8, 0.0, 6, 6);
  const CMatrix gram = u.adjoint() * u;
  for (int n = 0; n < 6; ++n)
    for (int m = 0; n + m < 6 && m < 6; ++m) CHECK_THAT(gram(n * 6 + m, n * 6 + m).real(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("thermal_state", "[fock][thermal]") {
  const auto vac = thermal_state(0.0, 16);
  CHECK(vac.populations[0] == 1.0);
  CHECK(vac.populations.tail(15).isZero());
  CHECK(vac.leakage == 0.0);

  const auto one = thermal_state(1.0, 16);
  CHECK_THAT(one.mean_occupation(), WithinAbs(0.99975585564965286, 1e-13));
  CHECK_THAT(one.mean_occupation(), WithinAbs(1.0, 3e-4));
  CHECK_THAT(one.leakage, WithinAbs(1.52587890625e-5, 1e-18));
  CHECK_THAT(one.populations.sum(), WithinAbs(1.0, 1e-15));

  const auto hot = thermal_state(10.0, 16);
  CHECK(hot.leakage > 0.2);
  CHECK_THAT(hot.leakage, WithinAbs(0.21762913579014877, 1e-14));
  CHECK_FALSE(hot.warnings.empty());

  const auto raw = thermal_state(1.0, 16, false);
  CHECK_THAT(raw.populations.sum(), WithinAbs(1.0 - 1.52587890625e-5, 1e-15));
  CHECK_THROWS_AS(thermal_state(-1.0, 16), DomainError);
}

TEST_CASE("single_photon_entangled_input", "[fock][input]") {
  const auto rho = single_photon_entangled_input(0.0, 16);
  CHECK_THAT(rho.trace(), WithinAbs(1.0, 1e-12));
  CHECK_THAT(rho.purity(), WithinAbs(1.0, 1e-10));
  CHECK(rho.hermiticity_error() < 1e-14);
  const CMatrix rc = rho.reduced(Mode::C);
  CHECK((rc - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THAT(concurrence(qubit_project(rho)), WithinAbs(1.0, 1e-12));

  const auto shifted = single_photon_entangled_input({0.5, 0.0}, 16);
  CHECK_THAT(shifted.purity(), WithinAbs(1.0, 1e-10));
  CHECK_THAT(shifted.trace(), WithinAbs(1.0, 1e-8));
}

TEST_CASE("pure_loss_channel", "[fock][loss]") {
  const auto one = number_state(1, 8);
  CHECK((pure_loss_channel(one, Mode::A, 1.0).data - one.data).cwiseAbs().maxCoeff() == 0.0);

  const auto lossy = pure_loss_channel(one, Mode::A, 0.8);
  CHECK_THAT(lossy.data(lossy.index(1, 0), lossy.index(1, 0)).real(), WithinAbs(0.8, 1e-14));
  CHECK_THAT(lossy.data(lossy.index(0, 0), lossy.index(0, 0)).real(), WithinAbs(0.2, 1e-14));
  CHECK_THAT(lossy.trace(), WithinAbs(1.0, 1e-10));

  auto rho = two_mode_squeezed_input(0.4, 10, 10);
  rho.data /= rho.trace();
  const auto ac = pure_loss_channel(pure_loss_channel(rho, Mode::A, 0.7), Mode::C, 0.3);
  const auto ca = pure_loss_channel(pure_loss_channel(rho, Mode::C, 0.3), Mode::A, 0.7);
  CHECK((ac.data - ca.data).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THAT(ac.trace(), WithinAbs(1.0, 1e-10));
}

TEST_CASE("linear_channel_apply examples", "[fock][channel]") {
  auto rho = single_photon_entangled_input(0.0, 16);
  const auto k_off = gaussian::channel_coefficients(0.3, 1.0);
  const auto off = linear_channel_apply(rho, k_off, 0.0, 0.0);
  const CMatrix ra = off.reduced(Mode::A);
  CHECK_THAT(ra(0, 0).real(), WithinAbs(1.0, 1e-12));
  CHECK_THAT(ra.trace().real(), WithinAbs(1.0, 1e-12));

  const auto k = gaussian::channel_coefficients(0.0, 0.1);
  const auto out = linear_channel_apply(number_state(1, 16), k, 0.0, 0.0);
  CHECK_THAT(mean_photons_a(out), WithinAbs(0.9801, 1e-12));

  gaussian::ChannelCoefficients broken = k;
  broken.f1 = 0.5;
  CHECK_THROWS_AS(linear_channel_apply(rho, broken, 0.0, 0.0), NumericalError);

  Warnings w;
  linear_channel_apply(rho, gaussian::channel_coefficients(0.01, 0.1), 1.0, 10.0, 16, &w);
  CHECK_FALSE(w.empty());
}

TEST_CASE("cross-engine moment oracle", "[fock][oracle][property]") {
  auto check = [](double r, double x, double y, double n_in, double n_th, double alpha) {
    const auto k = gaussian::channel_coefficients(x, y);
    auto g = gaussian::displace(gaussian::tmsv_state(r), gaussian::Mode::A, alpha);
    g = gaussian::storage_retrieval_channel(g, k, n_in, n_th);

    auto rho = two_mode_squeezed_input(r, 16, 16);
    if (alpha != 0.0) {
      const CMatrix d = Eigen::kroneckerProduct(displacement_matrix_projected(alpha, 16), CMatrix::Identity(16, 16));
      rho.data = d * rho.data * d.adjoint();
    }
    const double before = rho.trace();
    const auto out = linear_channel_apply(rho, k, n_in, n_th);
    INFO("r=" << r << " x=" << x << " y=" << y << " N_in=" << n_in << " N_th=" << n_th << " alpha=" << alpha);
    CHECK(max_moment_error(moments(out), g) < 1e-4);
    CHECK(before - out.trace() < 1e-3);
  };

  check(0.2, 0.05, 0.3, 0.2, 0.5, 0.0);
  check(0.3, 0.1, 0.9, 0.5, 0.5, 0.0);
  check(0.1, 0.0, 0.1, 0.0, 0.0, 0.0);
  check(0.2, 0.03, 0.5, 0.1, 0.3, 0.4);
  auto g = oracle::rng(99);
  for (int i = 0; i < 10; ++i)
    check(oracle::uniform(g, 0.0, 0.3), oracle::uniform(g, 0.0, 0.1), oracle::uniform(g, 0.1, 0.9),
          oracle::uniform(g, 0.0, 0.5), oracle::uniform(g, 0.0, 0.5), 0.0);
}

TEST_CASE("phase_noise_average", "[fock][phase]") {
  const auto rho = single_photon_entangled_input(0.0, 16);
  CHECK((phase_noise_average(rho, Mode::A, 0.0).data - rho.data).cwiseAbs().maxCoeff() == 0.0);

  // Coherent state: the P variance grows by exactly the kick variance.
  const int dim = 30;
  const CVector coh = oracle::coherent({0.7, 0.2}, dim);
  CVector psi = CVector::Zero(dim * 2);
  for (int n = 0; n < dim; ++n) psi[n * 2] = coh[n];
  const auto state = FockDensityMatrix::from_pure(psi, dim, 2);
  for (double var : {0.05, 0.3, 1.0}) {
    const auto avg = phase_noise_average(state, Mode::A, var, 61);
    const auto m0 = moments(state), m1 = moments(avg);
    CHECK_THAT(m1.cov(1, 1) - m0.cov(1, 1), WithinAbs(var, 1e-6));
    CHECK_THAT(m1.cov(0, 0) - m0.cov(0, 0), WithinAbs(0.0, 1e-6));
    CHECK_THAT(avg.trace(), WithinAbs(1.0, 1e-8));
  }

  // Large variance on |1><1|: the state dephases along P. The only trace lost
  // is the displaced population above the cutoff, integrated independently:
  // E[sum_{m>=40} |<m|D(i dp/sqrt2)|1>|^2], dp ~ Normal(0, 2).
  const auto one = number_state(1, 40);
  const auto mixed = phase_noise_average(one, Mode::A, 2.0, 81);
  CHECK_THAT(1.0 - mixed.trace(), WithinAbs(1.10004576141297e-7, 1e-11));
  CHECK(mixed.purity() < 0.5);
  CHECK(mixed.hermiticity_error() < 1e-12);

  CHECK_THROWS_AS(phase_noise_average(rho, Mode::A, 0.1, 4), DomainError);
  CHECK_THROWS_AS(phase_noise_average(rho, Mode::A, -0.1, 21), DomainError);
}

TEST_CASE("phase-noise quadrature is exact past 2 dim - 1 nodes", "[fock][phase][quadrature]") {
  const auto rho = single_photon_entangled_input(0.0, 16);
  for (double var : {0.5, 40.0, 4000.0}) {
    const auto a = phase_noise_average(rho, Mode::A, var, 31);
    const auto b = phase_noise_average(rho, Mode::A, var, 41);
    CHECK((a.data - b.data).cwiseAbs().maxCoeff() < 1e-10);
  }
  const auto q = gauss_hermite_normal(21);
  double w = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    w += q.weights[i];
    m2 += q.weights[i] * q.nodes[i] * q.nodes[i];
    m4 += q.weights[i] * std::pow(q.nodes[i], 4);
  }
  CHECK_THAT(w, WithinAbs(1.0, 1e-13));
  CHECK_THAT(m2, WithinAbs(1.0, 1e-12));
  CHECK_THAT(m4, WithinAbs(3.0, 1e-11));
}

TEST_CASE("qubit_project", "[fock][projection]") {
  const auto bell = single_photon_entangled_input(0.0, 4, 2);
  const auto q = qubit_project(bell);
  CHECK_THAT(q.projection_probability, WithinAbs(1.0, 1e-12));
  CHECK_THAT(q.rho(1, 1).real(), WithinAbs(0.5, 1e-12));
  CHECK_THAT(q.rho(2, 2).real(), WithinAbs(0.5, 1e-12));
  CHECK_THAT(std::abs(q.rho(1, 2)), WithinAbs(0.5, 1e-12));

  const auto th = thermal_state(1.0, 16, false);
  FockDensityMatrix prod{16, 2, CMatrix::Zero(32, 32)};
  for (int n = 0; n < 16; ++n) prod.data(prod.index(n, 0), prod.index(n, 0)) = th.populations[n];
  const auto qt = qubit_project(prod);
  CHECK_THAT(qt.projection_probability, WithinAbs(0.75, 1e-15));
  CHECK_THAT(qt.rho.trace().real(), WithinAbs(1.0, 1e-12));

  FockDensityMatrix empty = number_state(3, 8);
  CHECK_THROWS_AS(qubit_project(empty), NumericalError);
}

TEST_CASE("concurrence", "[fock][concurrence]") {
  Eigen::Vector4cd phi(1.0, 0.0, 0.0, 1.0);
  phi /= std::sqrt(2.0);
  CHECK_THAT(concurrence(Eigen::Matrix4cd(phi * phi.adjoint())), WithinAbs(1.0, 1e-12));

  Eigen::Vector4cd prod(0.6, 0.8, 0.0, 0.0);
  CHECK_THAT(concurrence(Eigen::Matrix4cd(prod * prod.adjoint())), WithinAbs(0.0, 1e-12));

  CHECK_THAT(concurrence(oracle::werner(0.5)), WithinAbs(0.25, 1e-12));
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.6, 0.9, 1.0})
    CHECK_THAT(concurrence(oracle::werner(p)), WithinAbs(std::max(0.0, (3.0 * p - 1.0) / 2.0), 1e-10));

  CHECK(ppt_entangled(oracle::werner(0.5)));
  CHECK_FALSE(ppt_entangled(oracle::werner(0.3)));
}

TEST_CASE("fock protocol properties", "[fock][protocol][property]") {
  ProtocolConfig c;
  c.engine = Engine::fock;
  c.eta_c = 1.0;
  c.N_th = 0.5;
  c.sigma = 0.0;
  c.N_D = 0.0;
  const double ref = run_fock_protocol(c).concurrence;
  CHECK(ref > 0.0);
  c.N_D = 5000.0;
  CHECK_THAT(run_fock_protocol(c).concurrence, WithinAbs(ref, 1e-12));

  double prev = ref;
  for (double s : {0.002, 0.005, 0.01, 0.02}) {
    c.sigma = s;
    const auto res = run_fock_protocol(c);
    CHECK(res.concurrence <= prev + 1e-12);
    CHECK_THAT(res.concurrence, WithinAbs(res.concurrence_check, 1e-6));
    prev = res.concurrence;
  }

  c.N_th = 2.0;
  CHECK_THROWS_AS(run_fock_protocol(c), DomainError);
  c.truncation_override = true;
  CHECK_NOTHROW(run_fock_protocol(c));
}

TEST_CASE("gaussian and fock agree on entanglement", "[fock][oracle][property]") {
  auto g = oracle::rng(4242);
  int agree = 0;
  for (int i = 0; i < 20; ++i) {
    const double r = oracle::uniform(g, 0.05, 0.3), x = oracle::uniform(g, 0.0, 0.1), y = oracle::uniform(g, 0.1, 0.9);
    const double n_in = oracle::uniform(g, 0.0, 0.5), n_th = oracle::uniform(g, 0.0, 0.5);
    const auto k = gaussian::channel_coefficients(x, y);
    const auto gs = gaussian::storage_retrieval_channel(gaussian::tmsv_state(r), k, n_in, n_th);
    const auto fs = linear_channel_apply(two_mode_squeezed_input(r, 16, 16), k, n_in, n_th);
    const bool g_ent = gaussian::log_negativity(gs).value > 0.0;
    const bool f_ent = ppt_entangled(qubit_project(fs).rho);
    INFO("r=" << r << " x=" << x << " y=" << y << " N_in=" << n_in << " N_th=" << n_th);
    CHECK(g_ent == f_ent);
    agree += g_ent == f_ent;
  }
  CHECK(agree == 20);
}
