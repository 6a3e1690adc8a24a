#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "optomech/errors.hpp"

namespace optomech {

/// Nodes and weights for E[f(Z)], Z ~ Normal(0, 1). Weights sum to 1;
/// log_weights keeps the far-tail weights usable when they are later
/// multiplied by large factors.
struct NormalQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;
};

namespace detail {

// Orthonormal probabilists' Hermite polynomials p_0..p_n at z, rescaled by
// exp(-shift) to stay finite; returns {p_{n-1}, p_n, sum_{k<n} p_k^2} scaled.
struct HermiteEval {
  double prev = 0.0;
  double last = 0.0;
  double sum_sq = 0.0;
};

inline HermiteEval hermite_eval(int n, double z, double shift) {
  const double scale = std::exp(-shift);
  double p_prev = 0.0, p = scale, sum = p * p;
  for (int k = 0; k < n; ++k) {
    const double next = (z * p - std::sqrt(static_cast<double>(k)) * p_prev) / std::sqrt(k + 1.0);
    p_prev = p;
    p = next;
    if (k + 1 < n) sum += p * p;
  }
  return {p_prev, p, sum};
}

}  // namespace detail

/// Nodes from the eigenvalues of the Jacobi matrix of the Hermite recurrence
/// (Golub-Welsch), polished by Newton steps on p_n. Weights from the
/// Christoffel sum w_i = 1 / sum_k p_k(z_i)^2, which keeps relative accuracy
/// in the tails where eigenvector components do not.
inline NormalQuadrature gauss_hermite_normal(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  NormalQuadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  q.log_weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = solver.eigenvalues()[i];
    // p_k(z) grows roughly like exp(z^2/4); the shift keeps the sums in range.
    const double shift = 0.25 * z * z;
    for (int it = 0; it < 3 && n > 1; ++it) {
      const auto h = detail::hermite_eval(n, z, shift);
      if (h.prev == 0.0) break;
      z -= h.last / (std::sqrt(static_cast<double>(n)) * h.prev);
    }
    q.nodes[i] = z;
  }
  // The rule is symmetric; enforce it exactly.
  for (int i = 0; i < n / 2; ++i) {
    const double z = 0.5 * (q.nodes[n - 1 - i] - q.nodes[i]);
    q.nodes[i] = -z;
    q.nodes[n - 1 - i] = z;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;

  for (int i = 0; i < n; ++i) {
    const double shift = 0.25 * q.nodes[i] * q.nodes[i];
    const auto h = detail::hermite_eval(n, q.nodes[i], shift);
    q.log_weights[i] = -std::log(h.sum_sq) - 2.0 * shift;
  }
  // Normalize in log space.
  const double top = *std::max_element(q.log_weights.begin(), q.log_weights.end());
  double total = 0.0;
  for (double lw : q.log_weights) total += std::exp(lw - top);
  const double log_total = top + std::log(total);
  for (int i = 0; i < n; ++i) {
    q.log_weights[i] -= log_total;
    q.weights[i] = std::exp(q.log_weights[i]);
  }
  return q;
}

}  // namespace optomech
