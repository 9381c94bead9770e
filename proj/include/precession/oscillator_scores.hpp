// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "precession/averaging.hpp"
#include "precession/errors.hpp"
#include "precession/sign_elements.hpp"
#include "precession/spin_scores.hpp"

namespace precession {

/**
 * Truncation of the oscillator problem at Fock level n_max (a multiple of K,
 * so whole blocks are kept). Convergence is judged by re-solving at twice the
 * truncation and requiring squared overlap above `convergence_threshold`
 * between the two optimal states.
 *
 * The maximum is searched in the residue-0 block, where it lives; setting
 * `scan_all_residues` checks the other blocks too (slower, used as a
 * verification mode).
 */
struct TruncationPolicy {
  int n_max = 0;
  double convergence_threshold = 0.99;
  bool check_convergence = true;
  bool scan_all_residues = false;
};

/// Magnitude of the most negative possible Wigner weight over a pointed
/// phase-space sector (published constant, not recomputed here).
inline constexpr double sector_negativity_bound = 0.1559;

/// Closed-form lower bound (1 + sqrt((1 + F_K)/K))/2 on the oscillator score,
/// with F_K = (2/pi) sum_{k=1}^{(K-1)/2} (-1)^k arccos(2 sin(pi k / K) - 1).
inline double lower_bound(int K) {
  if (K < 1 || K % 2 == 0) throw domain_error("lower_bound: K must be odd and >= 1");
  double f = 0.0;
  for (int k = 1; k <= (K - 1) / 2; ++k) {
    const double term = std::acos(2.0 * std::sin(M_PI * k / K) - 1.0);
    f += (k % 2 != 0 ? -term : term);
  }
  f *= 2.0 / M_PI;
  return 0.5 * (1.0 + std::sqrt((1.0 + f) / K));
}

/// Upper bound: the classical maximum plus the sector negativity constant.
inline double upper_bound(int K) {
  if (K < 3 || K % 2 == 0) throw domain_error("upper_bound: K must be odd and >= 3");
  return classical_bound(K) + sector_negativity_bound;
}

namespace detail {

struct TruncatedSolution {
  double sigma = 0.0;        // sqrt of the top eigenvalue of the squared average
  Eigen::VectorXd state;     // coefficients over Fock levels 0..n_max, phase-fixed
  int residue = 0;           // block whose odd sector attains the maximum
  bool residue_tie = false;
};

inline TruncatedSolution solve_truncated(int K, int n_max, bool scan_all_residues) {
  const LogBinomial lb(n_max + 1);
  auto element = [&](int n, int np) { return sgn_x_element(n, np, lb); };
  const auto dec = decompose_blocks(n_max + 1, K);

  TruncatedSolution best;
  Eigen::VectorXd best_v;
  const BlockDecomposition::Block* best_blk = nullptr;
  const size_t n_blocks = scan_all_residues ? dec.blocks.size() : 1;
  for (size_t b = 0; b < n_blocks; ++b) {
    const auto& blk = dec.blocks[b];
    if (blk.odd_indices.empty()) continue;
    const Eigen::MatrixXd m = squared_block(element, blk, Parity::Odd);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
      throw convergence_error("score_truncated: block eigensolver did not converge");
    const double lambda = std::max(0.0, es.eigenvalues()(m.rows() - 1));
    const double sigma = std::sqrt(lambda);
    if (best_blk == nullptr || sigma > best.sigma + 1e-12) {
      best.sigma = sigma;
      best.residue = blk.residue;
      best.residue_tie = false;
      best_v = es.eigenvectors().col(m.rows() - 1);
      best_blk = &blk;
    } else if (sigma >= best.sigma - 1e-12) {
      best.residue_tie = true;
    }
  }
  if (best_blk == nullptr || best.sigma <= 0.0)
    throw domain_error("score_truncated: truncation leaves no coupled block");

  best.state = lift_block_eigenvector(element, *best_blk, n_max + 1, best_v, best.sigma);
  fix_phase(best.state);
  return best;
}

}  // namespace detail

/**
 * Protocol score of the truncated oscillator: P = (1 + sigma)/2 with sigma
 * the top singular value of the even/odd coupling inside the kept block(s).
 * The report carries the achieving Fock coefficients, the squared overlap
 * with the doubled-truncation state, and dim = n_max.
 */
inline ScoreReport score_truncated(int K, const TruncationPolicy& policy) {
  if (K < 1 || K % 2 == 0) throw domain_error("score_truncated: K must be odd and >= 1");
  if (policy.n_max < 2 * K) throw domain_error("score_truncated: n_max must be >= 2K");
  if (policy.n_max % K != 0) throw domain_error("score_truncated: n_max must be a multiple of K");

  const auto sol = detail::solve_truncated(K, policy.n_max, policy.scan_all_residues);

  ScoreReport report;
  report.K = K;
  report.dim = policy.n_max;
  report.method = Method::Numeric;
  report.classical_bound = classical_bound(K);
  report.score = 0.5 * (1.0 + sol.sigma);
  report.gap = report.score - report.classical_bound;
  report.optimal_state = sol.state;
  report.max_block_residues = {sol.residue};
  report.degenerate = sol.residue_tie;

  if (policy.check_convergence) {
    const auto doubled = detail::solve_truncated(K, 2 * policy.n_max, policy.scan_all_residues);
    double inner = 0.0;
    for (int n = 0; n <= policy.n_max; ++n) inner += sol.state(n) * doubled.state(n);
    report.convergence_overlap = inner * inner;
    report.converged = *report.convergence_overlap > policy.convergence_threshold;
  }
  return report;
}

/// One coefficient of the optimal oscillator state: the amplitude on Fock
/// level `multiple * K`, with the alternating pair sign pattern divided out.
struct FockCoefficient {
  int multiple = 0;
  double value = 0.0;
};

/**
 * Fock expansion of the truncated optimal state. Verifies that all support
 * sits on multiples of K, strips the (-1)^ceil(m/2) sign pattern, fixes the
 * global phase from the dominant coefficient, and returns everything above
 * the 1e-8 reporting threshold.
 */
inline std::vector<FockCoefficient> optimal_fock_coeffs(int K, const TruncationPolicy& policy) {
  ScoreReport report = score_truncated(K, policy);
  const Eigen::VectorXd& state = *report.optimal_state;

  double leakage = 0.0;
  for (int n = 0; n < state.size(); ++n)
    if (n % K != 0) leakage = std::max(leakage, std::abs(state(n)));
  if (leakage > 1e-10)
    throw consistency_error("optimal_fock_coeffs: support leaks off multiples of K");

  std::vector<FockCoefficient> coeffs;
  for (int n = 0; n < state.size(); n += K) {
    const int m = n / K;
    const double pattern = (((m + 1) / 2) % 2 != 0) ? -1.0 : 1.0;  // (-1)^ceil(m/2)
    coeffs.push_back({m, state(n) * pattern});
  }
  double dominant = 0.0;
  for (const auto& c : coeffs)
    if (std::abs(c.value) > std::abs(dominant)) dominant = c.value;
  if (dominant < 0.0)
    for (auto& c : coeffs) c.value = -c.value;
  std::erase_if(coeffs, [](const FockCoefficient& c) { return std::abs(c.value) < 1e-8; });
  return coeffs;
}

}  // namespace precession
