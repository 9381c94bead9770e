// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "precession/averaging.hpp"
#include "precession/errors.hpp"
#include "precession/parallel.hpp"
#include "precession/sign_elements.hpp"
#include "precession/spin_core.hpp"

namespace precession {

enum class Method { Numeric, ClosedForm, MonteCarlo };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Numeric: return "numeric";
    case Method::ClosedForm: return "closed_form";
    case Method::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

/// Maximum protocol score attainable classically: (1 + 1/K)/2 for odd K,
/// exactly 1/2 for even K. Single-rounding form keeps e.g. K=3 bit-equal to 2/3.
inline double classical_bound(int K) {
  if (K < 1) throw domain_error("classical_bound: K must be >= 1");
  if (K % 2 == 0) return 0.5;
  return (K + 1.0) / (2.0 * K);
}

/**
 * A score value with provenance. `dim` is the Hilbert-space dimension for
 * spin systems and the truncation level n_max for oscillator reports.
 * `optimal_state` (z-basis or Fock coefficients) is attached when the
 * computation produces one. `max_block_residues` lists every residue class
 * whose reduced block attains the maximum within 1e-12; ties are broken
 * toward the lowest residue when extracting the state.
 */
struct ScoreReport {
  int K = 0;
  int dim = 0;
  double score = 0.0;
  Method method = Method::Numeric;
  double classical_bound = 0.0;
  double gap = 0.0;
  std::optional<Eigen::VectorXd> optimal_state;
  std::vector<int> max_block_residues;
  bool degenerate = false;
  std::optional<double> convergence_overlap;  // oscillator truncation checks
  bool converged = true;
};

namespace detail {

/// Largest eigenvalue of a symmetric 2x2 [[a, b], [b, c]].
inline double sym2_max_eigenvalue(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double off = 0.5 * (a - c);
  return mean + std::hypot(off, b);
}

/**
 * Largest eigenvalue of a symmetric 3x3 by the trigonometric closed form:
 * shift by the mean, scale by the deviator norm, then the eigenvalues are
 * q + 2p cos(phi + 2 pi k / 3) with cos(3 phi) given by the determinant.
 */
inline double sym3_max_eigenvalue(const Eigen::Matrix3d& m) {
  const double q = m.trace() / 3.0;
  Eigen::Matrix3d b = m;
  b.diagonal().array() -= q;
  const double p2 = b.squaredNorm() / 6.0;
  if (p2 <= 0.0) return q;
  const double p = std::sqrt(p2);
  b /= p;
  double r = b.determinant() / 2.0;
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi);
}

/// Closed-form largest eigenvalue for symmetric matrices up to 3x3.
inline double small_sym_max_eigenvalue(const Eigen::MatrixXd& m) {
  switch (m.rows()) {
    case 0: return 0.0;
    case 1: return m(0, 0);
    case 2: return sym2_max_eigenvalue(m(0, 0), m(0, 1), m(1, 1));
    case 3: return sym3_max_eigenvalue(Eigen::Matrix3d(m));
    default:
      throw domain_error("small_sym_max_eigenvalue: matrix larger than 3x3");
  }
}

struct BlockMaximum {
  double lambda2 = 0.0;                // max eigenvalue of the reduced odd sectors
  std::vector<int> residues;           // all blocks attaining it within 1e-12
  int winner = -1;                     // lowest attaining residue
};

/**
 * Scans the odd sectors of (E_K[S])^2 block by block, where S is given as an
 * element evaluator over basis indices. `solve` maps a reduced odd-sector
 * matrix to its largest eigenvalue.
 */
template <class ElementFn, class SolveFn>
BlockMaximum max_over_blocks(ElementFn&& element, const BlockDecomposition& dec, SolveFn&& solve) {
  BlockMaximum best;
  for (const auto& blk : dec.blocks) {
    if (blk.odd_indices.empty()) continue;
    const Eigen::MatrixXd m = squared_block(element, blk, Parity::Odd);
    const double lambda = std::max(0.0, solve(m));
    if (best.residues.empty() || lambda > best.lambda2 + 1e-12) {
      best.lambda2 = std::max(best.lambda2, lambda);
      best.residues.assign(1, blk.residue);
    } else if (lambda >= best.lambda2 - 1e-12) {
      best.lambda2 = std::max(best.lambda2, lambda);
      best.residues.push_back(blk.residue);
    }
  }
  if (!best.residues.empty()) best.winner = best.residues.front();
  return best;
}

/**
 * Lifts the top eigenvector of the reduced odd sector A^T A back to the full
 * basis: with sigma = sqrt(lambda2) and u = A v / sigma, the vector that puts
 * u/sqrt(2) on the even positions and v/sqrt(2) on the odd positions is the
 * +sigma eigenvector of E_K[S] inside the block. The global phase is fixed by
 * making the first nonzero coefficient positive.
 */
template <class ElementFn>
Eigen::VectorXd lift_block_eigenvector(ElementFn&& element, const BlockDecomposition::Block& blk,
                                       int dim, const Eigen::VectorXd& v_odd, double sigma) {
  const Eigen::MatrixXd a = cross_matrix(element, blk.even_indices, blk.odd_indices);
  Eigen::VectorXd u = a * v_odd / sigma;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (size_t i = 0; i < blk.even_indices.size(); ++i)
    full(blk.even_indices[i]) = u(static_cast<Eigen::Index>(i)) * inv_sqrt2;
  for (size_t i = 0; i < blk.odd_indices.size(); ++i)
    full(blk.odd_indices[i]) = v_odd(static_cast<Eigen::Index>(i)) * inv_sqrt2;
  return full;
}

inline void fix_phase(Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

/// Shared score driver: `solve` picks the eigenvalue route (dense or closed form).
template <class ElementFn, class SolveFn>
ScoreReport score_from_elements(int K, int dim, Method method, ElementFn&& element,
                                SolveFn&& solve, bool want_state) {
  const auto dec = decompose_blocks(dim, K);
  const BlockMaximum best = max_over_blocks(element, dec, solve);

  ScoreReport report;
  report.K = K;
  report.dim = dim;
  report.method = method;
  report.classical_bound = precession::classical_bound(K);
  const double sigma = std::sqrt(best.lambda2);
  report.score = 0.5 * (1.0 + sigma);
  report.gap = report.score - report.classical_bound;
  report.max_block_residues = best.residues;
  report.degenerate = best.residues.size() > 1;

  if (want_state) {
    if (sigma > 0.0 && best.winner >= 0) {
      const auto& blk = dec.blocks[static_cast<size_t>(best.winner)];
      const Eigen::MatrixXd m = squared_block(element, blk, Parity::Odd);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      if (es.info() != Eigen::Success)
        throw convergence_error("score: block eigensolver did not converge");
      if (m.rows() >= 2 && es.eigenvalues()(m.rows() - 1) - es.eigenvalues()(m.rows() - 2) <= 1e-12)
        report.degenerate = true;
      const Eigen::VectorXd v = es.eigenvectors().col(m.rows() - 1);
      Eigen::VectorXd state = lift_block_eigenvector(element, blk, dim, v, sigma);
      fix_phase(state);
      report.optimal_state = std::move(state);
    } else {
      // No positive sector: the score is 1/2 and every state attains it.
      Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
      state(0) = 1.0;
      report.optimal_state = std::move(state);
    }
  }
  return report;
}

inline double dense_max_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw convergence_error("score: block eigensolver did not converge");
  return es.eigenvalues()(m.rows() - 1);
}

}  // namespace detail

/**
 * Maximum protocol score for a spin system of dimension d = 2j + 1, obtained
 * by diagonalizing the reduced odd sectors of the squared averaged sign
 * operator block by block. The achieving eigenvector is lifted back to the
 * full z basis with its first nonzero coefficient made positive.
 */
inline ScoreReport score_numeric(int K, int dim, bool want_state = true) {
  if (K < 1) throw domain_error("score_numeric: K must be >= 1");
  const SpinQuantum spin = SpinQuantum::from_dimension(dim);
  const LogBinomial lb(spin.two_j() + 1);
  auto element = [&](int i, int k) {
    return sgn_jx_element(spin, spin.two_m_at(i), spin.two_m_at(k), lb);
  };
  return detail::score_from_elements(K, dim, Method::Numeric, element,
                                     detail::dense_max_eigenvalue, want_state);
}

/**
 * Same score through the closed forms: for d <= 7K every reduced odd sector
 * is at most 3x3, so the maximum eigenvalue follows from the quadratic and
 * trigonometric formulas with no iterative solver involved. For d = K + 1 the
 * known optimal superposition of the extreme m levels is attached.
 */
inline ScoreReport score_closed_form(int K, int dim) {
  if (K < 1 || K % 2 == 0) throw domain_error("score_closed_form: K must be odd and >= 1");
  if (dim < 1) throw domain_error("score_closed_form: dim must be >= 1");
  if (dim > 7 * K)
    throw domain_error("score_closed_form: closed forms cover d <= 7K; use score_numeric for d=" +
                       std::to_string(dim));
  const SpinQuantum spin = SpinQuantum::from_dimension(dim);
  const LogBinomial lb(spin.two_j() + 1);
  auto element = [&](int i, int k) {
    return sgn_jx_element(spin, spin.two_m_at(i), spin.two_m_at(k), lb);
  };
  ScoreReport report = detail::score_from_elements(K, dim, Method::ClosedForm, element,
                                                   detail::small_sym_max_eigenvalue, false);
  if (dim == K + 1) {
    Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
    const double sign = (((K - 1) / 2) % 2 != 0) ? -1.0 : 1.0;
    state(dim - 1) = 1.0 / std::sqrt(2.0);  // m = +j
    state(0) = sign / std::sqrt(2.0);       // m = -j
    report.optimal_state = std::move(state);
  }
  return report;
}

/**
 * Optimal state for (K, dim): the closed-form superposition
 * (|m=j> + (-1)^((K-1)/2) |m=-j>)/sqrt(2) when dim = K + 1, otherwise the
 * phase-fixed numeric eigenvector.
 */
inline Eigen::VectorXd optimal_state(int K, int dim) {
  if (K % 2 == 0) throw domain_error("optimal_state: K must be odd");
  if (dim == K + 1) return *score_closed_form(K, dim).optimal_state;
  return *score_numeric(K, dim, true).optimal_state;
}

struct SweepResult {
  std::vector<ScoreReport> reports;  // ordered by ascending dim
  double mean_score = 0.0;
};

/**
 * Scores for every dimension in [dim_min, dim_max], computed in parallel
 * (each dimension is independent). The mean uses compensated summation so
 * multi-thousand-point averages are honest at the 1e-4 level and below.
 */
inline SweepResult violation_sweep(int K, int dim_min, int dim_max, bool want_states = false,
                                   unsigned threads = 0) {
  if (K < 1) throw domain_error("violation_sweep: K must be >= 1");
  if (dim_min < 1) throw domain_error("violation_sweep: dim range must start at >= 1");
  SweepResult result;
  if (dim_max < dim_min) return result;
  const int n = dim_max - dim_min + 1;
  result.reports.resize(static_cast<size_t>(n));
  parallel_for(0, n,
               [&](int i) {
                 result.reports[static_cast<size_t>(i)] =
                     score_numeric(K, dim_min + i, want_states);
               },
               threads);
  double sum = 0.0, comp = 0.0;  // Kahan
  for (const auto& r : result.reports) {
    const double y = r.score - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  result.mean_score = sum / n;
  return result;
}

}  // namespace precession
