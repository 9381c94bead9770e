// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "precession/errors.hpp"
#include "precession/spin_core.hpp"
#include "precession/spin_scores.hpp"

namespace precession {

/**
 * Clebsch-Gordan coefficients <j1 m1; j2 m2 | j m> for one (j1, j2) pair, all
 * j, in the Condon-Shortley convention (all coefficients real, and
 * <j1 j1; j2 (j-j1) | j j> > 0). Built by seeding the stretched state,
 * orthogonalizing each lower highest-weight state inside its m = j subspace,
 * and walking down with the lowering operator. Immutable once constructed.
 */
class CGTable {
 public:
  CGTable(SpinQuantum j1, SpinQuantum j2) : j1_(j1), j2_(j2) {
    // Descending j: the orthogonalization for each highest-weight state needs
    // the already-lowered m = j states of every larger multiplet.
    const int tj_min = std::abs(j1.two_j() - j2.two_j());
    const int tj_max = j1.two_j() + j2.two_j();
    for (int tj = tj_max; tj >= tj_min; tj -= 2) {
      build_highest(tj);
      lower_all(tj);
    }
  }

  /// <j1 m1; j2 m2 | j, m1+m2>; zero outside the selection rules.
  double coefficient(int two_j, int two_m1, int two_m2) const {
    if (std::abs(two_m1) > j1_.two_j() || std::abs(two_m2) > j2_.two_j()) return 0.0;
    const auto it = states_.find({two_j, two_m1 + two_m2});
    if (it == states_.end()) return 0.0;
    const int lo = m1_low(two_m1 + two_m2);
    const int idx = (two_m1 - lo) / 2;
    if (idx < 0 || idx >= it->second.size()) return 0.0;
    return it->second(idx);
  }

  SpinQuantum j1() const { return j1_; }
  SpinQuantum j2() const { return j2_; }

 private:
  // m1 range of the m subspace: max(-j1, m - j2) <= m1 <= min(j1, m + j2).
  int m1_low(int two_m) const { return std::max(-j1_.two_j(), two_m - j2_.two_j()); }
  int m1_high(int two_m) const { return std::min(j1_.two_j(), two_m + j2_.two_j()); }
  int subspace_dim(int two_m) const { return (m1_high(two_m) - m1_low(two_m)) / 2 + 1; }

  static double ladder_down(int two_j, int two_m) {
    // <j, m-1| J_- |j, m> = sqrt(j(j+1) - m(m-1))
    const long long tj = two_j, tm = two_m;
    return 0.5 * std::sqrt(static_cast<double>(tj * (tj + 2) - tm * (tm - 2)));
  }

  void build_highest(int two_j) {
    const int dim = subspace_dim(two_j);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    if (two_j == j1_.two_j() + j2_.two_j()) {
      v(dim - 1) = 1.0;  // stretched state: m1 = j1, m2 = j2
    } else {
      // Start from the basis vector with m1 = j1 (its target component is
      // positive) and project out every higher highest-weight family.
      // Two passes keep the orthogonality at machine precision.
      v(dim - 1) = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (int tj = j1_.two_j() + j2_.two_j(); tj > two_j; tj -= 2) {
          const Eigen::VectorXd& u = states_.at({tj, two_j});
          v -= u.dot(v) * u;
        }
      const double norm = v.norm();
      if (norm < 1e-12)
        throw consistency_error("CGTable: degenerate highest-weight construction");
      v /= norm;
      if (v(dim - 1) < 0.0) v = -v;  // Condon-Shortley sign
    }
    states_[{two_j, two_j}] = std::move(v);
  }

  void lower_all(int two_j) {
    for (int two_m = two_j; two_m > -two_j; two_m -= 2) {
      const Eigen::VectorXd& from = states_.at({two_j, two_m});
      const int dim_lower = subspace_dim(two_m - 2);
      Eigen::VectorXd to = Eigen::VectorXd::Zero(dim_lower);
      const int lo_from = m1_low(two_m);
      const int lo_to = m1_low(two_m - 2);
      for (int idx = 0; idx < from.size(); ++idx) {
        const int two_m1 = lo_from + 2 * idx;
        const int two_m2 = two_m - two_m1;
        const double amp = from(idx);
        if (amp == 0.0) continue;
        if (two_m1 - 2 >= -j1_.two_j())
          to((two_m1 - 2 - lo_to) / 2) += amp * ladder_down(j1_.two_j(), two_m1);
        if (two_m2 - 2 >= -j2_.two_j())
          to((two_m1 - lo_to) / 2) += amp * ladder_down(j2_.two_j(), two_m2);
      }
      to /= ladder_down(two_j, two_m);
      states_[{two_j, two_m - 2}] = std::move(to);
    }
  }

  SpinQuantum j1_, j2_;
  std::map<std::pair<int, int>, Eigen::VectorXd> states_;  // (2j, 2m) -> over m1
};

/// Single Clebsch-Gordan coefficient; builds the (j1, j2) table on the fly.
inline double clebsch_gordan(SpinQuantum j1, SpinQuantum j2, SpinQuantum j, int two_m1,
                             int two_m2) {
  if (j.two_j() < std::abs(j1.two_j() - j2.two_j()) || j.two_j() > j1.two_j() + j2.two_j() ||
      (j1.two_j() + j2.two_j() - j.two_j()) % 2 != 0)
    throw domain_error("clebsch_gordan: (j1, j2, j) violates the triangle/parity rules");
  j1.check_two_m(two_m1);
  j2.check_two_m(two_m2);
  return CGTable(j1, j2).coefficient(j.two_j(), two_m1, two_m2);
}

/**
 * Product-basis coefficient matrix of the maximal-violation state for K
 * probing times realized on two spins: the superposition of the extreme
 * m = +-j states of the j = K/2 multiplet, expanded with Clebsch-Gordan
 * coefficients. Row index runs over m1, column over m2, both ascending.
 */
inline Eigen::MatrixXd embed_optimal_state(SpinQuantum j1, SpinQuantum j2, int K) {
  if (K < 1 || K % 2 == 0) throw domain_error("embed_optimal_state: K must be odd and >= 1");
  const int two_j = K;  // j = K/2
  if (two_j < std::abs(j1.two_j() - j2.two_j()) || two_j > j1.two_j() + j2.two_j() ||
      (j1.two_j() + j2.two_j() - two_j) % 2 != 0)
    throw domain_error("embed_optimal_state: j = K/2 not reachable from (j1, j2)");

  const CGTable table(j1, j2);
  const double sign = (((K - 1) / 2) % 2 != 0) ? -1.0 : 1.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(j1.dimension(), j2.dimension());
  for (int i1 = 0; i1 < j1.dimension(); ++i1)
    for (int i2 = 0; i2 < j2.dimension(); ++i2) {
      const int two_m1 = j1.two_m_at(i1);
      const int two_m2 = j2.two_m_at(i2);
      double value = 0.0;
      if (two_m1 + two_m2 == two_j) value += table.coefficient(two_j, two_m1, two_m2);
      if (two_m1 + two_m2 == -two_j) value += sign * table.coefficient(two_j, two_m1, two_m2);
      coeffs(i1, i2) = value * inv_sqrt2;
    }
  return coeffs;
}

struct SchmidtSpectrum {
  Eigen::VectorXd singular_values;  // descending
  int rank = 0;                     // count above 1e-10
  double entropy = 0.0;             // -sum s^2 ln s^2
};

/// Schmidt data of a bipartite coefficient matrix (assumed normalized).
inline SchmidtSpectrum schmidt_spectrum(const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() < 1 || coeffs.cols() < 1)
    throw domain_error("schmidt_spectrum: empty coefficient matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coeffs);
  SchmidtSpectrum out;
  out.singular_values = svd.singularValues();
  for (int i = 0; i < out.singular_values.size(); ++i) {
    const double s = out.singular_values(i);
    if (s > 1e-10) {
      ++out.rank;
      out.entropy -= s * s * std::log(s * s);
    }
  }
  return out;
}

struct GhzReport {
  int K = 0;
  double top_score = 0.0;
  double reference_score = 0.0;      // spin score at d = K + 1
  double ghz_expectation = 0.0;      // protocol score of the GHZ state itself
  std::vector<double> overlaps;      // |<GHZ|v>| per maximal eigenvector
  double best_overlap = 0.0;         // norm of GHZ projected on the top eigenspace
  bool degenerate = false;
};

/**
 * Realizes the protocol on a chain of K spin-1/2 particles measured through
 * the collective x component: diagonalizes the time-averaged positivity
 * operator on the 2^K product space and compares the maximizer against the
 * K-partite GHZ state (|up..up> + (-1)^((K-1)/2) |down..down>)/sqrt(2).
 */
inline GhzReport ghz_check(int K) {
  if (K < 1 || K % 2 == 0) throw domain_error("ghz_check: K must be odd and >= 1");
  if (K > 12) throw domain_error("ghz_check: K above 12 is not supported (2^K state space)");
  const int dim = 1 << K;

  // Collective operators on the product basis; bit set = spin down.
  SymmetricMatrix jx(dim);
  std::vector<int> two_m(static_cast<size_t>(dim));
  for (int b = 0; b < dim; ++b) {
    two_m[static_cast<size_t>(b)] = K - 2 * __builtin_popcount(static_cast<unsigned>(b));
    for (int site = 0; site < K; ++site) jx.set(b, b ^ (1 << site), 0.5);
  }

  const SymmetricMatrix sgn = spectral_sign(jx);
  SymmetricMatrix q(dim);
  for (int b = 0; b < dim; ++b) {
    q.set(b, b, 0.5);
    for (int c = b + 1; c < dim; ++c) {
      const int dm = (two_m[static_cast<size_t>(b)] - two_m[static_cast<size_t>(c)]) / 2;
      if (dm % K == 0) q.set(b, c, 0.5 * sgn(b, c));
    }
  }

  const Eigensystem es = eigensolve(q);
  const double top = es.eigenvalues(dim - 1);

  Eigen::VectorXd ghz = Eigen::VectorXd::Zero(dim);
  ghz(0) = 1.0 / std::sqrt(2.0);  // all up
  ghz(dim - 1) = ((((K - 1) / 2) % 2 != 0) ? -1.0 : 1.0) / std::sqrt(2.0);

  GhzReport report;
  report.K = K;
  report.top_score = top;
  report.reference_score = score_closed_form(K, K + 1).score;
  report.ghz_expectation = ghz.dot(q.dense() * ghz);
  double projected = 0.0;
  for (int i = dim - 1; i >= 0 && es.eigenvalues(i) >= top - 1e-9; --i) {
    const double overlap = std::abs(ghz.dot(es.eigenvectors.col(i)));
    report.overlaps.push_back(overlap);
    projected += overlap * overlap;
  }
  report.degenerate = report.overlaps.size() > 1;
  report.best_overlap = std::sqrt(projected);
  return report;
}

}  // namespace precession
