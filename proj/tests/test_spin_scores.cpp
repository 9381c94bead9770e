// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "precession/spin_scores.hpp"

using namespace precession;

namespace {

// Exact first-peak value (1 + 2^-(K-1) C(K-1, (K-1)/2))/2, small integers only.
double first_peak(int K) {
  long double c = 1.0L;
  for (int i = 1; i <= (K - 1) / 2; ++i) c = c * (K - i) / i;
  return static_cast<double>(0.5L * (1.0L + std::pow(0.5L, K - 1) * c));
}

}  // namespace

TEST_CASE("classical_bound") {
  CHECK(classical_bound(3) == 2.0 / 3.0);
  CHECK(classical_bound(7) == 4.0 / 7.0);
  CHECK(classical_bound(4) == 0.5);
  CHECK(classical_bound(1) == 1.0);
  CHECK_THROWS_AS(classical_bound(0), domain_error);
}

TEST_CASE("score_numeric reproduces the known spin values") {
  auto r = score_numeric(3, 4);
  CHECK(r.score == Catch::Approx(0.75).margin(1e-12));
  CHECK(r.gap == Catch::Approx(0.75 - 2.0 / 3.0).margin(1e-12));
  CHECK(r.max_block_residues == std::vector<int>{0});

  CHECK(score_numeric(3, 5).score == Catch::Approx(0.625).margin(1e-12));

  for (int d : {1, 2, 3, 6, 11})
    CHECK(score_numeric(4, d).score == 0.5);  // even K: exactly 1/2

  for (int K : {3, 5, 7})
    for (int d = 1; d <= K; ++d) CHECK(score_numeric(K, d).score == 0.5);
}

TEST_CASE("score_numeric matches the first-peak closed expression") {
  for (int K : {3, 5, 7, 9})
    CHECK(score_numeric(K, K + 1).score == Catch::Approx(first_peak(K)).margin(1e-10));
  CHECK(first_peak(3) == 0.75);
}

TEST_CASE("K = 1 saturates the trivial bound") {
  // A single probing time keeps the full sign operator, whose top eigenvalue
  // is 1, matching the classical bound of 1: no gap.
  for (int d : {2, 4, 9}) {
    auto r = score_numeric(1, d);
    CHECK(r.score == Catch::Approx(1.0).margin(1e-12));
    CHECK(r.gap == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("optimal state at d = K+1 is the extreme-m superposition") {
  auto r = score_numeric(3, 4);
  REQUIRE(r.optimal_state.has_value());
  const Eigen::VectorXd& v = *r.optimal_state;
  CHECK(v.norm() == Catch::Approx(1.0).margin(1e-12));

  Eigen::VectorXd psi = Eigen::VectorXd::Zero(4);
  psi(3) = 1.0 / std::sqrt(2.0);   // m = +3/2
  psi(0) = -1.0 / std::sqrt(2.0);  // (-1)^((K-1)/2) = -1 at K = 3
  CHECK(std::abs(psi.dot(v)) == Catch::Approx(1.0).margin(1e-9));

  // K = 7: sign (-1)^3 = -1 again.
  auto r7 = score_closed_form(7, 8);
  REQUIRE(r7.optimal_state.has_value());
  Eigen::VectorXd psi7 = Eigen::VectorXd::Zero(8);
  psi7(7) = 1.0 / std::sqrt(2.0);
  psi7(0) = -1.0 / std::sqrt(2.0);
  CHECK(std::abs(psi7.dot(*r7.optimal_state)) == Catch::Approx(1.0).margin(1e-12));

  // Numeric and closed-form branches of optimal_state agree up to phase.
  CHECK(std::abs(optimal_state(3, 4).dot(*score_closed_form(3, 4).optimal_state)) ==
        Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("optimal state achieves the reported score") {
  for (int K : {3, 5}) {
    for (int d : {K + 1, 2 * K + 2, 3 * K + 1}) {
      auto r = score_numeric(K, d);
      REQUIRE(r.optimal_state.has_value());
      const Eigen::VectorXd& v = *r.optimal_state;
      CHECK(v.norm() == Catch::Approx(1.0).margin(1e-12));
      // <v|Q_K|v> via the averaged sign operator.
      auto s = sgn_jx_matrix(SpinQuantum::from_dimension(d));
      double quad = 0.0;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
          if ((i - k) % K == 0) quad += v(i) * s(i, k) * v(k);
      CHECK(0.5 * (1.0 + quad) == Catch::Approx(r.score).margin(1e-9));
    }
  }
}

TEST_CASE("closed form equals numeric across the covered bands") {
  for (int K : {3, 5, 7, 9}) {
    for (int d = K + 1; d <= 7 * K; ++d) {
      const double closed = score_closed_form(K, d).score;
      const double numeric = score_numeric(K, d, false).score;
      CHECK(closed == Catch::Approx(numeric).margin(1e-10));
    }
  }
  CHECK(score_closed_form(3, 3).score == 0.5);
  CHECK(score_closed_form(5, 8).score ==
        Catch::Approx(score_numeric(5, 8).score).margin(1e-10));
}

TEST_CASE("closed form rejects what it does not cover") {
  CHECK_THROWS_AS(score_closed_form(3, 22), domain_error);
  CHECK_THROWS_AS(score_closed_form(4, 5), domain_error);
}

TEST_CASE("violation pattern in d for K = 3 and K = 7") {
  auto swept3 = violation_sweep(3, 4, 20);
  for (const auto& r : swept3.reports) {
    const bool expect = (r.dim == 4) || (r.dim >= 6);
    CHECK((r.gap > 1e-9) == expect);
  }

  auto swept7 = violation_sweep(7, 8, 20);
  for (const auto& r : swept7.reports) {
    const bool expect = (r.dim == 8 || r.dim == 10 || r.dim == 12 || r.dim >= 14);
    CHECK((r.gap > 1e-9) == expect);
  }
}

TEST_CASE("the first peak dominates the rest of its row") {
  for (int K : {3, 5, 7}) {
    const double peak = score_closed_form(K, K + 1).score;
    for (int d = K + 2; d <= 7 * K; ++d) CHECK(peak > score_closed_form(K, d).score);
  }
}

TEST_CASE("scores stay inside the sanity envelope") {
  for (int K : {3, 5, 7}) {
    for (int d = 1; d <= 40; ++d) {
      const double s = score_numeric(K, d, false).score;
      CHECK(s >= 0.5);
      CHECK(s <= classical_bound(K) + 0.1559 + 1e-12);
    }
  }
}

TEST_CASE("sweep bookkeeping: ordering, mean, empty range") {
  auto swept = violation_sweep(3, 4, 8);
  REQUIRE(swept.reports.size() == 5);
  for (size_t i = 0; i < swept.reports.size(); ++i)
    CHECK(swept.reports[i].dim == 4 + static_cast<int>(i));
  double mean = 0.0;
  for (const auto& r : swept.reports) mean += r.score;
  CHECK(swept.mean_score == Catch::Approx(mean / 5.0).margin(1e-14));

  auto empty = violation_sweep(3, 9, 8);
  CHECK(empty.reports.empty());
}

TEST_CASE("degenerate block maxima are reported") {
  // K=7, d=9: the blocks at residues 0 and 1 tie by m <-> -m' symmetry.
  auto r = score_numeric(7, 9);
  CHECK(r.degenerate);
  CHECK(r.max_block_residues == std::vector<int>{0, 1});
}
