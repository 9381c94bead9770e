// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "precession/oscillator_scores.hpp"
#include "precession/wigner.hpp"

using namespace precession;

namespace {

// Wigner transform by direct quadrature of psi(x+y) psi(x-y) exp(2ipy):
// slow but entirely independent of the Laguerre kernel.
double wigner_quadrature(const std::vector<std::pair<int, double>>& amps, double x, double p) {
  auto psi = [&](double u) {
    double v = 0.0;
    for (const auto& [n, c] : amps) v += c * oracle::hermite_function(n, u);
    return v;
  };
  // Range covers the classical turning point of the highest level used here.
  auto real_part = [&](double y) { return psi(x + y) * psi(x - y) * std::cos(2.0 * p * y); };
  double total = 0.0;
  for (int panel = -22; panel < 22; ++panel)
    total += oracle::integrate(real_part, panel, panel + 1.0, 1e-12);
  return total / M_PI;
}

}  // namespace

TEST_CASE("vacuum Wigner function is the unit Gaussian over pi") {
  CHECK(wigner_point({{0, 1.0}}, 0.0, 0.0) == Catch::Approx(1.0 / M_PI).margin(1e-13));
  for (double x : {0.3, 1.0, 2.5})
    for (double p : {-1.2, 0.4})
      CHECK(wigner_point({{0, 1.0}}, x, p) ==
            Catch::Approx(std::exp(-x * x - p * p) / M_PI).margin(1e-13));
}

TEST_CASE("one-photon Wigner function is negative at the origin") {
  CHECK(wigner_point({{1, 1.0}}, 0.0, 0.0) == Catch::Approx(-1.0 / M_PI).margin(1e-13));
}

TEST_CASE("Laguerre kernel agrees with the quadrature transform") {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::vector<std::pair<int, double>> cat = {{0, inv_sqrt2}, {3, 0.5}, {6, -0.5}};
  for (double x : {0.0, 0.7, 1.9})
    for (double p : {0.0, -1.1, 0.6})
      CHECK(wigner_point(cat, x, p) == Catch::Approx(wigner_quadrature(cat, x, p)).margin(1e-9));

  // Larger levels where naive factorials would overflow.
  const std::vector<std::pair<int, double>> high = {{0, 0.8}, {150, 0.6}};
  for (double x : {0.5, 2.0})
    CHECK(wigner_point(high, x, 0.3) ==
          Catch::Approx(wigner_quadrature(high, x, 0.3)).margin(1e-9));
}

TEST_CASE("grid layout matches the point evaluator") {
  const std::vector<std::pair<int, double>> state = {{0, 0.6}, {1, 0.8}};
  auto grid = wigner_grid(state, 3.0, 11);
  REQUIRE(grid.rows() == 11);
  REQUIRE(grid.cols() == 11);
  CHECK(grid(0, 0) == Catch::Approx(wigner_point(state, -3.0, -3.0)).margin(1e-14));
  CHECK(grid(5, 5) == Catch::Approx(wigner_point(state, 0.0, 0.0)).margin(1e-14));
  CHECK(grid(10, 2) == Catch::Approx(wigner_point(state, 3.0, -3.0 + 2 * 0.6)).margin(1e-14));
  CHECK_THROWS_AS(wigner_grid(state, 3.0, 1), domain_error);
  CHECK_THROWS_AS(wigner_grid(state, 0.0, 11), domain_error);
}

TEST_CASE("states on multiples of K have K-fold symmetric Wigner functions") {
  TruncationPolicy pol;
  pol.n_max = 300;
  pol.check_convergence = false;
  for (int K : {3, 7}) {
    auto report = score_truncated(K, pol.n_max % K == 0 ? pol : [&] {
      TruncationPolicy q = pol;
      q.n_max = (pol.n_max / K) * K;
      return q;
    }());
    const Eigen::VectorXd& state = *report.optimal_state;
    std::vector<std::pair<int, double>> amps;
    for (int n = 0; n < state.size(); ++n)
      if (state(n) != 0.0) amps.emplace_back(n, state(n));

    const detail::WignerEvaluator eval(amps);
    for (double r : {0.5, 1.5, 3.0, 5.0})
      for (double theta : {0.1, 1.0, 2.2}) {
        const double w0 = eval(r * std::cos(theta), r * std::sin(theta));
        for (int k = 1; k < K; ++k) {
          const double rotated = theta + 2.0 * M_PI * k / K;
          const double wk = eval(r * std::cos(rotated), r * std::sin(rotated));
          CHECK(wk == Catch::Approx(w0).margin(1e-6));
        }
      }
  }
}

TEST_CASE("the optimal precession state has Wigner negativity") {
  TruncationPolicy pol;
  pol.n_max = 300;
  pol.check_convergence = false;
  auto report = score_truncated(3, pol);
  const Eigen::VectorXd& state = *report.optimal_state;
  std::vector<std::pair<int, double>> amps;
  for (int n = 0; n < state.size(); ++n)
    if (state(n) != 0.0) amps.emplace_back(n, state(n));
  auto grid = wigner_grid(amps, 7.0, 61);
  CHECK(grid.minCoeff() < 0.0);
  CHECK(grid.maxCoeff() > 0.0);
}
