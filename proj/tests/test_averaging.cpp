// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "precession/averaging.hpp"
#include "precession/sign_elements.hpp"
#include "precession/spin_core.hpp"

using namespace precession;

namespace {

SymmetricMatrix random_symmetric(int d, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SymmetricMatrix a(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k <= i; ++k) a.set(i, k, g(rng));
  return a;
}

}  // namespace

TEST_CASE("average_over_orbit masks exactly by index difference") {
  auto a = random_symmetric(7, 1);

  SECTION("K = 1 leaves everything untouched") {
    auto avg = average_over_orbit(a, 1);
    CHECK(avg.dense() == a.dense());
  }

  SECTION("d <= K keeps only the diagonal") {
    auto avg = average_over_orbit(a, 7);
    for (int i = 0; i < 7; ++i)
      for (int k = 0; k < 7; ++k) {
        if (i == k)
          CHECK(avg(i, k) == a(i, k));
        else
          CHECK(avg(i, k) == 0.0);
      }
  }

  SECTION("entries with difference K survive unchanged") {
    auto avg = average_over_orbit(a, 3);
    CHECK(avg(0, 3) == a(0, 3));
    CHECK(avg(1, 4) == a(1, 4));
    CHECK(avg(0, 1) == 0.0);
    CHECK(avg(0, 2) == 0.0);
  }

  CHECK_THROWS_AS(average_over_orbit(a, 0), domain_error);
}

TEST_CASE("average_over_orbit is idempotent, exactly") {
  for (int K : {2, 3, 5}) {
    auto a = random_symmetric(11, 40 + K);
    auto once = average_over_orbit(a, K);
    auto twice = average_over_orbit(once, K);
    CHECK(twice.dense() == once.dense());
  }
}

TEST_CASE("masking agrees with the rotation-sum form of the average") {
  // Spin m values (half-integers) and Fock level numbers both index the
  // rotation phases; the complex K-term sum must reproduce the mask.
  for (int K : {2, 3, 5}) {
    for (int d : {3, 4, 8}) {
      auto a = random_symmetric(d, 100 * K + d);
      const SpinQuantum spin = SpinQuantum::from_dimension(d);
      std::vector<double> m_values(d);
      for (int i = 0; i < d; ++i) m_values[i] = 0.5 * spin.two_m_at(i);
      const Eigen::MatrixXcd viaRotations =
          oracle::rotation_sum_average(a.dense().cast<std::complex<double>>(), m_values, K);
      const auto viaMask = average_over_orbit(a, K);
      CHECK((viaRotations - viaMask.dense().cast<std::complex<double>>()).cwiseAbs().maxCoeff() <=
            1e-14);

      std::vector<double> levels(d);
      for (int i = 0; i < d; ++i) levels[i] = i;
      const Eigen::MatrixXcd viaFock =
          oracle::rotation_sum_average(a.dense().cast<std::complex<double>>(), levels, K);
      CHECK((viaFock - viaMask.dense().cast<std::complex<double>>()).cwiseAbs().maxCoeff() <=
            1e-14);
    }
  }
}

TEST_CASE("decompose_blocks partitions by residue with the expected sizes") {
  SECTION("dim 4, K 3 gives sizes {2, 1, 1}") {
    auto dec = decompose_blocks(4, 3);
    REQUIRE(dec.blocks.size() == 3);
    CHECK(dec.blocks[0].indices == std::vector<int>{0, 3});
    CHECK(dec.blocks[1].indices == std::vector<int>{1});
    CHECK(dec.blocks[2].indices == std::vector<int>{2});
    CHECK(dec.blocks[0].even_indices == std::vector<int>{0});
    CHECK(dec.blocks[0].odd_indices == std::vector<int>{3});
  }

  SECTION("dim 3, K 3 gives three singletons") {
    auto dec = decompose_blocks(3, 3);
    REQUIRE(dec.blocks.size() == 3);
    for (const auto& blk : dec.blocks) {
      CHECK(blk.indices.size() == 1);
      CHECK(blk.odd_indices.empty());
    }
  }

  SECTION("dim 7, K 3 gives sizes {3, 2, 2}") {
    auto dec = decompose_blocks(7, 3);
    REQUIRE(dec.blocks.size() == 3);
    CHECK(dec.blocks[0].indices == std::vector<int>{0, 3, 6});
    CHECK(dec.blocks[1].indices == std::vector<int>{1, 4});
    CHECK(dec.blocks[2].indices == std::vector<int>{2, 5});
  }

  SECTION("sizes follow floor((dim - 1 - r)/K) + 1 and partition the basis") {
    for (int dim : {1, 2, 5, 12, 30})
      for (int K : {1, 2, 3, 7, 40}) {
        auto dec = decompose_blocks(dim, K);
        std::vector<int> seen;
        for (const auto& blk : dec.blocks) {
          CHECK(static_cast<int>(blk.indices.size()) == (dim - 1 - blk.residue) / K + 1);
          for (int i : blk.indices) seen.push_back(i);
          for (size_t p = 1; p < blk.indices.size(); ++p)
            CHECK(blk.indices[p] - blk.indices[p - 1] == K);
          // Parity split: disjoint union of alternating positions.
          CHECK(blk.even_indices.size() + blk.odd_indices.size() == blk.indices.size());
          for (size_t p = 0; p < blk.indices.size(); ++p) {
            const auto& side = (p % 2 == 0) ? blk.even_indices : blk.odd_indices;
            CHECK(std::find(side.begin(), side.end(), blk.indices[p]) != side.end());
          }
        }
        std::sort(seen.begin(), seen.end());
        REQUIRE(static_cast<int>(seen.size()) == dim);
        for (int i = 0; i < dim; ++i) CHECK(seen[static_cast<size_t>(i)] == i);
      }
  }
}

TEST_CASE("squared_block_reduce on the first nontrivial spin case") {
  // d=4, K=3: the only coupled block is {0, 3}; its odd sector is the 1x1
  // matrix [<(-3/2)|S|(3/2)>^2] = [1/4].
  auto s = sgn_jx_matrix(SpinQuantum(3));
  auto reduced = squared_block_reduce(s, 3);
  REQUIRE(reduced.size() == 3);
  CHECK(reduced[0].dim() == 1);
  CHECK(reduced[0](0, 0) == Catch::Approx(0.25).margin(1e-12));
  // Singleton blocks contribute nothing.
  CHECK(reduced[1](0, 0) == 0.0);
  CHECK(reduced[2](0, 0) == 0.0);

  double lambda2 = 0.0;
  for (const auto& m : reduced)
    lambda2 = std::max(lambda2, eigensolve(m).eigenvalues.maxCoeff());
  CHECK(0.5 * (1.0 + std::sqrt(lambda2)) == Catch::Approx(0.75).margin(1e-12));
}

TEST_CASE("nonzero eigenvalues of the averaged sign come in (l, -l) pairs") {
  for (int K : {3, 5, 7}) {
    for (int d = 2; d <= 60; d += 7) {
      auto s = sgn_jx_matrix(SpinQuantum::from_dimension(d));
      auto avg = average_over_orbit(s, K);
      auto es = eigensolve(avg);
      for (int i = 0; i < d; ++i) {
        const double l = es.eigenvalues(i);
        double closest = 1e300;
        for (int k = 0; k < d; ++k) closest = std::min(closest, std::abs(es.eigenvalues(k) + l));
        CHECK(closest <= 1e-10);
      }
    }
  }
}

TEST_CASE("block-reduced maximum equals the full-operator route") {
  // (2 max_eig(E_K[pos]) - 1)^2 must equal the squared-block maximum.
  for (int K : {3, 5, 7}) {
    for (int d = 2; d <= 60; d += 5) {
      auto s = sgn_jx_matrix(SpinQuantum::from_dimension(d));
      auto avg = average_over_orbit(s, K);
      Eigen::MatrixXd pos = 0.5 * (Eigen::MatrixXd::Identity(d, d) + avg.dense());
      const double top = eigensolve(SymmetricMatrix::from_dense(pos)).eigenvalues.maxCoeff();

      double lambda2 = 0.0;
      for (const auto& m : squared_block_reduce(s, K))
        lambda2 = std::max(lambda2, eigensolve(m).eigenvalues.maxCoeff());
      CHECK(lambda2 == Catch::Approx((2.0 * top - 1.0) * (2.0 * top - 1.0)).margin(1e-10));
    }
  }
}

TEST_CASE("even and odd reduced sectors share their nonzero spectra") {
  for (int K : {3, 5}) {
    for (int d : {7, 12, 23, 41}) {
      auto s = sgn_jx_matrix(SpinQuantum::from_dimension(d));
      auto odd = squared_block_reduce(s, K, Parity::Odd);
      auto even = squared_block_reduce(s, K, Parity::Even);
      REQUIRE(odd.size() == even.size());
      for (size_t b = 0; b < odd.size(); ++b) {
        std::vector<double> lo, le;
        for (double v : eigensolve(odd[b]).eigenvalues)
          if (std::abs(v) > 1e-10) lo.push_back(v);
        for (double v : eigensolve(even[b]).eigenvalues)
          if (std::abs(v) > 1e-10) le.push_back(v);
        REQUIRE(lo.size() == le.size());
        for (size_t i = 0; i < lo.size(); ++i)
          CHECK(lo[i] == Catch::Approx(le[i]).margin(1e-10));
      }
    }
  }
}
