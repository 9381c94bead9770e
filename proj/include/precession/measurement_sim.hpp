// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "precession/classical_protocol.hpp"
#include "precession/errors.hpp"
#include "precession/sign_elements.hpp"
#include "precession/spin_core.hpp"

namespace precession {

/// Pure spin state in the z basis (ascending m), normalized to 1e-12.
struct QuantumState {
  Eigen::VectorXcd coefficients;

  explicit QuantumState(Eigen::VectorXcd c) : coefficients(std::move(c)) {
    if (coefficients.size() < 1) throw domain_error("QuantumState: empty state");
    if (std::abs(coefficients.norm() - 1.0) > 1e-12)
      throw domain_error("QuantumState: coefficients are not normalized");
  }

  static QuantumState from_real(const Eigen::VectorXd& c) {
    return QuantumState(c.cast<std::complex<double>>());
  }

  int dimension() const { return static_cast<int>(coefficients.size()); }
};

namespace detail {

inline Eigen::VectorXcd rotate_frame(const QuantumState& state, int K, int k) {
  const SpinQuantum spin = SpinQuantum::from_dimension(state.dimension());
  const double theta = 2.0 * M_PI * k / K;
  Eigen::VectorXcd rotated(state.dimension());
  for (int i = 0; i < state.dimension(); ++i) {
    const double phase = theta * 0.5 * spin.two_m_at(i);
    rotated(i) = std::polar(1.0, phase) * state.coefficients(i);
  }
  return rotated;
}

}  // namespace detail

/**
 * Probability of the positive outcome in round k: the expectation of the
 * positivity operator in the frame rotated by 2 pi k / K. The rotation is a
 * diagonal phase in the z basis and the positivity operator is built from the
 * closed-form sign elements.
 */
inline double round_probability(const QuantumState& state, int K, int k) {
  if (K < 1) throw domain_error("round_probability: K must be >= 1");
  if (k < 0 || k >= K) throw domain_error("round_probability: k must lie in [0, K)");
  const SpinQuantum spin = SpinQuantum::from_dimension(state.dimension());
  const Eigen::VectorXcd phi = detail::rotate_frame(state, K, k);
  const Eigen::MatrixXd s = sgn_jx_matrix(spin).dense();
  const double expectation = (phi.adjoint() * (s * phi))(0).real();
  return 0.5 * (1.0 + expectation);
}

/**
 * Exact protocol score <psi| Q_K |psi>, evaluated through the averaged sign
 * operator (only z-basis index differences divisible by K contribute).
 * Equals the uniform average of round_probability over k.
 */
inline double exact_expectation(const QuantumState& state, int K) {
  if (K < 1) throw domain_error("exact_expectation: K must be >= 1");
  const int d = state.dimension();
  const SpinQuantum spin = SpinQuantum::from_dimension(d);
  const LogBinomial lb(spin.two_j() + 1);
  std::complex<double> quad = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if ((i - j) % K == 0 && (i - j) % 2 != 0)
        quad += std::conj(state.coefficients(i)) *
                sgn_jx_element(spin, spin.two_m_at(i), spin.two_m_at(j), lb) *
                state.coefficients(j);
  return 0.5 * (1.0 + quad.real());
}

/**
 * Born-rule outcome probabilities of one protocol round per probing time:
 * positive / zero / negative eigenspace weights of the measured component in
 * each rotated frame. Built once per (state, K); afterwards a round costs one
 * categorical draw. The zero outcome only exists for odd dimensions.
 */
class RoundSampler {
 public:
  RoundSampler(const QuantumState& state, int K) : K_(K) {
    if (K < 1) throw domain_error("RoundSampler: K must be >= 1");
    const SpinQuantum spin = SpinQuantum::from_dimension(state.dimension());
    const Eigensystem es = eigensolve(build_jx(spin));
    p_plus_.resize(K);
    p_zero_.resize(K);
    for (int k = 0; k < K; ++k) {
      const Eigen::VectorXcd overlap = es.eigenvectors.transpose().cast<std::complex<double>>() *
                                       detail::rotate_frame(state, K, k);
      double plus = 0.0, zero = 0.0;
      for (int i = 0; i < state.dimension(); ++i) {
        const double weight = std::norm(overlap(i));
        const double eigenvalue = es.eigenvalues(i);
        if (std::abs(eigenvalue) <= 1e-9)
          zero += weight;
        else if (eigenvalue > 0.0)
          plus += weight;
      }
      p_plus_[k] = plus;
      p_zero_[k] = zero;
    }
  }

  /// Mean and standard error of the sampled score over the given rounds.
  MonteCarloResult run(long rounds, uint64_t seed) const {
    if (rounds < 1) throw domain_error("RoundSampler: rounds must be >= 1");
    double sum = 0.0, sum_sq = 0.0;
    long done = 0;
    for (uint64_t chunk = 0; done < rounds; ++chunk) {
      std::mt19937_64 rng(detail::derive_chunk_seed(seed, chunk));
      std::uniform_int_distribution<int> pick_k(0, K_ - 1);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const long in_chunk = std::min<long>(detail::mc_chunk_rounds, rounds - done);
      for (long i = 0; i < in_chunk; ++i) {
        const int k = pick_k(rng);
        const double u = unit(rng);
        double outcome = 0.0;
        if (u < p_plus_[k])
          outcome = 1.0;
        else if (u < p_plus_[k] + p_zero_[k])
          outcome = 0.5;
        sum += outcome;
        sum_sq += outcome * outcome;
      }
      done += in_chunk;
    }
    MonteCarloResult result;
    result.rounds = rounds;
    result.seed = seed;
    result.estimate = sum / rounds;
    const double var = std::max(0.0, sum_sq / rounds - result.estimate * result.estimate);
    result.standard_error = rounds > 1 ? std::sqrt(var / (rounds - 1)) : std::sqrt(var);
    return result;
  }

  double positive_probability(int k) const { return p_plus_.at(static_cast<size_t>(k)); }
  double zero_probability(int k) const { return p_zero_.at(static_cast<size_t>(k)); }

 private:
  int K_;
  std::vector<double> p_plus_;
  std::vector<double> p_zero_;
};

/// One-shot convenience wrapper around RoundSampler.
inline MonteCarloResult sample_rounds(const QuantumState& state, int K, long rounds,
                                      uint64_t seed) {
  return RoundSampler(state, K).run(rounds, seed);
}

}  // namespace precession
