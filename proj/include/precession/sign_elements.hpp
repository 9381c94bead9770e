// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "precession/errors.hpp"
#include "precession/spin_core.hpp"

namespace precession {

/**
 * Log-space binomial coefficients backed by a precomputed log-factorial
 * table. The table is immutable after construction, so a single instance can
 * be shared across threads during matrix assembly.
 *
 * Conventions needed by the sign-element closed forms: C(0,0) = 1, and the
 * boundary factor x^(x mod 2) at x = 0 evaluates as 0^0 = 1 (the
 * corresponding log term is simply skipped).
 */
class LogBinomial {
 public:
  explicit LogBinomial(int max_n) : log_fact_(static_cast<size_t>(std::max(max_n, 1)) + 1) {
    if (max_n < 0) throw domain_error("LogBinomial: max_n must be non-negative");
    log_fact_[0] = 0.0;
    for (size_t n = 1; n < log_fact_.size(); ++n)
      log_fact_[n] = log_fact_[n - 1] + std::log(static_cast<double>(n));
  }

  int max_n() const { return static_cast<int>(log_fact_.size()) - 1; }

  double log_choose(int n, int k) const {
    if (n < 0 || k < 0 || k > n) throw domain_error("LogBinomial: invalid (n, k)");
    if (n > max_n()) throw domain_error("LogBinomial: n exceeds table size");
    return log_fact_[n] - log_fact_[k] - log_fact_[n - k];
  }

  double choose(int n, int k) const { return std::exp(log_choose(n, k)); }

  /// log C(2n, n), the central binomial coefficient.
  double log_central(int n) const { return log_choose(2 * n, n); }

  /// log(n) for n >= 1, served from the factorial table.
  double log_int(int n) const {
    if (n < 1 || n > max_n()) throw domain_error("LogBinomial: log_int out of range");
    return log_fact_[static_cast<size_t>(n)] - log_fact_[static_cast<size_t>(n) - 1];
  }

 private:
  std::vector<double> log_fact_;
};

/**
 * Closed-form matrix element <m_z| sgn(J_x) |m'_z>.
 *
 * Zero whenever m' - m is even. Otherwise the magnitude is a product of four
 * central binomials at floor((j +- m)/2), floor((j +- m')/2) and the odd
 * boundary factors (j +- m)^((j +- m) mod 2), scaled by 2^-(2j-1); the sign
 * factor is (-1)^((m'-m-1)/2) / (m'-m), which makes the expression symmetric
 * in (m, m'). Everything is accumulated in log space so the element stays
 * finite for 2j in the thousands.
 */
inline double sgn_jx_element(const SpinQuantum& spin, int two_m, int two_m_prime,
                             const LogBinomial& lb) {
  spin.check_two_m(two_m);
  spin.check_two_m(two_m_prime);
  // Canonical argument order: the expression is symmetric in (m, m'), and
  // evaluating one orientation keeps the symmetry bitwise exact.
  if (two_m > two_m_prime) std::swap(two_m, two_m_prime);

  const int delta = (two_m_prime - two_m) / 2;  // m' - m, always an integer
  if (delta % 2 == 0) return 0.0;

  const int a = (spin.two_j() + two_m) / 2;        // j + m
  const int b = (spin.two_j() - two_m) / 2;        // j - m
  const int ap = (spin.two_j() + two_m_prime) / 2; // j + m'
  const int bp = (spin.two_j() - two_m_prime) / 2; // j - m'

  double log_mag = -(spin.two_j() - 1) * std::log(2.0);
  log_mag += 0.5 * (lb.log_central(a / 2) + lb.log_central(b / 2) +
                    lb.log_central(ap / 2) + lb.log_central(bp / 2));
  for (int x : {a, b, ap, bp})
    if (x % 2 != 0) log_mag += 0.5 * lb.log_int(x);

  const int half = (delta - 1) / 2;  // exact: delta odd
  const double sign = (half % 2 != 0) ? -1.0 : 1.0;
  return sign * std::exp(log_mag) / delta;
}

inline double sgn_jx_element(const SpinQuantum& spin, int two_m, int two_m_prime) {
  return sgn_jx_element(spin, two_m, two_m_prime, LogBinomial(spin.two_j() + 1));
}

/**
 * Closed-form matrix element <n| sgn(X) |n'> of the position-sign operator in
 * the Fock basis. Zero when n and n' share parity; otherwise evaluated with
 * the even index in the even slot (the expression is symmetric in (n, n')).
 */
inline double sgn_x_element(int n, int n_prime, const LogBinomial& lb) {
  if (n < 0 || n_prime < 0) throw domain_error("sgn_x_element: negative Fock index");
  if (n % 2 == n_prime % 2) return 0.0;
  if (n % 2 != 0) std::swap(n, n_prime);

  const int diff = n_prime - n;  // odd, may be negative
  double log_mag = -0.5 * (n + n_prime - 2) * std::log(2.0);
  log_mag += 0.5 * (lb.log_int(n_prime) - std::log(M_PI) + lb.log_choose(n, n / 2) +
                    lb.log_choose(n_prime - 1, (n_prime - 1) / 2));

  const int half = (diff - 1) / 2;
  const double sign = (half % 2 != 0) ? -1.0 : 1.0;
  return sign * std::exp(log_mag) / diff;
}

inline double sgn_x_element(int n, int n_prime) {
  return sgn_x_element(n, n_prime, LogBinomial(std::max(n, n_prime) + 1));
}

/// Full sgn(J_x) in the z basis, assembled from the closed-form elements.
inline SymmetricMatrix sgn_jx_matrix(const SpinQuantum& spin) {
  const int d = spin.dimension();
  const LogBinomial lb(spin.two_j() + 1);
  SymmetricMatrix s(d);
  for (int i = 0; i < d; ++i)
    for (int k = i + 1; k < d; ++k)
      s.set(i, k, sgn_jx_element(spin, spin.two_m_at(i), spin.two_m_at(k), lb));
  return s;
}

/// (n_max+1) x (n_max+1) Fock-basis truncation of sgn(X).
inline SymmetricMatrix sgn_x_matrix(int n_max) {
  if (n_max < 1) throw domain_error("sgn_x_matrix: n_max must be >= 1");
  const LogBinomial lb(n_max + 1);
  SymmetricMatrix s(n_max + 1);
  for (int n = 0; n <= n_max; ++n)
    for (int np = n + 1; np <= n_max; ++np) s.set(n, np, sgn_x_element(n, np, lb));
  return s;
}

/**
 * Discrepancy |<n~|sgn(J_x)|n~'> - <n|sgn(X)|n'>| between the spin and
 * oscillator sign elements, with angular-momentum levels relabeled from the
 * bottom (n~ = j + m). Vanishes as j grows, which is the finite-j handle on
 * the oscillator limit.
 */
inline double limit_compare(const SpinQuantum& spin, int n, int n_prime) {
  if (n < 0 || n_prime < 0 || n > spin.two_j() || n_prime > spin.two_j())
    throw domain_error("limit_compare: level index exceeds dimension");
  const LogBinomial lb(std::max(spin.two_j(), std::max(n, n_prime)) + 1);
  const double spin_el =
      sgn_jx_element(spin, 2 * n - spin.two_j(), 2 * n_prime - spin.two_j(), lb);
  const double osc_el = sgn_x_element(n, n_prime, lb);
  return std::abs(spin_el - osc_el);
}

}  // namespace precession
