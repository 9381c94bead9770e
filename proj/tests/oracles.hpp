// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

// Independent test oracles. Everything here deliberately avoids the
// closed-form code paths it is used to check: the rotation-sum average works
// in complex arithmetic, and the oscillator sign elements come from adaptive
// quadrature of the position-space wave functions.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "precession/spin_core.hpp"

namespace oracle {

/**
 * Time average over the K rotation frames in its original form: the sum of
 * the K conjugations by the diagonal phase operators exp(-i theta_k M),
 * where M carries the generator eigenvalues (m values for a spin, level
 * numbers for the Fock basis). Used to confirm the entrywise masking rule.
 */
inline Eigen::MatrixXcd rotation_sum_average(const Eigen::MatrixXcd& a,
                                             const std::vector<double>& m_values, int K) {
  const auto d = a.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < K; ++k) {
    const double theta = 2.0 * M_PI * k / K;
    Eigen::VectorXcd phase(d);
    for (Eigen::Index i = 0; i < d; ++i)
      phase(i) = std::exp(std::complex<double>(0.0, -theta * m_values[static_cast<size_t>(i)]));
    out += phase.asDiagonal() * a * phase.asDiagonal().inverse();
  }
  return out / static_cast<double>(K);
}

/// Normalized harmonic-oscillator eigenfunction psi_n(x), by the stable
/// three-term recurrence on h_n = psi_n (the Gaussian is folded in from the start).
inline double hermite_function(int n, double x) {
  double h0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return h0;
  double h1 = std::sqrt(2.0) * x * h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = std::sqrt(2.0 / (k + 1.0)) * x * h1 - std::sqrt(k / (k + 1.0)) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

/**
 * <n| sgn(X) |n'> by quadrature: 2 * integral_0^inf psi_n psi_n' dx for
 * opposite parities, 0 otherwise. The integrand decays like exp(-x^2), so
 * truncating at x = 40 leaves an error far below 1e-14. Integrated over unit
 * panels so the adaptive rule cannot mistake the localized integrand for zero.
 */
inline double sgn_x_quadrature(int n, int n_prime) {
  if (n % 2 == n_prime % 2) return 0.0;
  auto f = [&](double x) { return hermite_function(n, x) * hermite_function(n_prime, x); };
  double total = 0.0;
  for (int panel = 0; panel < 40; ++panel)
    total += integrate(f, static_cast<double>(panel), panel + 1.0, 1e-14);
  return 2.0 * total;
}

}  // namespace oracle
