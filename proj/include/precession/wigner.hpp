// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "precession/errors.hpp"

namespace precession {

namespace detail {

/**
 * Point evaluator for the Wigner function of a pure state with real Fock
 * amplitudes. Cross terms are grouped by level gap; each gap needs one
 * ascending Laguerre recurrence, run with on-the-fly rescaling whose exponent
 * joins the log-space prefactor. That keeps every intermediate finite for
 * levels in the thousands, where the bare polynomials overflow.
 */
class WignerEvaluator {
 public:
  explicit WignerEvaluator(const std::vector<std::pair<int, double>>& amplitudes) {
    if (amplitudes.empty()) throw domain_error("WignerEvaluator: empty state");
    int top = 0;
    for (const auto& [level, value] : amplitudes) {
      if (level < 0) throw domain_error("WignerEvaluator: negative Fock level");
      top = std::max(top, level);
    }
    amp_.assign(static_cast<size_t>(top) + 1, 0.0);
    for (const auto& [level, value] : amplitudes) amp_[static_cast<size_t>(level)] = value;
    for (int n = 0; n <= top; ++n)
      if (amp_[static_cast<size_t>(n)] != 0.0) support_.push_back(n);

    std::vector<char> seen(static_cast<size_t>(top) + 1, 0);
    for (size_t i = 0; i < support_.size(); ++i)
      for (size_t k = i; k < support_.size(); ++k) seen[static_cast<size_t>(support_[k] - support_[i])] = 1;
    for (int gap = 0; gap <= top; ++gap)
      if (seen[static_cast<size_t>(gap)]) gaps_.push_back(gap);

    log_factorial_.assign(static_cast<size_t>(top) + 1, 0.0);
    for (size_t n = 1; n < log_factorial_.size(); ++n)
      log_factorial_[n] = log_factorial_[n - 1] + std::log(static_cast<double>(n));
  }

  double operator()(double x, double p) const {
    const double r2 = x * x + p * p;
    const double z = 2.0 * r2;
    const double theta = std::atan2(p, x);
    const double log_radial = (z > 0.0) ? 0.5 * std::log(z) : -1e300;  // ln(sqrt(2) r)

    double w = 0.0;
    for (int gap : gaps_) {
      const double angle_factor = (gap == 0) ? 1.0 : 2.0 * std::cos(gap * theta);
      w += gap_sum(gap, z, log_radial, angle_factor);
    }
    return w * std::exp(-r2) / M_PI;
  }

 private:
  double gap_sum(int gap, double z, double log_radial, double angle_factor) const {
    const int top = static_cast<int>(amp_.size()) - 1 - gap;
    double sum = 0.0;
    double l0 = 0.0, l1 = 1.0, scale = 0.0;  // L_k = l1 * exp(scale)
    for (int k = 0; k <= top; ++k) {
      if (k > 0) {
        const double next = ((2.0 * k - 1.0 + gap - z) * l1 - (k - 1.0 + gap) * l0) / k;
        l0 = l1;
        l1 = next;
        const double mag = std::abs(l1);
        if (mag > 1e250) {
          l0 *= 1e-250;
          l1 *= 1e-250;
          scale += 250.0 * std::log(10.0);
        } else if (mag > 0.0 && mag < 1e-250 && std::abs(l0) < 1.0) {
          l0 *= 1e250;
          l1 *= 1e250;
          scale -= 250.0 * std::log(10.0);
        }
      }
      const double lower = amp_[static_cast<size_t>(k)];
      if (lower == 0.0 || l1 == 0.0) continue;
      const double upper = amp_[static_cast<size_t>(k + gap)];
      if (upper == 0.0) continue;

      const double log_pref = 0.5 * (log_factorial_[static_cast<size_t>(k)] -
                                     log_factorial_[static_cast<size_t>(k + gap)]) +
                              gap * log_radial;
      const double parity = (k % 2 != 0) ? -1.0 : 1.0;
      const double magnitude = std::exp(log_pref + scale + std::log(std::abs(l1)));
      sum += lower * upper * parity * angle_factor * ((l1 < 0.0) ? -magnitude : magnitude);
    }
    return sum;
  }

  std::vector<double> amp_;
  std::vector<int> support_;
  std::vector<int> gaps_;
  std::vector<double> log_factorial_;
};

}  // namespace detail

/// W(x, p) for a real-amplitude Fock state, normalized so the vacuum peaks at
/// 1/pi and the integral over the plane is 1.
inline double wigner_point(const std::vector<std::pair<int, double>>& amplitudes, double x,
                           double p) {
  return detail::WignerEvaluator(amplitudes)(x, p);
}

/**
 * W sampled on the square [-extent, extent]^2; entry (ix, ip) corresponds to
 * x = -extent + 2 extent ix/(resolution-1) and likewise for p.
 */
inline Eigen::MatrixXd wigner_grid(const std::vector<std::pair<int, double>>& amplitudes,
                                   double extent, int resolution) {
  if (resolution < 2) throw domain_error("wigner_grid: resolution must be >= 2");
  if (!(extent > 0.0)) throw domain_error("wigner_grid: extent must be positive");
  const detail::WignerEvaluator eval(amplitudes);
  Eigen::MatrixXd grid(resolution, resolution);
  for (int ix = 0; ix < resolution; ++ix) {
    const double x = -extent + 2.0 * extent * ix / (resolution - 1);
    for (int ip = 0; ip < resolution; ++ip) {
      const double p = -extent + 2.0 * extent * ip / (resolution - 1);
      grid(ix, ip) = eval(x, p);
    }
  }
  return grid;
}

}  // namespace precession
