// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "precession/errors.hpp"

namespace precession {

/// A classical pure state: one point of the precessing pair (A1, A2).
struct PhasePoint {
  double a1 = 0.0;
  double a2 = 0.0;
};

enum class SectorSign { Plus, Minus, Boundary };

/// Sector classification of a phase-space direction: the plane splits into K
/// "+" wedges (score (1 + 1/K)/2), K "-" wedges (score (1 - 1/K)/2) and their
/// measure-zero edges.
struct SectorLabel {
  SectorSign sign = SectorSign::Boundary;
  int k = 0;  // wedge index in [0, K); 0 for boundary labels
};

/**
 * Classifies theta = arctan2(a2, a1) into the wedge just below pi/2 rotated
 * by multiples of 2 pi / K ("+k"), the wedge below that ("-k"), or an edge.
 * The origin is an edge. Points within ~1e-12 of an edge angle are labeled
 * boundary: the label on a measure-zero set never enters any density
 * integral, and the per-round scoring resolves exact zeros separately.
 */
inline SectorLabel sector_of(const PhasePoint& p, int K) {
  if (K < 3 || K % 2 == 0) throw domain_error("sector_of: K must be odd and >= 3");
  if (!std::isfinite(p.a1) || !std::isfinite(p.a2))
    throw domain_error("sector_of: non-finite phase point");
  if (p.a1 == 0.0 && p.a2 == 0.0) return {SectorSign::Boundary, 0};

  const double theta = std::atan2(p.a2, p.a1);
  double offset = (0.5 * M_PI - theta) / (M_PI / K);  // wedge coordinate
  offset = std::fmod(offset, 2.0 * K);
  if (offset < 0.0) offset += 2.0 * K;

  const double nearest = std::round(offset);
  if (std::abs(offset - nearest) <= 1e-12 * K) return {SectorSign::Boundary, 0};

  const int cell = static_cast<int>(std::floor(offset));  // in [0, 2K)
  if (cell % 2 == 0) return {SectorSign::Plus, cell / 2};
  return {SectorSign::Minus, cell / 2};
}

/// Heaviside step with the half-convention at zero.
inline double pos_indicator(double x) { return x > 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0); }

/**
 * Deterministic per-point score: the average over the K probing times of the
 * indicator that the precessed first coordinate is positive, an exact zero
 * counting one half. For odd K this lands on (1 - 1/K)/2, 1/2, or
 * (1 + 1/K)/2 only.
 */
inline double exact_point_score(const PhasePoint& p, int K) {
  if (K < 1) throw domain_error("exact_point_score: K must be >= 1");
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    const double theta = 2.0 * M_PI * k / K;
    sum += pos_indicator(p.a1 * std::cos(theta) + p.a2 * std::sin(theta));
  }
  return sum / K;
}

// Built-in phase-space densities.
struct PointDensity {
  double a1 = 0.0, a2 = 0.0;
};
struct DiscDensity {
  double radius = 1.0;  // uniform over the disc of this radius
};
struct SectorDensity {
  SectorSign sign = SectorSign::Plus;  // uniform over the unit-radius wedge
  int k = 0;
};
struct GaussDensity {
  double sigma = 1.0;  // isotropic, centered at the origin
};
using Density = std::variant<PointDensity, DiscDensity, SectorDensity, GaussDensity>;

/**
 * Parses CLI density specifications: "point:A1,A2", "disc:R", "sector:+k" /
 * "sector:-k", "gauss:SIGMA".
 */
inline Density parse_density(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (name == "point") {
      const auto comma = args.find(',');
      if (comma == std::string::npos) throw domain_error("point density needs A1,A2");
      return PointDensity{std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1))};
    }
    if (name == "disc") {
      const double r = std::stod(args);
      if (!(r > 0.0)) throw domain_error("disc radius must be positive");
      return DiscDensity{r};
    }
    if (name == "sector") {
      if (args.size() < 2 || (args[0] != '+' && args[0] != '-'))
        throw domain_error("sector density needs +k or -k");
      const int k = std::stoi(args.substr(1));
      if (k < 0) throw domain_error("sector index must be non-negative");
      return SectorDensity{args[0] == '+' ? SectorSign::Plus : SectorSign::Minus, k};
    }
    if (name == "gauss") {
      const double s = std::stod(args);
      if (!(s > 0.0)) throw domain_error("gauss sigma must be positive");
      return GaussDensity{s};
    }
  } catch (const std::invalid_argument&) {
    throw domain_error("density '" + spec + "': malformed numeric argument");
  } catch (const std::out_of_range&) {
    throw domain_error("density '" + spec + "': numeric argument out of range");
  }
  throw domain_error("unknown density '" + spec +
                     "' (expected point:A1,A2 | disc:R | sector:+k | gauss:SIGMA)");
}

namespace detail {

/// Angular wedge of a sector label: theta in (hi - pi/K, hi) with
/// hi = pi/2 - (2k + s) pi / K, s = 0 for "+", 1 for "-".
inline std::pair<double, double> sector_interval(const SectorDensity& s, int K) {
  if (s.k < 0 || s.k >= K) throw domain_error("sector index must lie in [0, K)");
  const int step = 2 * s.k + (s.sign == SectorSign::Minus ? 1 : 0);
  const double hi = 0.5 * M_PI - step * M_PI / K;
  return {hi - M_PI / K, hi};
}

inline PhasePoint sample(const Density& density, int K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (const auto* pt = std::get_if<PointDensity>(&density)) return {pt->a1, pt->a2};
  if (const auto* disc = std::get_if<DiscDensity>(&density)) {
    const double r = disc->radius * std::sqrt(unit(rng));
    const double phi = 2.0 * M_PI * unit(rng);
    return {r * std::cos(phi), r * std::sin(phi)};
  }
  if (const auto* sec = std::get_if<SectorDensity>(&density)) {
    const auto [lo, hi] = sector_interval(*sec, K);
    const double phi = lo + (hi - lo) * unit(rng);
    const double r = std::sqrt(unit(rng));
    return {r * std::cos(phi), r * std::sin(phi)};
  }
  const auto& g = std::get<GaussDensity>(density);
  std::normal_distribution<double> normal(0.0, g.sigma);
  return {normal(rng), normal(rng)};
}

/// Chunked seed derivation (splitmix64 of seed xor chunk tag): sampling in
/// fixed chunks keeps the stream reproducible however the chunks are executed.
inline uint64_t derive_chunk_seed(uint64_t seed, uint64_t chunk) {
  uint64_t z = seed + (chunk + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr long mc_chunk_rounds = 1 << 16;

}  // namespace detail

struct MonteCarloResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  long rounds = 0;
  uint64_t seed = 0;
};

/**
 * Protocol simulation for a classical density: each round draws a phase
 * point, draws one of the K probing times uniformly, and scores the sign of
 * the precessed coordinate (exact zero counts one half). Returns the sample
 * mean and its standard error. Reproducible for a fixed seed via chunked
 * sub-seeds.
 */
inline MonteCarloResult monte_carlo_score(const Density& density, int K, long rounds,
                                          uint64_t seed) {
  if (K < 1) throw domain_error("monte_carlo_score: K must be >= 1");
  if (rounds < 1) throw domain_error("monte_carlo_score: rounds must be >= 1");
  if (const auto* sec = std::get_if<SectorDensity>(&density))
    detail::sector_interval(*sec, K);  // validate the wedge index up front

  double sum = 0.0, sum_sq = 0.0;
  long done = 0;
  for (uint64_t chunk = 0; done < rounds; ++chunk) {
    std::mt19937_64 rng(detail::derive_chunk_seed(seed, chunk));
    std::uniform_int_distribution<int> pick_k(0, K - 1);
    const long in_chunk = std::min<long>(detail::mc_chunk_rounds, rounds - done);
    for (long i = 0; i < in_chunk; ++i) {
      const PhasePoint p = detail::sample(density, K, rng);
      const double theta = 2.0 * M_PI * pick_k(rng) / K;
      const double outcome = pos_indicator(p.a1 * std::cos(theta) + p.a2 * std::sin(theta));
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

struct BoundCheckReport {
  double integral = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int resolution = 0;
};

/**
 * Integrates the exact per-point score against the density (the score only
 * depends on the direction, so the radial part drops out for the isotropic
 * densities) and checks it against the classical window
 * [(1 - 1/K)/2, (1 + 1/K)/2]. A violation cannot come from a classical
 * density, so it is raised as an internal consistency failure.
 */
inline BoundCheckReport bound_check(const Density& density, int K, int resolution) {
  if (K < 1 || K % 2 == 0) throw domain_error("bound_check: K must be odd and >= 1");
  if (resolution < 1) throw domain_error("bound_check: resolution must be >= 1");

  BoundCheckReport report;
  report.resolution = resolution;
  report.lower = 0.5 * (1.0 - 1.0 / K);
  report.upper = 0.5 * (1.0 + 1.0 / K);

  if (const auto* pt = std::get_if<PointDensity>(&density)) {
    report.integral = exact_point_score({pt->a1, pt->a2}, K);
  } else if (const auto* sec = std::get_if<SectorDensity>(&density)) {
    const auto [lo, hi] = detail::sector_interval(*sec, K);
    double sum = 0.0;
    for (int i = 0; i < resolution; ++i) {
      const double phi = lo + (hi - lo) * (i + 0.5) / resolution;
      sum += exact_point_score({std::cos(phi), std::sin(phi)}, K);
    }
    report.integral = sum / resolution;
  } else {
    // Disc and Gaussian are isotropic: integrate over the angle only.
    double sum = 0.0;
    for (int i = 0; i < resolution; ++i) {
      const double phi = 2.0 * M_PI * (i + 0.5) / resolution;
      sum += exact_point_score({std::cos(phi), std::sin(phi)}, K);
    }
    report.integral = sum / resolution;
  }

  const double tol = 1e-9 + 2.0 * M_PI / (K * std::max(resolution, 1));
  if (report.integral < report.lower - tol || report.integral > report.upper + tol)
    throw consistency_error("bound_check: classical density escaped the classical window");
  return report;
}

}  // namespace precession
