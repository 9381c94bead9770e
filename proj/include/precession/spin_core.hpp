// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "precession/errors.hpp"

namespace precession {

/**
 * Spin quantum number j, stored exactly as the integer 2j so that
 * half-integer spins never touch floating point. Magnetic quantum numbers
 * are handled the same way (as 2m).
 *
 * Basis convention used throughout the library: the z basis is ordered by
 * ascending m, so index i corresponds to m = -j + i, i.e. i = m + j.
 */
class SpinQuantum {
 public:
  explicit SpinQuantum(int two_j) : two_j_(two_j) {
    if (two_j < 0) throw domain_error("SpinQuantum: 2j must be non-negative");
  }

  static SpinQuantum from_dimension(int dim) {
    if (dim < 1) throw domain_error("SpinQuantum: dimension must be >= 1");
    return SpinQuantum(dim - 1);
  }

  int two_j() const { return two_j_; }
  int dimension() const { return two_j_ + 1; }
  double j() const { return 0.5 * two_j_; }

  /// 2m for basis index i in [0, dim): two_m = -2j + 2i.
  int two_m_at(int index) const { return -two_j_ + 2 * index; }

  int index_of_two_m(int two_m) const {
    check_two_m(two_m);
    return (two_m + two_j_) / 2;
  }

  /// Throws unless |m| <= j and m has the same half-integer character as j.
  void check_two_m(int two_m) const {
    if (std::abs(two_m) > two_j_ || ((two_m - two_j_) % 2) != 0)
      throw domain_error("SpinQuantum: invalid magnetic number 2m=" +
                         std::to_string(two_m) + " for 2j=" + std::to_string(two_j_));
  }

 private:
  int two_j_;
};

/// Dense real symmetric matrix. Construction enforces exact symmetry:
/// set() writes both triangles and from_dense() rejects any bitwise mismatch.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int dim) : m_(Eigen::MatrixXd::Zero(dim, dim)) {
    if (dim < 1) throw domain_error("SymmetricMatrix: dim must be >= 1");
  }

  static SymmetricMatrix from_dense(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw domain_error("SymmetricMatrix: matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j)
        if (m(i, j) != m(j, i))
          throw domain_error("SymmetricMatrix: input is not exactly symmetric");
    SymmetricMatrix s(static_cast<int>(m.rows()));
    s.m_ = m;
    return s;
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }

  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  const Eigen::MatrixXd& dense() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

/// Dense complex Hermitian matrix; construction enforces entries(i,j) ==
/// conj(entries(j,i)) exactly.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int dim) : m_(Eigen::MatrixXcd::Zero(dim, dim)) {
    if (dim < 1) throw domain_error("HermitianMatrix: dim must be >= 1");
  }

  static HermitianMatrix from_dense(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw domain_error("HermitianMatrix: matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j <= i; ++j)
        if (m(i, j) != std::conj(m(j, i)))
          throw domain_error("HermitianMatrix: input is not exactly Hermitian");
    HermitianMatrix h(static_cast<int>(m.rows()));
    h.m_ = m;
    return h;
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  std::complex<double> operator()(int i, int j) const { return m_(i, j); }

  void set(int i, int j, std::complex<double> v) {
    m_(i, j) = v;
    m_(j, i) = std::conj(v);
  }

  const Eigen::MatrixXcd& dense() const { return m_; }

 private:
  Eigen::MatrixXcd m_;
};

/// Eigendecomposition of a real symmetric matrix: eigenvalues ascending,
/// eigenvector columns orthonormal and matching the eigenvalue order.
struct Eigensystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Complex counterpart for Hermitian input.
struct ComplexEigensystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
};

inline Eigensystem eigensolve(const SymmetricMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.dense());
  if (es.info() != Eigen::Success)
    throw convergence_error("eigensolve: symmetric eigensolver did not converge (dim=" +
                            std::to_string(a.dim()) + ")");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline ComplexEigensystem eigensolve(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.dense());
  if (es.info() != Eigen::Success)
    throw convergence_error("eigensolve: Hermitian eigensolver did not converge (dim=" +
                            std::to_string(a.dim()) + ")");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// J_z in its own eigenbasis: diag(-j, ..., j), ascending m, hbar = 1.
inline SymmetricMatrix build_jz(const SpinQuantum& spin) {
  SymmetricMatrix jz(spin.dimension());
  for (int i = 0; i < spin.dimension(); ++i) jz.set(i, i, 0.5 * spin.two_m_at(i));
  return jz;
}

/// J_x = (J_+ + J_-)/2 in the z basis: real symmetric tridiagonal with
/// entries <m+1|J_x|m> = sqrt(j(j+1) - m(m+1))/2.
inline SymmetricMatrix build_jx(const SpinQuantum& spin) {
  const int d = spin.dimension();
  const long long tj = spin.two_j();
  SymmetricMatrix jx(d);
  for (int i = 0; i + 1 < d; ++i) {
    const long long tm = spin.two_m_at(i);
    // j(j+1) - m(m+1) = [2j(2j+2) - 2m(2m+2)] / 4, computed in integers.
    const long long num = tj * (tj + 2) - tm * (tm + 2);
    jx.set(i + 1, i, 0.25 * std::sqrt(static_cast<double>(num)));
  }
  return jx;
}

/// J_y = (J_+ - J_-)/2i in the z basis (purely imaginary off-diagonal).
inline HermitianMatrix build_jy(const SpinQuantum& spin) {
  const int d = spin.dimension();
  const long long tj = spin.two_j();
  HermitianMatrix jy(d);
  for (int i = 0; i + 1 < d; ++i) {
    const long long tm = spin.two_m_at(i);
    const long long num = tj * (tj + 2) - tm * (tm + 2);
    jy.set(i + 1, i, std::complex<double>(0.0, -0.25 * std::sqrt(static_cast<double>(num))));
  }
  return jy;
}

/**
 * Operator sign function via spectral decomposition: sum over eigenpairs of
 * sgn(lambda) v v^T, with sgn(0) = 0. Eigenvalues with |lambda| below
 * 1e-11 * max(1, |lambda|_max) are treated as zero, which resolves the exact
 * kernels (J_x at integer j) well below their unit-scale spectral gaps.
 *
 * This is the brute-force reference for the closed-form sign matrices.
 */
inline SymmetricMatrix spectral_sign(const SymmetricMatrix& a) {
  const Eigensystem es = eigensolve(a);
  const int d = a.dim();
  const double lmax = std::max(std::abs(es.eigenvalues(0)), std::abs(es.eigenvalues(d - 1)));
  const double zero_tol = 1e-11 * std::max(1.0, lmax);
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i) {
    const double l = es.eigenvalues(i);
    s(i) = std::abs(l) <= zero_tol ? 0.0 : (l > 0 ? 1.0 : -1.0);
  }
  Eigen::MatrixXd r = es.eigenvectors * s.asDiagonal() * es.eigenvectors.transpose();
  r = ((r + r.transpose()) * 0.5).eval();
  return SymmetricMatrix::from_dense(r);
}

}  // namespace precession
