// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "precession/errors.hpp"
#include "precession/spin_core.hpp"

namespace precession {

enum class Parity { Even, Odd };

/**
 * Partition of the basis indices {0, ..., dim-1} into residue classes mod K.
 * The averaging superoperator preserves exactly these subspaces. Within a
 * block, consecutive indices differ by K; the even/odd sub-split alternates
 * positions inside the block, which is what decouples the squared averaged
 * sign operator.
 *
 * For a spin the block containing index r holds m = -j + r (label m_bar); for
 * a Fock basis the label is the residue itself.
 */
struct BlockDecomposition {
  struct Block {
    int residue = 0;
    std::vector<int> indices;       // residue, residue+K, ...
    std::vector<int> even_indices;  // positions 0, 2, 4, ... within the block
    std::vector<int> odd_indices;   // positions 1, 3, 5, ...
  };

  int K = 0;
  int dim = 0;
  std::vector<Block> blocks;
};

inline BlockDecomposition decompose_blocks(int dim, int K) {
  if (dim < 1) throw domain_error("decompose_blocks: dim must be >= 1");
  if (K < 1) throw domain_error("decompose_blocks: K must be >= 1");
  BlockDecomposition dec;
  dec.K = K;
  dec.dim = dim;
  const int n_blocks = std::min(K, dim);
  dec.blocks.resize(n_blocks);
  for (int r = 0; r < n_blocks; ++r) {
    auto& blk = dec.blocks[r];
    blk.residue = r;
    for (int i = r, pos = 0; i < dim; i += K, ++pos) {
      blk.indices.push_back(i);
      (pos % 2 == 0 ? blk.even_indices : blk.odd_indices).push_back(i);
    }
  }
  return dec;
}

/**
 * Time average of an observable over the K rotated measurement frames,
 * expressed in the eigenbasis of the rotation generator: entries whose index
 * difference is not a multiple of K are zeroed, all others pass through
 * untouched. The masking introduces no floating error.
 */
inline SymmetricMatrix average_over_orbit(const SymmetricMatrix& a, int K) {
  if (K < 1) throw domain_error("average_over_orbit: K must be >= 1");
  const int d = a.dim();
  SymmetricMatrix out(d);
  for (int i = 0; i < d; ++i)
    for (int k = i; k < d; ++k)
      if ((k - i) % K == 0) out.set(i, k, a(i, k));
  return out;
}

namespace detail {

/// Rectangular slice S[rows, cols] of a generic element evaluator.
template <class ElementFn>
Eigen::MatrixXd cross_matrix(ElementFn&& element, const std::vector<int>& rows,
                             const std::vector<int>& cols) {
  Eigen::MatrixXd a(rows.size(), cols.size());
  for (size_t c = 0; c < cols.size(); ++c)
    for (size_t r = 0; r < rows.size(); ++r)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = element(rows[r], cols[c]);
  return a;
}

/**
 * One parity sector of the squared averaged sign operator restricted to a
 * block: with A = S[even, odd], the odd sector is A^T A and the even sector
 * is A A^T. Assembled directly from an element evaluator so no full matrix
 * is ever materialized.
 */
template <class ElementFn>
Eigen::MatrixXd squared_block(ElementFn&& element, const BlockDecomposition::Block& blk,
                              Parity parity) {
  const Eigen::MatrixXd a = cross_matrix(element, blk.even_indices, blk.odd_indices);
  Eigen::MatrixXd m;
  if (parity == Parity::Odd)
    m.noalias() = a.transpose() * a;
  else
    m.noalias() = a * a.transpose();
  return m;
}

}  // namespace detail

/**
 * Per-block reduction of (E_K[S])^2 for a full sign operator S (spin or
 * truncated Fock): for each residue class returns the requested parity
 * sector. The largest eigenvalue lambda2 over all returned sectors gives the
 * protocol maximum via P = (1 + sqrt(lambda2))/2. A block whose sector holds
 * no basis state contributes a 1x1 zero matrix.
 */
inline std::vector<SymmetricMatrix> squared_block_reduce(const SymmetricMatrix& sgn_op, int K,
                                                         Parity parity = Parity::Odd) {
  if (K < 1) throw domain_error("squared_block_reduce: K must be >= 1");
  const auto dec = decompose_blocks(sgn_op.dim(), K);
  auto element = [&](int i, int k) { return sgn_op(i, k); };
  std::vector<SymmetricMatrix> out;
  out.reserve(dec.blocks.size());
  for (const auto& blk : dec.blocks) {
    const size_t n = (parity == Parity::Odd ? blk.odd_indices : blk.even_indices).size();
    if (n == 0) {
      out.emplace_back(SymmetricMatrix(1));  // placeholder zero sector
      continue;
    }
    Eigen::MatrixXd m = detail::squared_block(element, blk, parity);
    m = ((m + m.transpose()) * 0.5).eval();
    out.push_back(SymmetricMatrix::from_dense(m));
  }
  return out;
}

}  // namespace precession
