// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "facegen/face_corpus.hpp"

namespace facegen {

/// Thin-plate kernel r^2 log r for r = |a - b|; exactly 0 at r = 0.
double tps_kernel(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

/// Bending matrix of one source face: the upper-left P'xP' block of the
/// inverse of [[K, S], [S^T, 0]] built on the sampled source vertices.
/// B is symmetric, positive semi-definite, and annihilates [1, x, y, z].
struct BendingSystem {
  std::int64_t source_identity = 0;
  ExpressionLabel category = ExpressionLabel::neutral();
  std::vector<std::size_t> sample_indices;
  Vertices sample_points;
  Eigen::MatrixXd bending;
};

/// Throws SingularSystemError for duplicate or coplanar samples (naming the
/// offending indices) and std::out_of_range for bad indices.
BendingSystem build_bending_system(const Face& source, std::span<const std::size_t> sample_indices);

/// x^T B x + y^T B y + z^T B z over the target's sampled coordinates, without
/// any clamping.
double raw_bending_energy(const BendingSystem& system, const Face& target);

/// Upper bound on |raw_bending_energy| from Cauchy-Schwarz:
/// ||B||_F * sum over axes of ||v_axis||^2. Used as the scale for relative
/// round-off tolerances.
double bending_energy_scale(const BendingSystem& system, const Face& target);

/// Directed bending energy gamma(source -> target). Values in [-tol, 0) with
/// tol = 1e-8 * bending_energy_scale are clamped to 0; anything below -tol
/// throws GeometryError.
double bending_energy(const BendingSystem& system, const Face& target);

/// Sorted, distinct vertex indices; deterministic in seed. Returns 0..P-1
/// when count == vertex_count.
std::vector<std::size_t> choose_sample_indices(std::size_t vertex_count, std::size_t count,
                                               std::uint64_t seed);

/// Directed energies gamma[i][j] = gamma(face_i -> face_j) for one category.
struct PairwiseEnergyTable {
  ExpressionLabel category = ExpressionLabel::neutral();
  std::vector<std::int64_t> identities;  // row/column order, ascending
  std::vector<std::size_t> sample_indices;
  Eigen::MatrixXd gamma;

  std::size_t size() const { return identities.size(); }
  /// Row/column of an identity; throws std::out_of_range if absent.
  std::size_t index_of(std::int64_t identity) const;
};

/// Builds one bending system per face (reused for every target) over one
/// shared sample set. Raw entries in [-tol, 0) with tol = 1e-8 * table max
/// are clamped to 0; lower entries throw GeometryError. The result does not
/// depend on `workers`.
PairwiseEnergyTable pairwise_energy_table(const Corpus& corpus, const ExpressionLabel& category,
                                          std::size_t sample_count, std::uint64_t seed,
                                          unsigned workers = 1);

/// Header row of identities, then one row of gamma values per source.
void write_energy_table_csv(const PairwiseEnergyTable& table, std::ostream& out);

}  // namespace facegen
