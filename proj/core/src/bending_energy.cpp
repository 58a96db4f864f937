// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/bending_energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "facegen/error.hpp"
#include "facegen/hashing.hpp"
#include "facegen/parallel.hpp"

namespace facegen {
namespace {

// Sampled target coordinates, centred. B annihilates constants, so centring
// leaves the quadratic form unchanged and keeps round-off proportional to the
// face extent rather than its offset.
Eigen::MatrixX3d centred_samples(const BendingSystem& system, const Face& target) {
  const auto n = static_cast<Eigen::Index>(system.sample_indices.size());
  Eigen::MatrixX3d v(n, 3);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto p = system.sample_indices[static_cast<std::size_t>(a)];
    if (p >= target.vertex_count())
      throw std::out_of_range("sample index " + std::to_string(p) + " out of range for a face with " +
                              std::to_string(target.vertex_count()) + " vertices");
    v.row(a) = target.vertices[p].transpose();
  }
  v.rowwise() -= v.colwise().mean();
  return v;
}

}  // namespace

double tps_kernel(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double r = (a - b).norm();
  if (r == 0.0) return 0.0;
  return r * r * std::log(r);
}

BendingSystem build_bending_system(const Face& source, std::span<const std::size_t> sample_indices) {
  const std::size_t n = sample_indices.size();
  if (n < kMinVertexCount)
    throw std::invalid_argument("bending system needs at least 8 samples, got " + std::to_string(n));

  BendingSystem system;
  system.source_identity = source.identity;
  system.category = source.expression;
  system.sample_indices.assign(sample_indices.begin(), sample_indices.end());
  system.sample_points.reserve(n);
  for (std::size_t p : sample_indices) {
    if (p >= source.vertex_count())
      throw std::out_of_range("sample index " + std::to_string(p) + " out of range for a face with " +
                              std::to_string(source.vertex_count()) + " vertices");
    system.sample_points.push_back(source.vertices[p]);
  }

  {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto key = [&](std::size_t a) {
      const auto& v = system.sample_points[a];
      return std::array{v.x(), v.y(), v.z()};
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (std::size_t i = 1; i < n; ++i)
      if (key(order[i]) == key(order[i - 1]))
        throw SingularSystemError("singular bending system for identity " + std::to_string(source.identity) +
                                  ": sampled vertices " + std::to_string(sample_indices[order[i - 1]]) +
                                  " and " + std::to_string(sample_indices[order[i]]) + " coincide");
  }

  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd affine(rows, 4);
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : system.sample_points) centroid += p;
  centroid /= static_cast<double>(n);
  for (Eigen::Index a = 0; a < rows; ++a) {
    affine(a, 0) = 1.0;
    affine.block<1, 3>(a, 1) = (system.sample_points[static_cast<std::size_t>(a)] - centroid).transpose();
  }

  const Eigen::JacobiSVD<Eigen::MatrixX3d> spread(affine.rightCols<3>());
  const auto& sv = spread.singularValues();
  if (!(sv(2) > 1e-10 * sv(0)))
    throw SingularSystemError("singular bending system for identity " + std::to_string(source.identity) +
                              ": the " + std::to_string(n) + " sampled vertices are coplanar");

  Eigen::MatrixXd kernel(rows, rows);
  for (Eigen::Index a = 0; a < rows; ++a) {
    kernel(a, a) = 0.0;
    for (Eigen::Index b = a + 1; b < rows; ++b)
      kernel(a, b) = kernel(b, a) =
          tps_kernel(system.sample_points[static_cast<std::size_t>(a)], system.sample_points[static_cast<std::size_t>(b)]);
  }

  // With Q = [Y Z] from a QR of the affine block, the upper-left block of the
  // inverse of [[K, S], [S^T, 0]] is Z (Z^T K Z)^-1 Z^T. Z^T K Z is positive
  // definite because r^2 log r is conditionally positive definite of order 2.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(affine);
  const auto reflectors = qr.householderQ();
  Eigen::MatrixXd rotated = kernel;
  rotated.applyOnTheLeft(reflectors.adjoint());
  rotated.applyOnTheRight(reflectors);
  const Eigen::Index inner = rows - 4;
  Eigen::MatrixXd projected = rotated.bottomRightCorner(inner, inner);
  projected = 0.5 * (projected + projected.transpose()).eval();

  const Eigen::LLT<Eigen::MatrixXd> llt(projected);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-15))
    throw SingularSystemError("singular bending system for identity " + std::to_string(source.identity) +
                              ": projected kernel is not positive definite (near-duplicate samples?)");

  Eigen::MatrixXd bending = Eigen::MatrixXd::Zero(rows, rows);
  bending.bottomRightCorner(inner, inner) = llt.solve(Eigen::MatrixXd::Identity(inner, inner));
  bending.applyOnTheLeft(reflectors);
  bending.applyOnTheRight(reflectors.adjoint());
  system.bending = 0.5 * (bending + bending.transpose());
  return system;
}

double raw_bending_energy(const BendingSystem& system, const Face& target) {
  const Eigen::MatrixX3d v = centred_samples(system, target);
  return (v.array() * (system.bending * v).array()).sum();
}

double bending_energy_scale(const BendingSystem& system, const Face& target) {
  return system.bending.norm() * centred_samples(system, target).squaredNorm();
}

double bending_energy(const BendingSystem& system, const Face& target) {
  const double raw = raw_bending_energy(system, target);
  if (raw >= 0.0) return raw;
  const double tol = 1e-8 * bending_energy_scale(system, target);
  if (raw >= -tol) return 0.0;
  throw GeometryError("negative bending energy " + std::to_string(raw) + " from identity " +
                      std::to_string(system.source_identity) + " to identity " +
                      std::to_string(target.identity) + " exceeds round-off tolerance " + std::to_string(tol));
}

std::vector<std::size_t> choose_sample_indices(std::size_t vertex_count, std::size_t count, std::uint64_t seed) {
  if (count > vertex_count)
    throw std::invalid_argument("cannot sample " + std::to_string(count) + " of " +
                                std::to_string(vertex_count) + " vertices");
  std::vector<std::size_t> pool(vertex_count);
  std::iota(pool.begin(), pool.end(), 0);
  std::mt19937_64 rng(StableHasher().add(seed).add(std::string_view("samples")).digest());
  for (std::size_t i = 0; i < count && count < vertex_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (vertex_count - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::size_t PairwiseEnergyTable::index_of(std::int64_t identity) const {
  const auto it = std::lower_bound(identities.begin(), identities.end(), identity);
  if (it == identities.end() || *it != identity)
    throw std::out_of_range("identity " + std::to_string(identity) + " not in energy table for " +
                            category.name());
  return static_cast<std::size_t>(it - identities.begin());
}

PairwiseEnergyTable pairwise_energy_table(const Corpus& corpus, const ExpressionLabel& category,
                                          std::size_t sample_count, std::uint64_t seed, unsigned workers) {
  const auto faces = corpus.category(category);
  if (faces.size() < 2)
    throw std::invalid_argument("category " + category.name() + " needs at least 2 faces, has " +
                                std::to_string(faces.size()));
  if (sample_count < kMinVertexCount || sample_count > corpus.vertex_count())
    throw std::invalid_argument("sample count must lie in [8, " + std::to_string(corpus.vertex_count()) + "]");

  PairwiseEnergyTable table;
  table.category = category;
  for (const Face* f : faces) table.identities.push_back(f->identity);
  table.sample_indices = choose_sample_indices(corpus.vertex_count(), sample_count, seed);

  const std::size_t n = faces.size();
  std::vector<BendingSystem> systems(n);
  parallel_for(n, workers, [&](std::size_t i) {
    try {
      systems[i] = build_bending_system(*faces[i], table.sample_indices);
    } catch (const SingularSystemError& e) {
      throw SingularSystemError(category.name() + ", identity " + std::to_string(faces[i]->identity) + ": " +
                                e.what());
    }
  });

  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd raw(size, size), scale(size, size);
  parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
      raw(r, c) = raw_bending_energy(systems[i], *faces[j]);
      scale(r, c) = bending_energy_scale(systems[i], *faces[j]);
    }
  });

  if (!raw.allFinite()) throw GeometryError("non-finite bending energy in " + category.name());
  const double table_max = std::max(0.0, raw.maxCoeff());
  table.gamma = raw;
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = 0; c < size; ++c) {
      const double value = raw(r, c);
      if (value >= 0.0) continue;
      const double tol = 1e-8 * std::max(table_max, scale(r, c));
      if (value < -tol)
        throw GeometryError("negative bending energy " + std::to_string(value) + " in " + category.name() +
                            " from identity " + std::to_string(table.identities[static_cast<std::size_t>(r)]) +
                            " to identity " + std::to_string(table.identities[static_cast<std::size_t>(c)]));
      table.gamma(r, c) = 0.0;
    }
  }
  return table;
}

void write_energy_table_csv(const PairwiseEnergyTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.identities.size(); ++i) out << (i ? "," : "") << table.identities[i];
  out << '\n';
  const auto prec = out.precision(17);
  for (Eigen::Index r = 0; r < table.gamma.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.gamma.cols(); ++c) out << (c ? "," : "") << table.gamma(r, c);
    out << '\n';
  }
  out.precision(prec);
}

}  // namespace facegen
