// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/gridfit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/CholmodSupport>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCore>

#include "facegen/error.hpp"

namespace facegen {
namespace {

struct CellWeights {
  std::array<Eigen::Index, 4> nodes;
  std::array<double, 4> weights;
};

// Bilinear weights of (x, y) over its cell; points outside the grid use the
// nearest boundary cell.
CellWeights cell_weights(const GridSpec& grid, double x, double y) {
  const double fx = (x - grid.origin.x()) / grid.spacing.x();
  const double fy = (y - grid.origin.y()) / grid.spacing.y();
  const int c = std::clamp(static_cast<int>(std::floor(fx)), 0, grid.cols - 2);
  const int r = std::clamp(static_cast<int>(std::floor(fy)), 0, grid.rows - 2);
  const double tx = fx - c;
  const double ty = fy - r;
  const auto node = [&](int rr, int cc) { return static_cast<Eigen::Index>(rr) * grid.cols + cc; };
  return {{node(r, c), node(r, c + 1), node(r + 1, c), node(r + 1, c + 1)},
          {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty}};
}

}  // namespace

void GridSpec::validate() const {
  if (rows < 2 || cols < 2) throw std::invalid_argument("grid needs at least 2 rows and 2 columns");
  if (!(spacing.x() > 0.0) || !(spacing.y() > 0.0)) throw std::invalid_argument("grid spacing must be positive");
}

double GridSurface::interpolate(double x, double y) const {
  const auto w = cell_weights(grid, x, y);
  double out = 0.0;
  for (int i = 0; i < 4; ++i) out += w.weights[i] * values(w.nodes[i] / grid.cols, w.nodes[i] % grid.cols);
  return out;
}

struct GridFitter::Impl {
  GridSpec grid;
  Eigen::SparseMatrix<double> data;  // locations x nodes
  Eigen::SparseMatrix<double> normal;
  Eigen::Vector2d mid;
  Eigen::Vector2d half;
  Eigen::MatrixX4d basis;  // bilinear basis at the data locations
  Eigen::ColPivHouseholderQR<Eigen::MatrixX4d> basis_qr;

  Eigen::RowVector4d bilinear(const Eigen::Vector2d& p) const {
    const double u = (p.x() - mid.x()) / half.x();
    const double v = (p.y() - mid.y()) / half.y();
    return {1.0, u, v, u * v};
  }
  Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>> solver;
};

GridFitter::GridFitter(const GridSpec& grid, std::span<const Eigen::Vector2d> locations, double lambda)
    : impl_(std::make_unique<Impl>()) {
  grid.validate();
  if (!(lambda > 0.0)) throw std::invalid_argument("gridfit smoothing must be positive");
  impl_->grid = grid;

  // The regularizer vanishes exactly on bilinear node functions; the data
  // term must pin all four of them.
  impl_->half = 0.5 * Eigen::Vector2d((grid.cols - 1) * grid.spacing.x(), (grid.rows - 1) * grid.spacing.y());
  impl_->mid = grid.origin + impl_->half;
  impl_->basis.resize(static_cast<Eigen::Index>(locations.size()), 4);
  for (std::size_t p = 0; p < locations.size(); ++p)
    impl_->basis.row(static_cast<Eigen::Index>(p)) = impl_->bilinear(locations[p]);
  {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(impl_->basis.transpose() * impl_->basis);
    if (locations.empty() || !(eig.eigenvalues()(0) > 1e-12 * eig.eigenvalues()(3)))
      throw SingularSystemError("gridfit: " + std::to_string(locations.size()) +
                                " data locations cannot pin the bilinear null space of the smoother");
  }
  impl_->basis_qr.compute(impl_->basis);

  const Eigen::Index nodes = static_cast<Eigen::Index>(grid.rows) * grid.cols;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(locations.size() * 4);
  for (std::size_t p = 0; p < locations.size(); ++p) {
    const auto w = cell_weights(grid, locations[p].x(), locations[p].y());
    for (int i = 0; i < 4; ++i)
      if (w.weights[i] != 0.0) triplets.emplace_back(static_cast<Eigen::Index>(p), w.nodes[i], w.weights[i]);
  }
  impl_->data.resize(static_cast<Eigen::Index>(locations.size()), nodes);
  impl_->data.setFromTriplets(triplets.begin(), triplets.end());

  triplets.clear();
  Eigen::Index row = 0;
  const auto node = [&](int r, int c) { return static_cast<Eigen::Index>(r) * grid.cols + c; };
  const double sx = 1.0 / (grid.spacing.x() * grid.spacing.x());
  const double sy = 1.0 / (grid.spacing.y() * grid.spacing.y());
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 1; c + 1 < grid.cols; ++c, ++row) {
      triplets.emplace_back(row, node(r, c - 1), sx);
      triplets.emplace_back(row, node(r, c), -2.0 * sx);
      triplets.emplace_back(row, node(r, c + 1), sx);
    }
  }
  for (int r = 1; r + 1 < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c, ++row) {
      triplets.emplace_back(row, node(r - 1, c), sy);
      triplets.emplace_back(row, node(r, c), -2.0 * sy);
      triplets.emplace_back(row, node(r + 1, c), sy);
    }
  }
  Eigen::SparseMatrix<double> smoother(row, nodes);
  smoother.setFromTriplets(triplets.begin(), triplets.end());

  impl_->normal = Eigen::SparseMatrix<double>(impl_->data.transpose() * impl_->data) +
                  lambda * Eigen::SparseMatrix<double>(smoother.transpose() * smoother);
  impl_->solver.compute(impl_->normal);
  if (impl_->solver.info() != Eigen::Success)
    throw SingularSystemError("gridfit: normal equations are not positive definite");
}

GridFitter::~GridFitter() = default;
GridFitter::GridFitter(GridFitter&&) noexcept = default;
GridFitter& GridFitter::operator=(GridFitter&&) noexcept = default;

GridSurface GridFitter::fit(std::span<const double> values) const {
  if (static_cast<Eigen::Index>(values.size()) != impl_->data.rows())
    throw std::invalid_argument("gridfit: value count does not match data locations");
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  // Bilinear functions pass through the fit exactly, so the sparse solve
  // only sees what remains after the least-squares bilinear part.
  const Eigen::Vector4d trend = impl_->basis_qr.solve(v);
  const Eigen::VectorXd rest = v - impl_->basis * trend;
  const Eigen::VectorXd solution = impl_->solver.solve(impl_->data.transpose() * rest);
  if (impl_->solver.info() != Eigen::Success || !solution.allFinite())
    throw SingularSystemError("gridfit: solve failed");
  GridSurface out;
  out.grid = impl_->grid;
  out.values.resize(impl_->grid.rows, impl_->grid.cols);
  for (int r = 0; r < impl_->grid.rows; ++r)
    for (int c = 0; c < impl_->grid.cols; ++c)
      out.values(r, c) = solution(static_cast<Eigen::Index>(r) * impl_->grid.cols + c) +
                         impl_->bilinear(impl_->grid.node(r, c)).dot(trend);
  return out;
}

double GridFitter::data_residual(const GridSurface& surface, std::span<const double> values) const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(surface.grid.rows) * surface.grid.cols);
  for (int r = 0; r < surface.grid.rows; ++r)
    for (int c = 0; c < surface.grid.cols; ++c)
      flat(static_cast<Eigen::Index>(r) * surface.grid.cols + c) = surface.values(r, c);
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  return (impl_->data * flat - v).squaredNorm();
}

GridSurface gridfit(std::span<const Eigen::Vector3d> samples, const GridSpec& grid, double lambda) {
  std::vector<Eigen::Vector2d> locations;
  std::vector<double> values;
  locations.reserve(samples.size());
  values.reserve(samples.size());
  for (const auto& s : samples) {
    locations.emplace_back(s.x(), s.y());
    values.push_back(s.z());
  }
  return GridFitter(grid, locations, lambda).fit(values);
}

}  // namespace facegen
