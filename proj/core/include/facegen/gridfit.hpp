// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>

#include <Eigen/Core>

namespace facegen {

/// Regular x-y grid; node (r, c) sits at origin + (c * spacing.x, r * spacing.y).
struct GridSpec {
  int rows = 0;
  int cols = 0;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  Eigen::Vector2d spacing = Eigen::Vector2d::Ones();

  Eigen::Vector2d node(int row, int col) const {
    return origin + Eigen::Vector2d(col * spacing.x(), row * spacing.y());
  }
  /// Throws std::invalid_argument unless rows, cols >= 2 and spacing > 0.
  void validate() const;
};

/// Node values of a fitted surface; values(r, c) belongs to grid.node(r, c).
struct GridSurface {
  GridSpec grid;
  Eigen::MatrixXd values;

  /// Bilinear interpolation; locations outside the grid use the nearest cell.
  double interpolate(double x, double y) const;
};

/// Least-squares surface fit over a fixed grid and fixed data locations:
///
///   minimise  sum_p (bilinear(grid, x_p, y_p) - v_p)^2
///           + lambda * (sum of squared row second differences / dx^2
///                       + sum of squared column second differences / dy^2)
///
/// The normal equations are factorised once at construction, so fitting
/// several value channels at the same locations costs one solve each.
class GridFitter {
 public:
  /// Throws SingularSystemError when the data cannot pin the regularizer's
  /// null space (bilinear functions a + bx + cy + dxy), std::invalid_argument
  /// for lambda <= 0 or an invalid grid.
  GridFitter(const GridSpec& grid, std::span<const Eigen::Vector2d> locations, double lambda);
  ~GridFitter();
  GridFitter(GridFitter&&) noexcept;
  GridFitter& operator=(GridFitter&&) noexcept;

  GridSurface fit(std::span<const double> values) const;
  /// Sum of squared differences between the surface and the data values.
  double data_residual(const GridSurface& surface, std::span<const double> values) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot fit of (x, y, v) samples.
GridSurface gridfit(std::span<const Eigen::Vector3d> samples, const GridSpec& grid, double lambda);

}  // namespace facegen
