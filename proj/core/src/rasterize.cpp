// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/rasterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "facegen/error.hpp"
#include "facegen/normals.hpp"

namespace facegen {

GridSpec face_grid(std::span<const Eigen::Vector3d> vertices, const RasterConfig& config) {
  if (vertices.empty()) throw std::invalid_argument("cannot grid an empty point cloud");
  if (config.grid_size < kImageSize)
    throw GeometryError("grid of " + std::to_string(config.grid_size) + " nodes cannot host a " +
                        std::to_string(kImageSize) + "-pixel crop");
  if (!(config.margin >= 1.0)) throw std::invalid_argument("grid margin must be >= 1");
  Eigen::Vector2d lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v.head<2>());
    hi = hi.cwiseMax(v.head<2>());
  }
  const Eigen::Vector2d extent = (hi - lo) * config.margin;
  if (!(extent.minCoeff() > 0.0)) throw GeometryError("point cloud has a degenerate x-y bounding box");
  GridSpec grid;
  grid.rows = grid.cols = config.grid_size;
  grid.spacing = extent / static_cast<double>(config.grid_size - 1);
  grid.origin = 0.5 * (lo + hi) - 0.5 * extent;
  return grid;
}

FittedChannels fit_channels(const Face& face, const RasterConfig& config) {
  const GridSpec grid = face_grid(face.vertices, config);
  const auto normals = estimate_normals(face.vertices, config.normal_neighbors);

  const std::size_t n = face.vertices.size();
  std::vector<Eigen::Vector2d> locations(n);
  std::vector<double> depth(n), azimuth(n), elevation(n);
  for (std::size_t p = 0; p < n; ++p) {
    locations[p] = face.vertices[p].head<2>();
    depth[p] = face.vertices[p].z();
    const auto angles = to_spherical(normals[p]);
    azimuth[p] = angles.azimuth;
    elevation[p] = angles.elevation;
  }
  const GridFitter fitter(grid, locations, config.lambda);
  return {fitter.fit(depth), fitter.fit(azimuth), fitter.fit(elevation)};
}

Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> normalize_channel(const Eigen::MatrixXd& values) {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> out(values.rows(), values.cols());
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  if (!(hi - lo > 1e-9 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))))) {
    out.setConstant(128);
    return out;
  }
  const double scale = 255.0 / (hi - lo);
  for (Eigen::Index r = 0; r < values.rows(); ++r)
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      out(r, c) = static_cast<std::uint8_t>(std::clamp(std::floor((values(r, c) - lo) * scale + 0.5), 0.0, 255.0));
  return out;
}

std::array<int, 2> find_nosetip(const GridSurface& depth) {
  const auto& v = depth.values;
  const double center_r = 0.5 * static_cast<double>(v.rows() - 1);
  const double center_c = 0.5 * static_cast<double>(v.cols() - 1);
  std::array<int, 2> best{0, 0};
  double best_value = -std::numeric_limits<double>::infinity();
  double best_distance = std::numeric_limits<double>::infinity();
  for (int r = 0; r < v.rows(); ++r) {
    for (int c = 0; c < v.cols(); ++c) {
      const double value = v(r, c);
      const double distance = std::hypot(r - center_r, c - center_c);
      if (value > best_value || (value == best_value && distance < best_distance)) {
        best = {r, c};
        best_value = value;
        best_distance = distance;
      }
    }
  }
  return best;
}

int crop_start(int center, int extent, int size) {
  if (extent < size) throw GeometryError("grid too small for a " + std::to_string(size) + "-pixel crop");
  return std::clamp(center - size / 2, 0, extent - size);
}

ChannelImage rasterize_face(const Face& face, const RasterConfig& config) {
  const FittedChannels channels = fit_channels(face, config);
  const std::array<Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>, kChannelCount> planes{
      normalize_channel(channels.depth.values), normalize_channel(channels.azimuth.values),
      normalize_channel(channels.elevation.values)};

  ChannelImage image;
  image.source = face.identity;
  image.label = face.expression.emotion();
  image.nosetip = find_nosetip(channels.depth);
  const int rows = channels.depth.grid.rows;
  const int row0 = crop_start(image.nosetip[0], rows);
  const int col0 = crop_start(image.nosetip[1], channels.depth.grid.cols);

  // Grid rows grow with y; image rows grow downward, so the top image row is
  // the last grid row of the window.
  image.pixels.resize(static_cast<std::size_t>(kImageSize) * kImageSize * kChannelCount);
  for (int ir = 0; ir < kImageSize; ++ir) {
    const int gr = row0 + kImageSize - 1 - ir;
    for (int ic = 0; ic < kImageSize; ++ic) {
      const int gc = col0 + ic;
      for (int ch = 0; ch < kChannelCount; ++ch)
        image.pixels[(static_cast<std::size_t>(ir) * kImageSize + ic) * kChannelCount + ch] = planes[ch](gr, gc);
    }
  }
  return image;
}

}  // namespace facegen
