// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "facegen/face_corpus.hpp"
#include "facegen/gridfit.hpp"

namespace facegen {

struct RasterConfig {
  int grid_size = 320;
  /// Grid extent relative to the face's x-y bounding box.
  double margin = 1.1;
  double lambda = 1e-5;
  int normal_neighbors = 12;
};

inline constexpr int kImageSize = 224;
inline constexpr int kChannelCount = 3;

/// 224x224 image with channels (depth, azimuth, elevation). Row 0 is the top
/// of the face (largest y).
struct ChannelImage {
  std::vector<std::uint8_t> pixels;  // kImageSize * kImageSize * 3, interleaved
  std::int64_t source = 0;
  Emotion label = Emotion::neutral;
  std::array<int, 2> nosetip{};  // grid (row, col) the crop is centred on

  std::uint8_t at(int row, int col, int channel) const {
    return pixels[(static_cast<std::size_t>(row) * kImageSize + col) * kChannelCount + channel];
  }
};

/// Grid and the three fitted surfaces before normalisation and cropping.
struct FittedChannels {
  GridSurface depth;
  GridSurface azimuth;
  GridSurface elevation;
};

/// Square grid_size x grid_size grid over margin times the x-y bounding box,
/// centred on the box.
GridSpec face_grid(std::span<const Eigen::Vector3d> vertices, const RasterConfig& config);

FittedChannels fit_channels(const Face& face, const RasterConfig& config);

/// Min-max maps a channel to 0..255 with round-half-up; a constant channel
/// maps to 128.
Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> normalize_channel(
    const Eigen::MatrixXd& values);

/// Grid node of maximum depth; ties go to the node nearest the grid centre,
/// then to the first in row-major order.
std::array<int, 2> find_nosetip(const GridSurface& depth);

/// First row/col of the crop window centred on `center`, shifted to stay
/// inside [0, extent).
int crop_start(int center, int extent, int size = kImageSize);

ChannelImage rasterize_face(const Face& face, const RasterConfig& config = {});

}  // namespace facegen
