// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "facegen/face_corpus.hpp"

namespace facegen {

/// Unit normals from PCA plane fits over each vertex and its k nearest
/// neighbours, oriented to n_z >= 0. Throws GeometryError naming the vertex
/// when a neighbourhood is collinear.
std::vector<Eigen::Vector3d> estimate_normals(std::span<const Eigen::Vector3d> points, int k);

inline std::vector<Eigen::Vector3d> estimate_normals(const Face& face, int k) {
  return estimate_normals(face.vertices, k);
}

struct SphericalAngles {
  double azimuth = 0.0;    // atan2(n_y, n_x) in (-pi, pi]
  double elevation = 0.0;  // asin(n_z)
};

/// Azimuth is 0 when n_x^2 + n_y^2 < 1e-12. A vanishing n_y on the negative x
/// axis maps to +pi, never -pi.
SphericalAngles to_spherical(const Eigen::Vector3d& normal);

}  // namespace facegen
