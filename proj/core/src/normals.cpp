// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/normals.hpp"

#include <cmath>
#include <iterator>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "facegen/error.hpp"

namespace facegen {
namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;
using BoxPoint = bg::model::point<double, 3, bg::cs::cartesian>;
using Entry = std::pair<BoxPoint, std::size_t>;

}  // namespace

std::vector<Eigen::Vector3d> estimate_normals(std::span<const Eigen::Vector3d> points, int k) {
  if (k < 3) throw std::invalid_argument("normal estimation needs k >= 3");
  if (static_cast<std::size_t>(k) >= points.size())
    throw std::invalid_argument("normal estimation needs k < point count");

  std::vector<Entry> entries;
  entries.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    entries.emplace_back(BoxPoint(points[i].x(), points[i].y(), points[i].z()), i);
  const bgi::rtree<Entry, bgi::rstar<16>> tree(entries.begin(), entries.end());

  std::vector<Eigen::Vector3d> normals(points.size());
  std::vector<Entry> neighbours;
  for (std::size_t i = 0; i < points.size(); ++i) {
    neighbours.clear();
    tree.query(bgi::nearest(entries[i].first, static_cast<unsigned>(k + 1)), std::back_inserter(neighbours));

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& [pt, idx] : neighbours) mean += points[idx];
    mean /= static_cast<double>(neighbours.size());
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
    for (const auto& [pt, idx] : neighbours) {
      const Eigen::Vector3d d = points[idx] - mean;
      covariance += d * d.transpose();
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(covariance);
    const auto& values = eig.eigenvalues();  // ascending
    if (!(values(1) > 1e-12 * values(2)))
      throw GeometryError("degenerate neighbourhood at vertex " + std::to_string(i) +
                          ": its nearest neighbours are collinear");
    Eigen::Vector3d n = eig.eigenvectors().col(0).normalized();
    if (n.z() < 0.0) n = -n;
    normals[i] = n;
  }
  return normals;
}

SphericalAngles to_spherical(const Eigen::Vector3d& normal) {
  SphericalAngles out;
  out.elevation = std::asin(std::clamp(normal.z(), -1.0, 1.0));
  const double planar = normal.x() * normal.x() + normal.y() * normal.y();
  if (planar < 1e-12) return out;
  // A round-off sized n_y must not flip the branch between +pi and -pi.
  const double ny = std::abs(normal.y()) <= 1e-12 * std::sqrt(planar) ? 0.0 : normal.y();
  out.azimuth = std::atan2(ny, normal.x());
  return out;
}

}  // namespace facegen
