// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "facegen/face_corpus.hpp"

namespace facegen {

/// Analytic face model behind the synthetic corpus generator.
///
/// A face is a height field over an elliptical x-y domain: a quadratic dome,
/// Gaussian bumps for nose, cheeks, brow and chin, and a few low-frequency
/// cosine terms. Identity perturbs bump amplitudes, widths, the nose centre
/// and the face extent. Expressions add fixed smooth 3D displacement fields
/// scaled by level / 3.
class SyntheticFaceModel {
 public:
  static SyntheticFaceModel for_identity(std::uint64_t seed, std::int64_t identity);

  /// Neutral surface height at (x, y), millimetres.
  double height(double x, double y) const;
  /// Maps unit-disk lattice coordinates to the face's x-y domain.
  Eigen::Vector2d to_domain(const Eigen::Vector2d& uv) const;
  Eigen::Vector2d nose_center() const { return nose_center_; }
  double half_width() const { return half_width_; }
  double half_height() const { return half_height_; }

  /// Vertex for lattice point `uv` under an expression.
  Eigen::Vector3d vertex(const Eigen::Vector2d& uv, const ExpressionLabel& expression,
                         double expression_gain = 1.0) const;

 private:
  SyntheticFaceModel() = default;

  double half_width_ = 70.0;
  double half_height_ = 90.0;
  Eigen::Vector2d nose_center_{0.0, -5.0};
  double nose_amplitude_ = 22.0;
  Eigen::Vector2d nose_sigma_{9.0, 14.0};
  double cheek_amplitude_ = 7.0;
  double brow_amplitude_ = 6.0;
  double chin_amplitude_ = 5.0;
  struct Wave {
    Eigen::Vector2d frequency;
    double amplitude;
    double phase;
  };
  std::vector<Wave> waves_;
};

/// Expression displacement at domain point (x, y) for a label at full gain.
Eigen::Vector3d expression_displacement(const ExpressionLabel& expression, double x, double y);

/// P points in the unit disk (sunflower lattice); shared by every synthetic
/// face so vertex p is corresponded by construction.
std::vector<Eigen::Vector2d> face_lattice(std::size_t vertex_count);

struct SyntheticCorpusOptions {
  /// Multiplies every expression displacement field.
  double expression_gain = 1.0;
};

/// Deterministic in (seed, parameters). Identities are 0..n_identities-1.
Corpus generate_synthetic_corpus(std::uint64_t seed, int n_identities, std::size_t vertex_count,
                                 const std::vector<ExpressionLabel>& categories,
                                 const SyntheticCorpusOptions& options = {});

}  // namespace facegen
