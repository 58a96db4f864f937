// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/synthetic_corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "facegen/hashing.hpp"

namespace facegen {
namespace {

double gauss(double dx, double dy, double sx, double sy) {
  return std::exp(-0.5 * (dx * dx / (sx * sx) + dy * dy / (sy * sy)));
}

// Mirrored pair of Gaussian windows at (+-cx, cy); `side` is +1 on the right.
template <typename Fn>
Eigen::Vector3d mirrored(double x, double y, double cx, double cy, double sigma, Fn&& field) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (double side : {-1.0, 1.0}) out += gauss(x - side * cx, y - cy, sigma, sigma) * field(side);
  return out;
}

}  // namespace

SyntheticFaceModel SyntheticFaceModel::for_identity(std::uint64_t seed, std::int64_t identity) {
  std::mt19937_64 rng(StableHasher().add(seed).add(identity).add(std::string_view("identity")).digest());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  SyntheticFaceModel m;
  m.half_width_ = 70.0 * (1.0 + 0.08 * unit(rng));
  m.half_height_ = 90.0 * (1.0 + 0.08 * unit(rng));
  m.nose_center_ = {2.0 * unit(rng), -5.0 + 3.0 * unit(rng)};
  m.nose_amplitude_ = 22.0 * (1.0 + 0.1 * unit(rng));
  m.nose_sigma_ = {9.0 * (1.0 + 0.1 * unit(rng)), 14.0 * (1.0 + 0.1 * unit(rng))};
  m.cheek_amplitude_ = 7.0 * (1.0 + 0.2 * unit(rng));
  m.brow_amplitude_ = 6.0 * (1.0 + 0.2 * unit(rng));
  m.chin_amplitude_ = 5.0 * (1.0 + 0.2 * unit(rng));
  for (int w = 0; w < 3; ++w) {
    const double angle = std::numbers::pi * unit(rng);
    const double frequency = (0.5 + 0.5 * std::abs(unit(rng))) / 150.0;
    m.waves_.push_back({Eigen::Vector2d(std::cos(angle), std::sin(angle)) * frequency,
                        0.6 * unit(rng), std::numbers::pi * unit(rng)});
  }
  return m;
}

double SyntheticFaceModel::height(double x, double y) const {
  const double u = x / half_width_;
  const double v = y / half_height_;
  double z = -25.0 * (u * u + v * v);
  z += nose_amplitude_ * gauss(x - nose_center_.x(), y - nose_center_.y(), nose_sigma_.x(), nose_sigma_.y());
  const double cheek_x = 0.46 * half_width_;
  z += cheek_amplitude_ * (gauss(x - cheek_x, y + 20.0, 14.0, 14.0) + gauss(x + cheek_x, y + 20.0, 14.0, 14.0));
  z += brow_amplitude_ * gauss(x, y - 0.42 * half_height_, 32.0, 7.0);
  z += chin_amplitude_ * gauss(x, y + 0.78 * half_height_, 12.0, 12.0);
  for (const Wave& w : waves_)
    z += w.amplitude * std::cos(2.0 * std::numbers::pi * w.frequency.dot(Eigen::Vector2d(x, y)) + w.phase);
  return z;
}

Eigen::Vector2d SyntheticFaceModel::to_domain(const Eigen::Vector2d& uv) const {
  return {uv.x() * half_width_, uv.y() * half_height_};
}

Eigen::Vector3d SyntheticFaceModel::vertex(const Eigen::Vector2d& uv, const ExpressionLabel& expression,
                                           double expression_gain) const {
  const Eigen::Vector2d xy = to_domain(uv);
  Eigen::Vector3d out(xy.x(), xy.y(), height(xy.x(), xy.y()));
  if (expression.emotion() != Emotion::neutral)
    out += expression_gain * expression_displacement(expression, xy.x(), xy.y());
  return out;
}

Eigen::Vector3d expression_displacement(const ExpressionLabel& expression, double x, double y) {
  if (expression.emotion() == Emotion::neutral) return Eigen::Vector3d::Zero();
  const double scale = *expression.level() / 3.0;
  Eigen::Vector3d d = Eigen::Vector3d::Zero();
  switch (expression.emotion()) {
    case Emotion::happiness:
      // Mouth corners up and out, cheeks raised.
      d += mirrored(x, y, 25.0, -45.0, 10.0, [](double s) { return Eigen::Vector3d(3.0 * s, 6.0, 3.0); });
      d += mirrored(x, y, 30.0, -20.0, 14.0, [](double) { return Eigen::Vector3d(0.0, 2.0, 3.0); });
      break;
    case Emotion::sadness:
      // Mouth corners down, inner brows raised.
      d += mirrored(x, y, 25.0, -45.0, 10.0, [](double) { return Eigen::Vector3d(0.0, -6.0, -1.0); });
      d += mirrored(x, y, 12.0, 32.0, 9.0, [](double) { return Eigen::Vector3d(0.0, 4.0, 1.0); });
      break;
    case Emotion::surprise:
      // Whole brow raised, jaw dropped.
      d += gauss(x, y - 35.0, 35.0, 9.0) * Eigen::Vector3d(0.0, 8.0, 2.0);
      d += gauss(x, y + 62.0, 22.0, 16.0) * Eigen::Vector3d(0.0, -12.0, -3.0);
      break;
    case Emotion::anger:
      // Brows lowered and drawn together, lips pressed.
      d += mirrored(x, y, 15.0, 35.0, 9.0, [](double s) { return Eigen::Vector3d(-4.0 * s, -5.0, 2.0); });
      d += gauss(x, y + 45.0, 16.0, 6.0) * Eigen::Vector3d(0.0, 2.0, -2.0);
      break;
    case Emotion::disgust:
      // Nose wrinkle, upper lip raised.
      d += gauss(x, y - 15.0, 10.0, 8.0) * Eigen::Vector3d(0.0, 0.0, 4.0);
      d += gauss(x, y + 35.0, 14.0, 6.0) * Eigen::Vector3d(0.0, 5.0, 2.0);
      break;
    case Emotion::fear:
      // Brows raised and drawn together, mouth stretched sideways.
      d += mirrored(x, y, 15.0, 35.0, 9.0, [](double s) { return Eigen::Vector3d(-3.0 * s, 6.0, 1.0); });
      d += mirrored(x, y, 25.0, -45.0, 10.0, [](double s) { return Eigen::Vector3d(6.0 * s, -2.0, 0.0); });
      break;
    case Emotion::neutral:
      break;
  }
  return scale * d;
}

std::vector<Eigen::Vector2d> face_lattice(std::size_t vertex_count) {
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Eigen::Vector2d> out;
  out.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    const double r = std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(vertex_count));
    const double a = golden_angle * static_cast<double>(i);
    out.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return out;
}

Corpus generate_synthetic_corpus(std::uint64_t seed, int n_identities, std::size_t vertex_count,
                                 const std::vector<ExpressionLabel>& categories,
                                 const SyntheticCorpusOptions& options) {
  if (n_identities < 1) throw std::invalid_argument("n_identities must be >= 1");
  if (vertex_count < kMinVertexCount) throw std::invalid_argument("vertex count must be >= 8");
  const auto lattice = face_lattice(vertex_count);
  std::vector<Face> faces;
  for (int id = 0; id < n_identities; ++id) {
    const auto model = SyntheticFaceModel::for_identity(seed, id);
    for (const auto& category : categories) {
      Face face;
      face.identity = id;
      face.expression = category;
      face.vertices.reserve(vertex_count);
      for (const auto& uv : lattice) face.vertices.push_back(model.vertex(uv, category, options.expression_gain));
      faces.push_back(std::move(face));
    }
  }
  return Corpus(std::move(faces));
}

}  // namespace facegen
