// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared generators for tests: random point sets, affine maps, temporary
// directories and small on-disk corpora.
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "facegen/face_corpus.hpp"
#include "facegen/pipeline.hpp"
#include "facegen/synthetic_corpus.hpp"

namespace facegen::testing {

/// Points uniform in [-scale, scale]^3. Almost surely distinct and not
/// coplanar for n >= 4.
inline Vertices random_points(std::mt19937_64& rng, std::size_t n, double scale = 50.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vertices out(n);
  for (auto& p : out) p = {u(rng), u(rng), u(rng)};
  return out;
}

inline Face random_face(std::mt19937_64& rng, std::size_t n, std::int64_t identity = 0,
                        ExpressionLabel label = ExpressionLabel::neutral()) {
  Face f;
  f.vertices = random_points(rng, n);
  f.identity = identity;
  f.expression = label;
  return f;
}

struct Affine {
  Eigen::Matrix3d linear;
  Eigen::Vector3d offset;

  Eigen::Vector3d operator()(const Eigen::Vector3d& p) const { return linear * p + offset; }
};

/// Random well-conditioned affine map (|det| bounded away from 0).
inline Affine random_affine(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Affine a;
  do {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a.linear(r, c) = (r == c ? 1.0 : 0.0) + 0.5 * u(rng);
  } while (std::abs(a.linear.determinant()) < 0.2);
  a.offset = {20.0 * u(rng), 20.0 * u(rng), 20.0 * u(rng)};
  return a;
}

inline Face apply(const Affine& a, Face f) {
  for (auto& v : f.vertices) v = a(v);
  return f;
}

/// Removes the directory on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("facegen_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline ExpressionLabel label(Emotion e, int level) { return ExpressionLabel::make(e, level); }

/// The desk-scale setup: 6 identities, 2 categories, M = 4, split 0.75.
inline PipelineConfig desk_config(const std::filesystem::path& root, std::size_t vertex_count = 600) {
  const auto corpus = generate_synthetic_corpus(
      11, 6, vertex_count, {label(Emotion::happiness, 2), label(Emotion::happiness, 3)});
  PipelineConfig config;
  config.corpus_index = write_corpus(corpus, root / "corpus");
  config.output_dir = root / "out";
  config.sample_count = 120;
  config.trios_per_category = 4;
  config.train_fraction = 0.75;
  config.seed = 5;
  config.workers = 1;
  return config;
}

}  // namespace facegen::testing
