// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "facegen/error.hpp"
#include "facegen/face_synthesis.hpp"
#include "support/fixtures.hpp"

namespace facegen {
namespace {

Corpus corpus_of(std::vector<Vertices> shapes, ExpressionLabel label = ExpressionLabel::neutral()) {
  std::vector<Face> faces;
  for (std::size_t i = 0; i < shapes.size(); ++i) faces.push_back({shapes[i], static_cast<std::int64_t>(i), label});
  return Corpus(std::move(faces));
}

TEST(SynthesizeFace, IdenticalInputsReproduced) {
  std::mt19937_64 rng(1);
  const Vertices v = testing::random_points(rng, 50);
  const auto corpus = corpus_of({v, v, v});
  const Face out = synthesize_face(corpus, {ExpressionLabel::neutral(), {0, 1, 2}, 0.0});
  EXPECT_EQ(out.vertices, v);
}

TEST(SynthesizeFace, HandMean) {
  std::mt19937_64 rng(2);
  std::vector<Vertices> shapes(3, testing::random_points(rng, 8));
  shapes[1] = testing::random_points(rng, 8);
  shapes[2] = testing::random_points(rng, 8);
  shapes[0][5] = {0, 0, 0};
  shapes[1][5] = {3, 0, 0};
  shapes[2][5] = {0, 3, 0};
  const auto corpus = corpus_of(shapes);
  const Face out = synthesize_face(corpus, {ExpressionLabel::neutral(), {0, 1, 2}, 0.0});
  EXPECT_EQ(out.vertices[5], Eigen::Vector3d(1, 1, 0));
}

TEST(SynthesizeFace, MeanBoundsAndPermutationProperty) {
  std::mt19937_64 rng(3);
  const auto label = testing::label(Emotion::disgust, 3);
  std::vector<Vertices> shapes;
  for (int i = 0; i < 6; ++i) shapes.push_back(testing::random_points(rng, 200));
  const auto corpus = corpus_of(shapes, label);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::int64_t, 3> ids{};
    do {
      ids = {pick(rng), pick(rng), pick(rng)};
    } while (ids[0] == ids[1] || ids[1] == ids[2] || ids[0] == ids[2]);
    const Face out = synthesize_face(corpus, {label, ids, 0.0});
    EXPECT_EQ(out.expression, label);
    ASSERT_EQ(out.vertex_count(), 200u);
    for (std::size_t p = 0; p < 200; ++p) {
      for (int d = 0; d < 3; ++d) {
        const double a = shapes[ids[0]][p][d], b = shapes[ids[1]][p][d], c = shapes[ids[2]][p][d];
        const long double mean = (static_cast<long double>(a) + b + c) / 3.0L;
        const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
        EXPECT_LE(std::abs(static_cast<double>(out.vertices[p][d] - mean)), 1e-15 * scale);
        EXPECT_GE(out.vertices[p][d], std::min({a, b, c}));
        EXPECT_LE(out.vertices[p][d], std::max({a, b, c}));
      }
    }
    std::array<std::int64_t, 3> perm{ids[2], ids[0], ids[1]};
    const Face again = synthesize_face(corpus, {label, perm, 0.0});
    EXPECT_EQ(again.vertices, out.vertices);
    EXPECT_EQ(again.identity, out.identity);
  }
}

TEST(SynthesizeFace, IdentityDependsOnCategoryAndTrio) {
  const auto a = synthetic_identity(ExpressionLabel::neutral(), {1, 2, 3});
  EXPECT_EQ(a, synthetic_identity(ExpressionLabel::neutral(), {3, 1, 2}));
  EXPECT_NE(a, synthetic_identity(ExpressionLabel::neutral(), {1, 2, 4}));
  EXPECT_NE(a, synthetic_identity(testing::label(Emotion::fear, 2), {1, 2, 3}));
  EXPECT_GE(a, 0);
}

TEST(SynthesizeFace, OutputIsValidFace) {
  const auto corpus = generate_synthetic_corpus(4, 3, 500, {ExpressionLabel::neutral()});
  EXPECT_NO_THROW(validate_face(synthesize_face(corpus, {ExpressionLabel::neutral(), {0, 1, 2}, 0.0})));
}

TEST(SynthesizeFace, MissingFace) {
  const auto corpus = generate_synthetic_corpus(4, 3, 50, {ExpressionLabel::neutral()});
  EXPECT_THROW(synthesize_face(corpus, {ExpressionLabel::neutral(), {0, 1, 7}, 0.0}), CorpusError);
  EXPECT_THROW(synthesize_face(corpus, {testing::label(Emotion::fear, 2), {0, 1, 2}, 0.0}), CorpusError);
}

}  // namespace
}  // namespace facegen
