// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "facegen/error.hpp"
#include "facegen/face_corpus.hpp"
#include "facegen/synthetic_corpus.hpp"
#include "support/fixtures.hpp"

namespace facegen {
namespace {

using testing::TempDir;

TEST(ExpressionLabel, NamesRoundTrip) {
  for (const auto& c : standard_categories()) EXPECT_EQ(ExpressionLabel::parse(c.name()), c);
  EXPECT_EQ(ExpressionLabel::make(Emotion::happiness, 3).name(), "happiness_3");
  EXPECT_EQ(ExpressionLabel::neutral().name(), "neutral");
}

TEST(ExpressionLabel, RejectsInvalidLevels) {
  EXPECT_THROW(ExpressionLabel::make(Emotion::neutral, 2), std::invalid_argument);
  EXPECT_THROW(ExpressionLabel::make(Emotion::anger, std::nullopt), std::invalid_argument);
  EXPECT_THROW(ExpressionLabel::make(Emotion::anger, 5), std::invalid_argument);
  EXPECT_THROW(ExpressionLabel::parse("joy_2"), std::invalid_argument);
}

TEST(ExpressionLabel, ThirteenCategoriesSevenClasses) {
  const auto cats = standard_categories();
  ASSERT_EQ(cats.size(), 13u);
  std::set<int> classes;
  for (const auto& c : cats) {
    classes.insert(class_index(c.emotion()));
    if (c.emotion() != Emotion::neutral) {
      EXPECT_TRUE(*c.level() == 2 || *c.level() == 3);
    }
  }
  EXPECT_EQ(classes.size(), 7u);
}

TEST(Corpus, LoadTwoIdentitiesThirteenCategories) {
  TempDir dir("corpus");
  const auto index = write_corpus(generate_synthetic_corpus(1, 2, 500, standard_categories()), dir.path());
  const Corpus corpus = load_corpus(index);
  EXPECT_EQ(corpus.faces().size(), 26u);
  EXPECT_EQ(corpus.vertex_count(), 500u);
  ASSERT_EQ(corpus.categories().size(), 13u);
  for (const auto& c : corpus.categories()) EXPECT_EQ(corpus.category(c).size(), 2u);
}

TEST(Corpus, LoadRoundTripsCoordinatesExactly) {
  TempDir dir("roundtrip");
  const auto original = generate_synthetic_corpus(3, 2, 64, {ExpressionLabel::neutral()});
  const Corpus loaded = load_corpus(write_corpus(original, dir.path()));
  EXPECT_EQ(corpus_checksum(loaded), corpus_checksum(original));
}

TEST(Corpus, VertexCountMismatchIsCorrespondenceError) {
  std::mt19937_64 rng(1);
  std::vector<Face> faces{testing::random_face(rng, 500, 0), testing::random_face(rng, 499, 1)};
  try {
    Corpus corpus(std::move(faces));
    FAIL() << "expected CorpusError";
  } catch (const CorpusError& e) {
    EXPECT_NE(std::string(e.what()).find("correspondence mismatch"), std::string::npos);
  }
}

TEST(Corpus, MismatchDetectedThroughLoader) {
  TempDir dir("mismatch");
  std::mt19937_64 rng(2);
  write_ply(dir.path() / "a.ply", testing::random_points(rng, 500));
  write_ply(dir.path() / "b.ply", testing::random_points(rng, 499));
  std::ofstream(dir.path() / "index.csv") << "path,identity,emotion,level\na.ply,0,neutral,\nb.ply,1,neutral,\n";
  EXPECT_THROW(load_corpus(dir.path() / "index.csv"), CorpusError);
}

TEST(Corpus, DuplicateEntryRejected) {
  std::mt19937_64 rng(3);
  std::vector<Face> faces{testing::random_face(rng, 20, 4), testing::random_face(rng, 20, 4)};
  EXPECT_THROW(Corpus(std::move(faces)), CorpusError);
}

TEST(Corpus, NonFiniteAndCoincidentVerticesRejected) {
  std::mt19937_64 rng(4);
  Face f = testing::random_face(rng, 20);
  f.vertices[7].y() = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate_face(f), CorpusError);
  f = testing::random_face(rng, 20);
  f.vertices[12] = f.vertices[3];
  EXPECT_THROW(validate_face(f), CorpusError);
  EXPECT_THROW(validate_face(testing::random_face(rng, 7)), CorpusError);
}

TEST(Corpus, MissingFilesReported) {
  TempDir dir("missing");
  EXPECT_THROW(load_corpus(dir.path() / "index.csv"), CorpusError);
  std::ofstream(dir.path() / "index.csv") << "path,identity,emotion,level\nnope.ply,0,neutral,\n";
  EXPECT_THROW(load_corpus(dir.path() / "index.csv"), CorpusError);
}

TEST(Ply, SkipsExtraPropertiesAndElements) {
  TempDir dir("ply");
  std::ofstream(dir.path() / "f.ply") << "ply\nformat ascii 1.0\ncomment test\nelement vertex 2\n"
                                         "property float nx\nproperty float x\nproperty float y\n"
                                         "property float z\nelement face 1\nproperty list uchar int vertex_indices\n"
                                         "end_header\n9 1 2 3\n9 4 5 6.5\n3 0 1 1\n";
  const auto v = read_ply(dir.path() / "f.ply");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1], Eigen::Vector3d(4, 5, 6.5));
}

TEST(Ply, RejectsBinary) {
  TempDir dir("plybin");
  std::ofstream(dir.path() / "f.ply") << "ply\nformat binary_little_endian 1.0\nelement vertex 0\n"
                                         "property float x\nproperty float y\nproperty float z\nend_header\n";
  EXPECT_THROW(read_ply(dir.path() / "f.ply"), CorpusError);
}

TEST(SyntheticCorpus, DeterministicInSeed) {
  const std::vector cats{ExpressionLabel::neutral(), testing::label(Emotion::fear, 2)};
  const auto a = generate_synthetic_corpus(7, 3, 400, cats);
  const auto b = generate_synthetic_corpus(7, 3, 400, cats);
  ASSERT_EQ(a.faces().size(), b.faces().size());
  for (std::size_t f = 0; f < a.faces().size(); ++f) EXPECT_EQ(a.faces()[f].vertices, b.faces()[f].vertices);
  EXPECT_NE(corpus_checksum(a), corpus_checksum(generate_synthetic_corpus(8, 3, 400, cats)));
}

TEST(SyntheticCorpus, IdentitiesAndCategoriesDiffer) {
  const auto sad = testing::label(Emotion::sadness, 3);
  const auto corpus = generate_synthetic_corpus(2, 2, 300, {ExpressionLabel::neutral(), sad});
  EXPECT_NE(corpus.find(sad, 0)->vertices, corpus.find(sad, 1)->vertices);
  EXPECT_NE(corpus.find(sad, 0)->vertices, corpus.find(ExpressionLabel::neutral(), 0)->vertices);
}

TEST(SyntheticCorpus, FacesAreValid) {
  const auto corpus = generate_synthetic_corpus(5, 4, 1000, standard_categories());
  for (const auto& f : corpus.faces()) EXPECT_NO_THROW(validate_face(f));
}

// The nose bump (about 22 mm) sits on a dome that falls 25 mm toward the rim,
// so any nose vertex must stand above every rim vertex.
TEST(SyntheticCorpus, NoseAboveBorder) {
  const std::size_t n = 2000;
  const auto lattice = face_lattice(n);
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const auto corpus = generate_synthetic_corpus(seed, 5, n, standard_categories());
    for (const auto& face : corpus.faces()) {
      const auto model = SyntheticFaceModel::for_identity(seed, face.identity);
      double nose_min = std::numeric_limits<double>::infinity();
      double border_max = -std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < n; ++p) {
        const Eigen::Vector2d xy = model.to_domain(lattice[p]);
        if ((xy - model.nose_center()).norm() < 6.0) nose_min = std::min(nose_min, face.vertices[p].z());
        if (lattice[p].norm() > 0.95) border_max = std::max(border_max, face.vertices[p].z());
      }
      ASSERT_TRUE(std::isfinite(nose_min));
      EXPECT_GT(nose_min, border_max) << face.expression.name() << " identity " << face.identity;
    }
  }
}

}  // namespace
}  // namespace facegen
