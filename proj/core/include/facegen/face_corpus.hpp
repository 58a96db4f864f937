// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace facegen {

enum class Emotion : std::uint8_t {
  anger,
  disgust,
  fear,
  happiness,
  sadness,
  surprise,
  neutral,
};

inline constexpr int kEmotionCount = 7;
inline constexpr std::size_t kMinVertexCount = 8;

std::string_view to_string(Emotion emotion);
std::optional<Emotion> parse_emotion(std::string_view text);

/// Class index used by classifiers; equal to the enumerator value.
inline int class_index(Emotion emotion) { return static_cast<int>(emotion); }

/// An expression category: an emotion plus an intensity level. Neutral never
/// carries a level; the other emotions carry one of 1..4.
class ExpressionLabel {
 public:
  static ExpressionLabel neutral() { return ExpressionLabel(Emotion::neutral, std::nullopt); }
  static ExpressionLabel make(Emotion emotion, std::optional<int> level);
  /// Parses the canonical name produced by name(), e.g. "happiness_3" or "neutral".
  static ExpressionLabel parse(std::string_view name);

  Emotion emotion() const { return emotion_; }
  std::optional<int> level() const { return level_; }
  /// "neutral" or "<emotion>_<level>"; used for directories and manifests.
  std::string name() const;

  friend auto operator<=>(const ExpressionLabel&, const ExpressionLabel&) = default;

 private:
  ExpressionLabel(Emotion emotion, std::optional<int> level) : emotion_(emotion), level_(level) {}

  Emotion emotion_;
  std::optional<int> level_;
};

/// The 13 categories used for trio formation: levels 2 and 3 of the six
/// basic emotions plus neutral, in canonical order.
std::vector<ExpressionLabel> standard_categories();

using Vertices = std::vector<Eigen::Vector3d>;

/// One corresponded 3D scan. Vertex p denotes the same anatomical point on
/// every face of a corpus. Coordinates are millimetres.
struct Face {
  Vertices vertices;
  std::int64_t identity = 0;
  ExpressionLabel expression = ExpressionLabel::neutral();

  std::size_t vertex_count() const { return vertices.size(); }
};

/// Throws CorpusError if the face has fewer than 8 vertices, non-finite
/// coordinates, or two exactly coincident vertices.
void validate_face(const Face& face);

/// An immutable set of faces sharing one vertex count, grouped into
/// expression categories holding at most one face per identity.
class Corpus {
 public:
  explicit Corpus(std::vector<Face> faces);

  std::size_t vertex_count() const { return vertex_count_; }
  std::span<const Face> faces() const { return faces_; }
  /// Categories present, in canonical (emotion, level) order.
  std::vector<ExpressionLabel> categories() const;
  /// Faces of one category ordered by ascending identity. Empty if absent.
  std::vector<const Face*> category(const ExpressionLabel& label) const;
  const Face* find(const ExpressionLabel& label, std::int64_t identity) const;

 private:
  std::vector<Face> faces_;
  std::size_t vertex_count_ = 0;
  std::map<ExpressionLabel, std::map<std::int64_t, std::size_t>> index_;
};

/// Reads an ASCII PLY point cloud (vertex x y z; extra vertex properties and
/// other elements are skipped).
Vertices read_ply(const std::filesystem::path& path);
void write_ply(const std::filesystem::path& path, std::span<const Eigen::Vector3d> vertices);

/// Loads a corpus from a CSV index with header `path,identity,emotion,level`.
/// Relative paths are resolved against the index file's directory.
Corpus load_corpus(const std::filesystem::path& index_path);

/// Writes every face as `<category>/<identity>.ply` plus `index.csv` under
/// `directory`; returns the index path.
std::filesystem::path write_corpus(const Corpus& corpus, const std::filesystem::path& directory);

/// SHA-256 over the corpus content (labels and raw coordinate bits) in
/// canonical category/identity order.
std::string corpus_checksum(const Corpus& corpus);

}  // namespace facegen
