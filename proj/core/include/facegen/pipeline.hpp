// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "facegen/rasterize.hpp"
#include "facegen/trio_selection.hpp"

namespace facegen {

struct PipelineConfig {
  std::filesystem::path corpus_index;
  std::filesystem::path output_dir;
  std::size_t sample_count = 500;
  std::size_t trios_per_category = 64000;
  double train_fraction = 0.75;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
  RasterConfig raster;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  /// Reads a JSON config; missing keys keep their defaults and relative paths
  /// resolve against the config file's directory.
  static PipelineConfig load(const std::filesystem::path& path);
  static PipelineConfig from_json(const nlohmann::json& json,
                                  const std::filesystem::path& base_dir = {});
  nlohmann::json to_json() const;
  /// Fields that determine the dataset contents. Excludes the output
  /// directory and worker count so relocated or re-parallelised runs produce
  /// identical manifests.
  nlohmann::json snapshot() const;
};

enum class Split { train, test };
std::string_view to_string(Split split);

struct ManifestRecord {
  ExpressionLabel category = ExpressionLabel::neutral();
  TrioIds ids{};
  double shape_difference = 0.0;
  Split split = Split::train;
  std::string image_path;  // relative to the manifest's directory
  std::string checksum;    // SHA-256 of the PNG bytes

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

/// JSON Lines: a header line, then one record per line sorted by
/// (category, ids).
struct DatasetManifest {
  nlohmann::json config;
  std::string corpus_checksum;
  std::vector<ManifestRecord> records;

  void write(std::ostream& out) const;
  void write(const std::filesystem::path& path) const;
  static DatasetManifest read(std::istream& in);
  static DatasetManifest read(const std::filesystem::path& path);
};

inline constexpr std::string_view kManifestName = "manifest.jsonl";

struct SplitCounts {
  std::size_t train = 0;
  std::size_t test = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

/// train = floor(fraction * n + 1/2).
SplitCounts split_counts(std::size_t n, double train_fraction);

/// Sum over categories of min(M, C(N_cat, 3)).
std::size_t expected_record_count(const std::vector<std::size_t>& category_sizes,
                                  std::size_t trios_per_category);

/// Per-category stratified split totals for the given category sizes.
SplitCounts expected_split(const std::vector<std::size_t>& category_sizes,
                           std::size_t trios_per_category, double train_fraction);

/// Deterministic stratified split of one category's trios: trios are ordered
/// by a stable hash of (seed, category, ids) and the first
/// split_counts(n).train of them go to training.
std::vector<Split> assign_splits(const std::vector<TrioScore>& trios, std::uint64_t seed,
                                 double train_fraction);

/// `<category>/<i>_<j>_<k>.png`
std::string image_relative_path(const ExpressionLabel& category, const TrioIds& ids);

struct GenerateHooks {
  /// Called after each image is written (or found valid on resume), from
  /// worker threads. An exception aborts the run.
  std::function<void(const ManifestRecord&)> on_image;
};

/// Energies, trio selection, synthesis and rasterisation for every category,
/// then the manifest. Images already recorded in the output directory's
/// progress journal with a matching checksum are not regenerated.
DatasetManifest run_generate(const PipelineConfig& config, const GenerateHooks& hooks = {});

struct CategoryStats {
  std::size_t records = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  double min_d = 0.0;
  double median_d = 0.0;
  double max_d = 0.0;
};

struct StatsSummary {
  std::map<std::string, CategoryStats> categories;
  std::size_t records = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  std::vector<std::string> checksum_failures;  // missing or mismatched images

  bool ok() const { return checksum_failures.empty(); }
};

StatsSummary run_stats(const std::filesystem::path& manifest_path);
void print_stats(const StatsSummary& summary, std::ostream& out);

struct ExportSummary {
  std::size_t copied = 0;
  std::size_t unchanged = 0;
};

/// Materialises `train/<emotion>/...` and `test/<emotion>/...` under `out_dir`.
/// Levels of one emotion share a class directory; file names carry the
/// category so nothing collides. Re-running over an existing tree is a no-op.
ExportSummary run_export(const std::filesystem::path& manifest_path,
                         const std::filesystem::path& out_dir);

}  // namespace facegen
