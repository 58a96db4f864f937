// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "facegen/error.hpp"
#include "facegen/hashing.hpp"
#include "facegen/pipeline.hpp"
#include "facegen/png_io.hpp"
#include "support/fixtures.hpp"

namespace facegen {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every regular file under `root` except the resume journal, keyed by
// relative path.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().filename() != ".progress.jsonl")
      out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  return out;
}

class DeskPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("pipeline");
    config_ = testing::desk_config(dir_->path());
    config_.raster.grid_size = 240;
    manifest_ = run_generate(config_);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  PipelineConfig fresh_config(const std::string& name) const {
    PipelineConfig c = config_;
    c.output_dir = dir_->path() / name;
    return c;
  }

  static TempDir* dir_;
  static PipelineConfig config_;
  static DatasetManifest manifest_;
};

TempDir* DeskPipeline::dir_ = nullptr;
PipelineConfig DeskPipeline::config_;
DatasetManifest DeskPipeline::manifest_;

TEST_F(DeskPipeline, CountsAndSplits) {
  ASSERT_EQ(manifest_.records.size(), 8u);
  std::map<std::string, SplitCounts> per;
  for (const auto& r : manifest_.records) (r.split == Split::train ? per[r.category.name()].train : per[r.category.name()].test)++;
  ASSERT_EQ(per.size(), 2u);
  for (const auto& [name, counts] : per) EXPECT_EQ(counts, (SplitCounts{3, 1})) << name;
  EXPECT_EQ(expected_record_count({6, 6}, 4), 8u);
  EXPECT_EQ(expected_split({6, 6}, 4, 0.75), (SplitCounts{6, 2}));
}

TEST_F(DeskPipeline, ManifestSortedUniqueAndOnDisk) {
  const auto& recs = manifest_.records;
  std::set<std::string> paths;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (i > 0) {
      EXPECT_TRUE(std::tie(recs[i - 1].category, recs[i - 1].ids) < std::tie(recs[i].category, recs[i].ids));
    }
    EXPECT_TRUE(paths.insert(recs[i].image_path).second);
    EXPECT_EQ(recs[i].image_path, image_relative_path(recs[i].category, recs[i].ids));
    const auto img = read_png(config_.output_dir / recs[i].image_path);
    EXPECT_EQ(img.width, kImageSize);
    EXPECT_EQ(img.height, kImageSize);
    EXPECT_EQ(sha256_file(config_.output_dir / recs[i].image_path), recs[i].checksum);
  }
  const auto reread = DatasetManifest::read(config_.output_dir / kManifestName);
  EXPECT_EQ(reread.records, recs);
  EXPECT_EQ(reread.config, manifest_.config);
  EXPECT_EQ(reread.corpus_checksum, manifest_.corpus_checksum);
}

TEST_F(DeskPipeline, TopTriosPerCategory) {
  const Corpus corpus = load_corpus(config_.corpus_index);
  for (const auto& cat : corpus.categories()) {
    const auto table = pairwise_energy_table(corpus, cat, config_.sample_count, config_.seed);
    const auto top = select_top_trios(table, 4);
    std::vector<TrioIds> in_manifest;
    for (const auto& r : manifest_.records)
      if (r.category == cat) in_manifest.push_back(r.ids);
    std::vector<TrioIds> expected;
    for (const auto& t : top) expected.push_back(t.ids);
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(in_manifest, expected) << cat.name();
  }
}

TEST_F(DeskPipeline, IdenticalAcrossWorkerCounts) {
  auto config = fresh_config("parallel");
  config.workers = 3;
  run_generate(config);
  EXPECT_EQ(tree(config.output_dir), tree(config_.output_dir));
}

TEST_F(DeskPipeline, ResumeAfterKill) {
  auto config = fresh_config("killed");
  std::atomic<int> written{0};
  GenerateHooks kill_after_three{[&](const ManifestRecord&) {
    if (++written == 3) throw std::runtime_error("simulated kill");
  }};
  EXPECT_THROW(run_generate(config, kill_after_three), PipelineError);
  EXPECT_FALSE(fs::exists(config.output_dir / kManifestName));

  // Tamper with one finished image: resume must notice and rewrite it.
  const auto journal = slurp(config.output_dir / ".progress.jsonl");
  const auto first = nlohmann::json::parse(journal.substr(0, journal.find('\n')));
  std::ofstream(config.output_dir / first.at("path").get<std::string>(), std::ios::binary) << "garbage";

  std::atomic<int> seen{0};
  run_generate(config, {[&](const ManifestRecord&) { ++seen; }});
  EXPECT_EQ(seen.load(), 8);
  EXPECT_EQ(tree(config.output_dir), tree(config_.output_dir));
}

TEST_F(DeskPipeline, ErrorNamesCategoryAndTrio) {
  auto config = fresh_config("failing");
  GenerateHooks fail{[](const ManifestRecord&) { throw std::runtime_error("boom"); }};
  try {
    run_generate(config, fail);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("happiness_"), std::string::npos) << what;
    EXPECT_NE(what.find("trio ("), std::string::npos) << what;
    EXPECT_NE(what.find("boom"), std::string::npos) << what;
  }
}

TEST_F(DeskPipeline, SnapshotIgnoresLocationAndWorkers) {
  auto other = fresh_config("elsewhere");
  other.workers = 7;
  EXPECT_EQ(other.snapshot(), config_.snapshot());
  other.seed += 1;
  EXPECT_NE(other.snapshot(), config_.snapshot());
}

TEST_F(DeskPipeline, Stats) {
  const auto summary = run_stats(config_.output_dir / kManifestName);
  EXPECT_TRUE(summary.ok());
  EXPECT_EQ(summary.records, 8u);
  EXPECT_EQ(summary.train, 6u);
  EXPECT_EQ(summary.test, 2u);
  ASSERT_EQ(summary.categories.size(), 2u);
  for (const auto& [name, c] : summary.categories) {
    EXPECT_EQ(c.records, 4u);
    EXPECT_LE(c.min_d, c.median_d);
    EXPECT_LE(c.median_d, c.max_d);
    EXPECT_GT(c.min_d, 0.0);
  }
  std::ostringstream out;
  print_stats(summary, out);
  EXPECT_NE(out.str().find("all image checksums verified"), std::string::npos);
}

TEST_F(DeskPipeline, StatsReportsCorruptImage) {
  const fs::path copy = dir_->path() / "corrupt";
  fs::copy(config_.output_dir, copy, fs::copy_options::recursive);
  const auto victim = manifest_.records[5].image_path;
  auto bytes = read_file(copy / victim);
  bytes[bytes.size() / 2] ^= 0x40;
  write_file_atomic(copy / victim, bytes);
  const auto summary = run_stats(copy / kManifestName);
  EXPECT_FALSE(summary.ok());
  EXPECT_EQ(summary.checksum_failures, std::vector<std::string>{victim});
  std::ostringstream out;
  print_stats(summary, out);
  EXPECT_NE(out.str().find(victim), std::string::npos);
}

TEST_F(DeskPipeline, ExportMergesLevelsAndIsIdempotent) {
  const fs::path out = dir_->path() / "export";
  const auto first = run_export(config_.output_dir / kManifestName, out);
  EXPECT_EQ(first.copied, 8u);
  EXPECT_EQ(first.unchanged, 0u);
  std::set<std::string> classes;
  std::size_t files = 0;
  for (const char* split : {"train", "test"})
    for (const auto& e : fs::directory_iterator(out / split)) {
      classes.insert(e.path().filename().string());
      for ([[maybe_unused]] const auto& f : fs::directory_iterator(e.path())) ++files;
    }
  EXPECT_EQ(classes, std::set<std::string>{"happiness"});
  EXPECT_EQ(files, 8u);
  EXPECT_EQ(std::distance(fs::directory_iterator(out / "train" / "happiness"), fs::directory_iterator{}), 6);

  const auto second = run_export(config_.output_dir / kManifestName, out);
  EXPECT_EQ(second.copied, 0u);
  EXPECT_EQ(second.unchanged, 8u);
  EXPECT_EQ(tree(out).size(), 8u);
}

TEST(Pipeline, EmptyRunWhenMIsZero) {
  TempDir dir("empty");
  auto config = testing::desk_config(dir.path(), 100);
  config.trios_per_category = 0;
  const auto manifest = run_generate(config);
  EXPECT_TRUE(manifest.records.empty());
  const auto summary = run_stats(config.output_dir / kManifestName);
  EXPECT_TRUE(summary.ok());
  EXPECT_EQ(summary.records, 0u);
  EXPECT_TRUE(summary.categories.empty());
}

TEST(Pipeline, ExportMissingImage) {
  TempDir dir("missing_image");
  DatasetManifest m;
  m.config = PipelineConfig{}.snapshot();
  m.records.push_back({ExpressionLabel::neutral(), {0, 1, 2}, 1.0, Split::train, "neutral/0_1_2.png", "00"});
  m.write(dir.path() / kManifestName);
  EXPECT_THROW(run_export(dir.path() / kManifestName, dir.path() / "out"), PipelineError);
}

TEST(Pipeline, ThirteenCategoriesExportToSevenClasses) {
  TempDir dir("thirteen");
  DatasetManifest m;
  m.config = PipelineConfig{}.snapshot();
  const std::vector<std::uint8_t> png = encode_png(std::vector<std::uint8_t>(12, 7), 2, 2);
  for (const auto& cat : standard_categories()) {
    ManifestRecord r{cat, {0, 1, 2}, 1.0, Split::test, image_relative_path(cat, {0, 1, 2}), sha256_hex(png)};
    fs::create_directories((dir.path() / r.image_path).parent_path());
    write_file_atomic(dir.path() / r.image_path, png);
    m.records.push_back(r);
  }
  m.write(dir.path() / kManifestName);
  run_export(dir.path() / kManifestName, dir.path() / "out");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir.path() / "out" / "test"), fs::directory_iterator{}), 7);
}

TEST(SplitCounts, FullScaleArithmetic) {
  EXPECT_EQ(expected_record_count(std::vector<std::size_t>(13, 100), 64000), 832000u);
  EXPECT_EQ(expected_split(std::vector<std::size_t>(13, 100), 64000, 0.75), (SplitCounts{624000, 208000}));
  EXPECT_EQ(split_counts(4, 0.75), (SplitCounts{3, 1}));
  EXPECT_EQ(split_counts(0, 0.75), (SplitCounts{0, 0}));
  EXPECT_EQ(expected_record_count({2, 3, 6}, 4), 0u + 1u + 4u);
}

TEST(SplitCounts, WithinOneRecordOfFraction) {
  for (std::size_t n = 0; n < 200; ++n)
    for (double f : {0.1, 0.5, 0.75, 0.9}) {
      const auto s = split_counts(n, f);
      EXPECT_EQ(s.train + s.test, n);
      EXPECT_LE(std::abs(static_cast<double>(s.train) - f * static_cast<double>(n)), 1.0);
    }
}

TEST(AssignSplits, DeterministicStratifiedAndOrderFree) {
  std::vector<TrioScore> trios;
  const auto cat = ExpressionLabel::make(Emotion::fear, 3);
  for (std::int64_t i = 0; i < 9; ++i)
    for (std::int64_t j = i + 1; j < 9; ++j) trios.push_back({cat, {i, j, 20}, 0.0});
  const auto a = assign_splits(trios, 3, 0.75);
  EXPECT_EQ(std::count(a.begin(), a.end(), Split::train), static_cast<long>(split_counts(trios.size(), 0.75).train));
  auto reversed = trios;
  std::reverse(reversed.begin(), reversed.end());
  const auto b = assign_splits(reversed, 3, 0.75);
  for (std::size_t t = 0; t < trios.size(); ++t) EXPECT_EQ(a[t], b[trios.size() - 1 - t]);
  EXPECT_NE(a, assign_splits(trios, 4, 0.75));
}

TEST(PipelineConfig, JsonRoundTripAndValidation) {
  PipelineConfig c;
  c.corpus_index = "/data/index.csv";
  c.output_dir = "/data/out";
  c.seed = 42;
  c.raster.lambda = 1e-4;
  const auto back = PipelineConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(PipelineConfig::from_json(nlohmann::json::object()).trios_per_category, 64000u);
  EXPECT_EQ(PipelineConfig::from_json(nlohmann::json::object()).train_fraction, 0.75);
  EXPECT_THROW(PipelineConfig::from_json({{"train_fraction", 1.0}}), std::invalid_argument);
  EXPECT_THROW(PipelineConfig::from_json({{"sampel_count", 10}}), std::invalid_argument);
  EXPECT_THROW(PipelineConfig::from_json({{"raster", {{"grid_size", 100}}}}), std::invalid_argument);
}

TEST(PipelineConfig, RelativePathsResolveAgainstConfigFile) {
  TempDir dir("config");
  std::ofstream(dir.path() / "c.json") << R"({"corpus_index": "corpus/index.csv", "output_dir": "/abs/out"})";
  const auto c = PipelineConfig::load(dir.path() / "c.json");
  EXPECT_EQ(c.corpus_index, dir.path() / "corpus/index.csv");
  EXPECT_EQ(c.output_dir, fs::path("/abs/out"));
}

TEST(DatasetManifest, RejectsMalformedInput) {
  std::istringstream empty("");
  EXPECT_THROW(DatasetManifest::read(empty), PipelineError);
  std::istringstream wrong_count(
      R"({"format":"facegen-manifest","version":1,"config":{},"corpus_checksum":"x","records":2})"
      "\n");
  EXPECT_THROW(DatasetManifest::read(wrong_count), PipelineError);
  std::istringstream dup(
      R"({"format":"facegen-manifest","version":1,"config":{},"corpus_checksum":"x","records":2})"
      "\n"
      R"({"category":"neutral","ids":[0,1,2],"D":1,"split":"train","path":"a.png","sha256":"0"})"
      "\n"
      R"({"category":"neutral","ids":[0,1,3],"D":1,"split":"test","path":"a.png","sha256":"0"})"
      "\n");
  EXPECT_THROW(DatasetManifest::read(dup), PipelineError);
}

}  // namespace
}  // namespace facegen
