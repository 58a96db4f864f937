// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "facegen/error.hpp"
#include "facegen/hashing.hpp"
#include "facegen/pipeline.hpp"

namespace facegen {
namespace {

constexpr std::string_view kFormatName = "facegen-manifest";
constexpr int kFormatVersion = 1;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

void reject_unknown_keys(const nlohmann::json& json, std::initializer_list<std::string_view> known,
                         std::string_view where) {
  for (const auto& [key, value] : json.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown " + std::string(where) + " key '" + key + "'");
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  if (sample_count < kMinVertexCount) throw std::invalid_argument("sample_count must be >= 8");
  if (raster.grid_size < kImageSize) throw std::invalid_argument("raster.grid_size must be >= 224");
  if (!(raster.margin >= 1.0)) throw std::invalid_argument("raster.margin must be >= 1");
  if (!(raster.lambda > 0.0)) throw std::invalid_argument("raster.lambda must be positive");
  if (raster.normal_neighbors < 3) throw std::invalid_argument("raster.normal_neighbors must be >= 3");
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& json, const std::filesystem::path& base_dir) {
  if (!json.is_object()) throw std::invalid_argument("config must be a JSON object");
  reject_unknown_keys(json,
                      {"corpus_index", "output_dir", "sample_count", "trios_per_category", "train_fraction", "seed",
                       "workers", "raster"},
                      "config");
  PipelineConfig c;
  if (json.contains("corpus_index")) c.corpus_index = resolve(base_dir, json.at("corpus_index").get<std::string>());
  if (json.contains("output_dir")) c.output_dir = resolve(base_dir, json.at("output_dir").get<std::string>());
  c.sample_count = json.value("sample_count", c.sample_count);
  c.trios_per_category = json.value("trios_per_category", c.trios_per_category);
  c.train_fraction = json.value("train_fraction", c.train_fraction);
  c.seed = json.value("seed", c.seed);
  c.workers = json.value("workers", c.workers);
  if (json.contains("raster")) {
    const auto& r = json.at("raster");
    reject_unknown_keys(r, {"grid_size", "margin", "lambda", "normal_neighbors"}, "raster");
    c.raster.grid_size = r.value("grid_size", c.raster.grid_size);
    c.raster.margin = r.value("margin", c.raster.margin);
    c.raster.lambda = r.value("lambda", c.raster.lambda);
    c.raster.normal_neighbors = r.value("normal_neighbors", c.raster.normal_neighbors);
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return from_json(json, path.parent_path());
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json json = snapshot();
  json.erase("normalization");
  json["corpus_index"] = corpus_index.generic_string();
  json["output_dir"] = output_dir.generic_string();
  json["workers"] = workers;
  return json;
}

nlohmann::json PipelineConfig::snapshot() const {
  return {
      {"sample_count", sample_count},
      {"trios_per_category", trios_per_category},
      {"train_fraction", train_fraction},
      {"seed", seed},
      {"raster",
       {{"grid_size", raster.grid_size},
        {"margin", raster.margin},
        {"lambda", raster.lambda},
        {"normal_neighbors", raster.normal_neighbors}}},
      {"normalization", "per-image-min-max"},
  };
}

std::string_view to_string(Split split) { return split == Split::train ? "train" : "test"; }

void DatasetManifest::write(std::ostream& out) const {
  const nlohmann::json header = {{"format", kFormatName},
                                 {"version", kFormatVersion},
                                 {"config", config},
                                 {"corpus_checksum", corpus_checksum},
                                 {"records", records.size()}};
  out << header.dump() << '\n';
  for (const auto& r : records) {
    const nlohmann::json line = {{"category", r.category.name()},
                                 {"ids", r.ids},
                                 {"D", r.shape_difference},
                                 {"split", to_string(r.split)},
                                 {"path", r.image_path},
                                 {"sha256", r.checksum}};
    out << line.dump() << '\n';
  }
}

void DatasetManifest::write(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PipelineError("cannot write " + tmp.string());
    write(out);
    if (!out) throw PipelineError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

DatasetManifest DatasetManifest::read(std::istream& in) {
  DatasetManifest manifest;
  std::string line;
  if (!std::getline(in, line)) throw PipelineError("manifest is empty");
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.value("format", std::string()) != kFormatName) throw PipelineError("not a facegen manifest");
    manifest.config = header.at("config");
    manifest.corpus_checksum = header.at("corpus_checksum").get<std::string>();
    std::set<std::string> paths;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      ManifestRecord r;
      r.category = ExpressionLabel::parse(j.at("category").get<std::string>());
      r.ids = j.at("ids").get<TrioIds>();
      r.shape_difference = j.at("D").get<double>();
      const auto split = j.at("split").get<std::string>();
      if (split != "train" && split != "test") throw PipelineError("line " + std::to_string(line_no) + ": bad split");
      r.split = split == "train" ? Split::train : Split::test;
      r.image_path = j.at("path").get<std::string>();
      r.checksum = j.at("sha256").get<std::string>();
      if (!paths.insert(r.image_path).second)
        throw PipelineError("line " + std::to_string(line_no) + ": duplicate path " + r.image_path);
      manifest.records.push_back(std::move(r));
    }
    if (header.at("records").get<std::size_t>() != manifest.records.size())
      throw PipelineError("manifest record count does not match its header");
  } catch (const nlohmann::json::exception& e) {
    throw PipelineError(std::string("malformed manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw PipelineError(std::string("malformed manifest: ") + e.what());
  }
  return manifest;
}

DatasetManifest DatasetManifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PipelineError("cannot open manifest " + path.string());
  return read(in);
}

SplitCounts split_counts(std::size_t n, double train_fraction) {
  const auto train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));
  return {std::min(train, n), n - std::min(train, n)};
}

std::size_t expected_record_count(const std::vector<std::size_t>& category_sizes, std::size_t trios_per_category) {
  std::size_t total = 0;
  for (auto n : category_sizes) total += std::min<std::uint64_t>(trios_per_category, trio_count(n));
  return total;
}

SplitCounts expected_split(const std::vector<std::size_t>& category_sizes, std::size_t trios_per_category,
                           double train_fraction) {
  SplitCounts total;
  for (auto n : category_sizes) {
    const auto s = split_counts(std::min<std::uint64_t>(trios_per_category, trio_count(n)), train_fraction);
    total.train += s.train;
    total.test += s.test;
  }
  return total;
}

std::vector<Split> assign_splits(const std::vector<TrioScore>& trios, std::uint64_t seed, double train_fraction) {
  std::vector<std::uint64_t> keys(trios.size());
  for (std::size_t t = 0; t < trios.size(); ++t) {
    StableHasher h;
    h.add(seed).add(trios[t].category.name());
    for (auto id : trios[t].ids) h.add(id);
    keys[t] = h.digest();
  }
  std::vector<std::size_t> order(trios.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return trios[a].ids < trios[b].ids;
  });
  const auto counts = split_counts(trios.size(), train_fraction);
  std::vector<Split> out(trios.size(), Split::test);
  for (std::size_t rank = 0; rank < counts.train; ++rank) out[order[rank]] = Split::train;
  return out;
}

std::string image_relative_path(const ExpressionLabel& category, const TrioIds& ids) {
  return category.name() + "/" + std::to_string(ids[0]) + "_" + std::to_string(ids[1]) + "_" +
         std::to_string(ids[2]) + ".png";
}

}  // namespace facegen
