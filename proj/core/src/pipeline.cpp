// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <string>
#include <unordered_map>

#include "facegen/error.hpp"
#include "facegen/face_synthesis.hpp"
#include "facegen/hashing.hpp"
#include "facegen/parallel.hpp"
#include "facegen/png_io.hpp"

namespace facegen {
namespace {

constexpr std::string_view kJournalName = ".progress.jsonl";

// Checksums of images already written by an earlier, possibly interrupted,
// run. A torn final line from a killed process is ignored.
std::unordered_map<std::string, std::string> read_journal(const std::filesystem::path& path) {
  std::unordered_map<std::string, std::string> done;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    try {
      const auto j = nlohmann::json::parse(line);
      done[j.at("path").get<std::string>()] = j.at("sha256").get<std::string>();
    } catch (const nlohmann::json::exception&) {
    }
  }
  return done;
}

struct Job {
  TrioScore trio;
  Split split;
};

std::string describe(const TrioScore& trio) {
  return "category " + trio.category.name() + ", trio (" + std::to_string(trio.ids[0]) + ", " +
         std::to_string(trio.ids[1]) + ", " + std::to_string(trio.ids[2]) + ")";
}

}  // namespace

DatasetManifest run_generate(const PipelineConfig& config, const GenerateHooks& hooks) {
  config.validate();
  if (config.output_dir.empty()) throw PipelineError("output_dir is not set");
  const Corpus corpus = load_corpus(config.corpus_index);
  const unsigned workers = resolve_workers(config.workers);

  DatasetManifest manifest;
  manifest.config = config.snapshot();
  manifest.corpus_checksum = corpus_checksum(corpus);

  std::vector<Job> jobs;
  if (config.trios_per_category > 0) {
    for (const auto& category : corpus.categories()) {
      if (corpus.category(category).size() < 3) continue;
      const auto table = pairwise_energy_table(corpus, category, config.sample_count, config.seed, workers);
      const auto trios = select_top_trios(table, config.trios_per_category, workers);
      const auto splits = assign_splits(trios, config.seed, config.train_fraction);
      for (std::size_t t = 0; t < trios.size(); ++t) jobs.push_back({trios[t], splits[t]});
    }
  }

  std::filesystem::create_directories(config.output_dir);
  const auto journal_path = config.output_dir / kJournalName;
  const auto done = read_journal(journal_path);
  std::ofstream journal(journal_path, std::ios::app);
  if (!journal) throw PipelineError("cannot open " + journal_path.string());
  std::mutex journal_mutex;

  std::vector<ManifestRecord> records(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t index) {
    const Job& job = jobs[index];
    ManifestRecord& record = records[index];
    record.category = job.trio.category;
    record.ids = job.trio.ids;
    record.shape_difference = job.trio.shape_difference;
    record.split = job.split;
    record.image_path = image_relative_path(job.trio.category, job.trio.ids);
    const auto file = config.output_dir / record.image_path;
    try {
      if (const auto it = done.find(record.image_path);
          it != done.end() && std::filesystem::exists(file) && sha256_file(file) == it->second) {
        record.checksum = it->second;
      } else {
        const Face face = synthesize_face(corpus, job.trio);
        const ChannelImage image = rasterize_face(face, config.raster);
        const auto png = encode_png(image.pixels, kImageSize, kImageSize);
        record.checksum = sha256_hex(png);
        std::filesystem::create_directories(file.parent_path());
        write_file_atomic(file, png);
        std::lock_guard lock(journal_mutex);
        journal << nlohmann::json{{"path", record.image_path}, {"sha256", record.checksum}}.dump() << '\n';
        journal.flush();
      }
      if (hooks.on_image) hooks.on_image(record);
    } catch (const std::exception& e) {
      throw PipelineError(describe(job.trio) + ": " + e.what());
    }
  });

  std::sort(records.begin(), records.end(), [](const ManifestRecord& a, const ManifestRecord& b) {
    if (a.category != b.category) return a.category < b.category;
    return a.ids < b.ids;
  });
  manifest.records = std::move(records);
  manifest.write(config.output_dir / kManifestName);
  return manifest;
}

StatsSummary run_stats(const std::filesystem::path& manifest_path) {
  const auto manifest = DatasetManifest::read(manifest_path);
  const auto base = manifest_path.parent_path();
  StatsSummary summary;
  std::map<std::string, std::vector<double>> scores;
  for (const auto& r : manifest.records) {
    auto& c = summary.categories[r.category.name()];
    ++c.records;
    ++summary.records;
    if (r.split == Split::train) {
      ++c.train;
      ++summary.train;
    } else {
      ++c.test;
      ++summary.test;
    }
    scores[r.category.name()].push_back(r.shape_difference);
    const auto file = base / r.image_path;
    if (!std::filesystem::exists(file) || sha256_file(file) != r.checksum)
      summary.checksum_failures.push_back(r.image_path);
  }
  for (auto& [name, d] : scores) {
    std::sort(d.begin(), d.end());
    auto& c = summary.categories[name];
    c.min_d = d.front();
    c.max_d = d.back();
    const std::size_t mid = d.size() / 2;
    c.median_d = d.size() % 2 ? d[mid] : 0.5 * (d[mid - 1] + d[mid]);
  }
  return summary;
}

void print_stats(const StatsSummary& summary, std::ostream& out) {
  out << std::left << std::setw(14) << "category" << std::right << std::setw(9) << "records" << std::setw(8)
      << "train" << std::setw(8) << "test" << std::setw(14) << "min D" << std::setw(14) << "median D"
      << std::setw(14) << "max D" << '\n';
  for (const auto& [name, c] : summary.categories)
    out << std::left << std::setw(14) << name << std::right << std::setw(9) << c.records << std::setw(8) << c.train
        << std::setw(8) << c.test << std::setw(14) << std::setprecision(6) << c.min_d << std::setw(14)
        << c.median_d << std::setw(14) << c.max_d << '\n';
  out << "total " << summary.records << " records, " << summary.train << " train / " << summary.test << " test";
  if (summary.records > 0)
    out << " (train fraction " << std::setprecision(4)
        << static_cast<double>(summary.train) / static_cast<double>(summary.records) << ")";
  out << '\n';
  if (summary.ok()) {
    out << "all image checksums verified\n";
  } else {
    out << summary.checksum_failures.size() << " image(s) missing or corrupt:\n";
    for (const auto& p : summary.checksum_failures) out << "  " << p << '\n';
  }
}

ExportSummary run_export(const std::filesystem::path& manifest_path, const std::filesystem::path& out_dir) {
  const auto manifest = DatasetManifest::read(manifest_path);
  const auto base = manifest_path.parent_path();
  ExportSummary summary;
  for (const auto& r : manifest.records) {
    const auto source = base / r.image_path;
    if (!std::filesystem::exists(source)) throw PipelineError("missing image " + r.image_path);
    const auto dir = out_dir / std::string(to_string(r.split)) / std::string(to_string(r.category.emotion()));
    const auto name = r.category.name() + "_" + std::to_string(r.ids[0]) + "_" + std::to_string(r.ids[1]) + "_" +
                      std::to_string(r.ids[2]) + ".png";
    const auto dest = dir / name;
    if (std::filesystem::exists(dest) && sha256_file(dest) == r.checksum) {
      ++summary.unchanged;
      continue;
    }
    std::filesystem::create_directories(dir);
    std::filesystem::copy_file(source, dest, std::filesystem::copy_options::overwrite_existing);
    ++summary.copied;
  }
  return summary;
}

}  // namespace facegen
