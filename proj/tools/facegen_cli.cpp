// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "facegen/eval_baseline.hpp"
#include "facegen/pipeline.hpp"
#include "facegen/synthetic_corpus.hpp"

namespace {

int cmd_generate(const std::string& config_path, std::optional<unsigned> workers,
                 std::optional<std::uint64_t> seed) {
  auto config = facegen::PipelineConfig::load(config_path);
  if (workers) config.workers = *workers;
  if (seed) config.seed = *seed;
  const auto manifest = facegen::run_generate(config);
  std::cout << "wrote " << manifest.records.size() << " images and "
            << (config.output_dir / facegen::kManifestName).string() << '\n';
  return 0;
}

int cmd_stats(const std::string& manifest) {
  const auto summary = facegen::run_stats(manifest);
  facegen::print_stats(summary, std::cout);
  return summary.ok() ? 0 : 1;
}

int cmd_export(const std::string& manifest, const std::string& out) {
  const auto summary = facegen::run_export(manifest, out);
  std::cout << "copied " << summary.copied << ", unchanged " << summary.unchanged << '\n';
  return 0;
}

int cmd_eval(const std::string& manifest, const facegen::TrainOptions& options) {
  const auto data = facegen::load_eval_dataset(manifest);
  std::cout << data.train.size() << " train / " << data.test.size() << " test examples\n";
  const auto trained = facegen::train_linear(data.train, options);
  if (!trained.epoch_loss.empty())
    std::cout << "training loss " << trained.epoch_loss.front() << " -> " << trained.epoch_loss.back() << '\n';
  facegen::print_evaluation(facegen::evaluate(trained.model, data.test), std::cout);
  return 0;
}

// Writes a synthetic corpus and a config that points at it.
int cmd_synth(const std::string& out, int identities, std::size_t vertices, std::uint64_t seed, double gain) {
  const auto corpus = facegen::generate_synthetic_corpus(seed, identities, vertices, facegen::standard_categories(),
                                                         {.expression_gain = gain});
  const std::filesystem::path dir(out);
  const auto index = facegen::write_corpus(corpus, dir / "corpus");
  facegen::PipelineConfig config;
  config.corpus_index = "corpus/index.csv";
  config.output_dir = "dataset";
  config.sample_count = std::min<std::size_t>(config.sample_count, vertices);
  config.trios_per_category = 4;
  std::ofstream(dir / "config.json") << config.to_json().dump(2) << '\n';
  std::cout << "wrote " << index.string() << " and " << (dir / "config.json").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expression dataset generation from corresponded 3D faces"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  auto* generate = app.add_subcommand("generate", "Build the image dataset and manifest");
  generate->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  generate->add_option("--workers", workers, "Worker threads (0 = all cores)");
  generate->add_option("--seed", seed, "Overrides the config seed");

  std::string manifest;
  auto* stats = app.add_subcommand("stats", "Summarise a manifest and verify image checksums");
  stats->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);

  std::string out;
  auto* exp = app.add_subcommand("export", "Copy images into train|test/<emotion>/ directories");
  exp->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  exp->add_option("--out", out)->required();

  facegen::TrainOptions train;
  auto* eval = app.add_subcommand("eval", "Train and test a linear softmax classifier");
  eval->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  eval->add_option("--epochs", train.epochs)->capture_default_str();
  eval->add_option("--lr", train.learning_rate)->capture_default_str();
  eval->add_option("--seed", train.seed)->capture_default_str();

  int identities = 6;
  std::size_t vertices = 2000;
  std::uint64_t synth_seed = 0;
  double gain = 1.0;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus and a matching config");
  synth->add_option("--out", out)->required();
  synth->add_option("--identities", identities)->capture_default_str();
  synth->add_option("--vertices", vertices)->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--expression-gain", gain)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*generate) return cmd_generate(config_path, workers, seed);
    if (*stats) return cmd_stats(manifest);
    if (*exp) return cmd_export(manifest, out);
    if (*eval) return cmd_eval(manifest, train);
    if (*synth) return cmd_synth(out, identities, vertices, synth_seed, gain);
  } catch (const std::exception& e) {
    std::cerr << "facegen: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
