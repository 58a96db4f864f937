// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/eval_baseline.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "facegen/error.hpp"
#include "facegen/hashing.hpp"
#include "facegen/pipeline.hpp"
#include "facegen/rasterize.hpp"

namespace facegen {

EvalExample make_example(const RgbImage& image, int label) {
  if (image.width != kImageSize || image.height != kImageSize)
    throw std::invalid_argument("expected a 224x224 image, got " + std::to_string(image.width) + "x" +
                                std::to_string(image.height));
  if (label < 0 || label >= kEmotionCount) throw std::invalid_argument("label out of range");
  constexpr int block = kImageSize / kFeatureSide;
  EvalExample ex;
  ex.label = label;
  ex.features = Eigen::VectorXd::Zero(kFeatureLength);
  for (int r = 0; r < kImageSize; ++r)
    for (int c = 0; c < kImageSize; ++c)
      for (int ch = 0; ch < 3; ++ch) {
        const int slot = ((r / block) * kFeatureSide + c / block) * 3 + ch;
        ex.features(slot) += image.pixels[(static_cast<std::size_t>(r) * kImageSize + c) * 3 + ch];
      }
  ex.features /= 255.0 * block * block;
  return ex;
}

LossAndGradient softmax_cross_entropy(const ClassVector& logits, int label) {
  if (label < 0 || label >= kEmotionCount) throw std::invalid_argument("label out of range");
  const ClassVector shifted = logits.array() - logits.maxCoeff();
  const ClassVector e = shifted.array().exp();
  const double z = e.sum();
  LossAndGradient out;
  out.loss = std::log(z) - shifted(label);
  out.gradient = e / z;
  out.gradient(label) -= 1.0;
  return out;
}

ClassVector LinearModel::logits(const Eigen::VectorXd& features) const { return weights * features + bias; }

int LinearModel::predict(const Eigen::VectorXd& features) const {
  const ClassVector l = logits(features);
  int best = 0;
  for (int k = 1; k < kEmotionCount; ++k)
    if (l(k) > l(best)) best = k;
  return best;
}

TrainResult train_linear(std::span<const EvalExample> examples, const TrainOptions& options) {
  if (examples.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  const auto dim = examples.front().features.size();
  for (const auto& ex : examples)
    if (ex.features.size() != dim) throw std::invalid_argument("examples have inconsistent feature lengths");

  TrainResult result;
  auto& model = result.model;
  std::mt19937_64 rng(StableHasher().add(options.seed).add(std::string_view("linear-init")).digest());
  std::normal_distribution<double> init(0.0, 0.01);
  model.weights.resize(kEmotionCount, dim);
  for (Eigen::Index k = 0; k < model.weights.rows(); ++k)
    for (Eigen::Index d = 0; d < dim; ++d) model.weights(k, d) = init(rng);
  model.bias.setZero();

  const double n = static_cast<double>(examples.size());
  double mean_norm2 = 0.0;
  for (const auto& ex : examples) mean_norm2 += (ex.features.squaredNorm() + 1.0) / n;
  const double step = options.learning_rate / (0.5 * mean_norm2);
  Eigen::MatrixXd grad_w(kEmotionCount, dim);
  ClassVector grad_b;
  result.epoch_loss.reserve(static_cast<std::size_t>(std::max(options.epochs, 0)));
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    grad_w.setZero();
    grad_b.setZero();
    double loss = 0.0;
    for (const auto& ex : examples) {
      const auto lg = softmax_cross_entropy(model.logits(ex.features), ex.label);
      loss += lg.loss;
      grad_w.noalias() += lg.gradient * ex.features.transpose();
      grad_b += lg.gradient;
    }
    result.epoch_loss.push_back(loss / n);
    model.weights -= (step / n) * grad_w;
    model.bias -= (step / n) * grad_b;
  }
  return result;
}

Evaluation evaluate(const LinearModel& model, std::span<const EvalExample> examples) {
  Evaluation out;
  if (examples.empty()) return out;
  long correct = 0;
  for (const auto& ex : examples) {
    const int p = model.predict(ex.features);
    ++out.confusion(ex.label, p);
    correct += p == ex.label;
  }
  out.accuracy = static_cast<double>(correct) / static_cast<double>(examples.size());
  return out;
}

EvalDataset load_eval_dataset(const std::filesystem::path& manifest_path) {
  const auto manifest = DatasetManifest::read(manifest_path);
  const auto base = manifest_path.parent_path();
  EvalDataset data;
  for (const auto& r : manifest.records) {
    auto ex = make_example(read_png(base / r.image_path), class_index(r.category.emotion()));
    (r.split == Split::train ? data.train : data.test).push_back(std::move(ex));
  }
  return data;
}

void print_evaluation(const Evaluation& evaluation, std::ostream& out) {
  out << "accuracy " << std::fixed << std::setprecision(4) << evaluation.accuracy << std::defaultfloat << '\n';
  out << std::setw(11) << "truth\\pred";
  for (int k = 0; k < kEmotionCount; ++k) out << std::setw(10) << to_string(static_cast<Emotion>(k));
  out << '\n';
  for (int t = 0; t < kEmotionCount; ++t) {
    out << std::setw(11) << to_string(static_cast<Emotion>(t));
    for (int k = 0; k < kEmotionCount; ++k) out << std::setw(10) << evaluation.confusion(t, k);
    out << '\n';
  }
}

}  // namespace facegen
