// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "facegen/face_corpus.hpp"
#include "facegen/png_io.hpp"

namespace facegen {

inline constexpr int kFeatureSide = 28;
inline constexpr int kFeatureLength = kFeatureSide * kFeatureSide * 3;

using ClassVector = Eigen::Matrix<double, kEmotionCount, 1>;

struct EvalExample {
  Eigen::VectorXd features;
  int label = 0;
};

/// 8x8 block average of a 224x224 RGB image, scaled to [0, 1].
EvalExample make_example(const RgbImage& image, int label);

struct LossAndGradient {
  double loss = 0.0;
  ClassVector gradient = ClassVector::Zero();
};

/// Categorical cross-entropy of softmax(logits) against `label`, with the max
/// logit subtracted first. The gradient is softmax(logits) - onehot(label).
LossAndGradient softmax_cross_entropy(const ClassVector& logits, int label);

struct LinearModel {
  Eigen::MatrixXd weights;  // kEmotionCount x feature length
  ClassVector bias = ClassVector::Zero();

  ClassVector logits(const Eigen::VectorXd& features) const;
  /// Argmax; ties go to the lowest class index.
  int predict(const Eigen::VectorXd& features) const;
};

struct TrainOptions {
  int epochs = 200;
  /// Relative to the curvature bound 0.5 * mean ||(x, 1)||^2 of the loss;
  /// values in (0, 2) never diverge.
  double learning_rate = 0.5;
  std::uint64_t seed = 0;
};

struct TrainResult {
  LinearModel model;
  std::vector<double> epoch_loss;  // mean loss at the start of each epoch
};

/// Full-batch gradient descent from a small seeded Gaussian initialisation.
/// Throws std::invalid_argument for an empty dataset.
TrainResult train_linear(std::span<const EvalExample> examples, const TrainOptions& options);

struct Evaluation {
  double accuracy = 0.0;
  Eigen::Matrix<long, kEmotionCount, kEmotionCount> confusion =
      Eigen::Matrix<long, kEmotionCount, kEmotionCount>::Zero();  // row = truth
};

Evaluation evaluate(const LinearModel& model, std::span<const EvalExample> examples);

struct EvalDataset {
  std::vector<EvalExample> train;
  std::vector<EvalExample> test;
};

/// Loads every manifest image as an example labelled with its emotion class.
EvalDataset load_eval_dataset(const std::filesystem::path& manifest_path);

void print_evaluation(const Evaluation& evaluation, std::ostream& out);

}  // namespace facegen
