#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "itrd/dataset.hpp"
#include "itrd/embedding.hpp"
#include "itrd/losses.hpp"
#include "itrd/matrix.hpp"
#include "itrd/mlp.hpp"

namespace itrd {

// Momentum buffers for one trainable module, shaped like its parameters.
struct SgdState {
  std::vector<Matrix> weight_velocity;
  std::vector<std::vector<double>> bias_velocity;
};

struct EpochMetrics {
  double total = 0.0;
  double corr = 0.0;
  double mi = 0.0;
  double xent = 0.0;
  double test_accuracy = 0.0;
};

struct TrainRun {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double lr = 0.0;
  std::vector<EpochMetrics> metrics;  // one entry per epoch
  double final_accuracy = 0.0;

  MlpModel student;
  std::optional<EmbeddingLayer> embedding;  // present when dims differ
  SgdState student_state;
  SgdState embedding_state;
};

// Minibatch SGD with momentum 0.9, batch size 64, cross-entropy objective.
// Weight init and epoch shuffling draw from disjoint streams of `seed`.
// arch must start at the dataset input width and end at its class count.
MlpModel train_teacher(const SyntheticDataset& dataset, const std::vector<std::size_t>& arch,
                       std::size_t epochs, double lr, std::uint64_t seed);

// Joint student+embedding training against the frozen teacher. Each step
// runs both forward passes, embeds the student representation when the
// dimensions differ, and applies analytic gradients of
// xent + beta_corr*corr + beta_mi*mi to the student and embedding only.
// Zero betas skip the corresponding term entirely, so the degenerate config
// reproduces a plain cross-entropy run bit for bit.
TrainRun distill_student(const SyntheticDataset& dataset, const MlpModel& teacher,
                         const std::vector<std::size_t>& student_arch, const ItrdConfig& cfg,
                         std::size_t epochs, double lr, std::uint64_t seed);

double evaluate(const MlpModel& model, const SyntheticDataset& dataset, Split split);

// End-to-end demo: blobs -> teacher -> distilled student. The CLI and the
// acceptance harness drive this one entry point so they cannot drift apart.
struct DemoConfig {
  std::uint64_t seed = 0;
  std::size_t epochs = 200;  // distillation epochs
  std::size_t teacher_epochs = 200;
  double lr = 0.05;
  int classes = 3;
  std::size_t n_per_class = 96;
  double spread = 1.4;  // overlap tuned so the small student underfits plain
                        // cross entropy and representation transfer pays off
  ItrdConfig loss;      // zero both betas for the cross-entropy baseline
};

struct DemoResult {
  double teacher_accuracy = 0.0;
  TrainRun student_run;
};

DemoResult run_demo(const DemoConfig& cfg);

}  // namespace itrd
