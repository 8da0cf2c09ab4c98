#pragma once

#include <cstddef>
#include <vector>

#include "itrd/matrix.hpp"
#include "itrd/rng.hpp"

namespace itrd {

// Fully connected network with ReLU hidden activations and a linear output
// layer. The representation of a batch is the activation of the penultimate
// layer, i.e. the input to the final fully connected layer.
struct MlpModel {
  std::vector<std::size_t> layer_sizes;         // [input, hidden..., output]
  std::vector<Matrix> weights;                  // weights[l]: sizes[l] x sizes[l+1]
  std::vector<std::vector<double>> biases;      // biases[l]: sizes[l+1]

  // Glorot-uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases.
  static MlpModel init(const std::vector<std::size_t>& sizes, Rng& rng);

  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  std::size_t representation_dim() const { return layer_sizes[layer_sizes.size() - 2]; }
  std::size_t num_layers() const { return weights.size(); }
  bool all_finite() const;
};

struct MlpForward {
  Matrix representation;
  Matrix logits;
};

MlpForward forward(const MlpModel& model, const Matrix& x);

// Forward pass retaining every layer activation for the backward pass.
// activations[0] is the input batch; activations[num_layers] the logits.
struct MlpCache {
  std::vector<Matrix> activations;
};

MlpCache forward_cached(const MlpModel& model, const Matrix& x);

struct XentResult {
  double loss;
  Matrix grad_logits;
};

// Mean natural-log cross entropy over the batch, stabilized by row-max
// subtraction; gradient is (softmax - onehot)/n.
XentResult softmax_cross_entropy(const Matrix& logits, const std::vector<int>& labels);

struct MlpGradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

// Backpropagates grad_logits through the cached forward pass. When
// grad_representation is non-null it is added to the gradient arriving at the
// penultimate activation (the distillation signal).
MlpGradients backward(const MlpModel& model, const MlpCache& cache,
                      const Matrix& grad_logits, const Matrix* grad_representation);

// Fraction of rows whose argmax logit equals the label; ties break low.
double accuracy(const MlpModel& model, const Matrix& points, const std::vector<int>& labels);

}  // namespace itrd
