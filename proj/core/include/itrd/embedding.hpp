#ifndef ITRD_EMBEDDING_HPP
#define ITRD_EMBEDDING_HPP

#include <vector>

#include "itrd/matrix.hpp"
#include "itrd/rng.hpp"

namespace itrd {

/// Linear map bridging the student representation dimension to the
/// teacher's; trained jointly with the student. Carries a bias.
struct EmbeddingLayer {
  Matrix weight;             // in_dim x out_dim
  std::vector<double> bias;  // out_dim
  bool trainable = true;

  std::size_t in_dim() const { return weight.rows(); }
  std::size_t out_dim() const { return weight.cols(); }

  /// Weights uniform in +-sqrt(6/(fan_in+fan_out)), bias zero.
  static EmbeddingLayer init(std::size_t in_dim, std::size_t out_dim, Rng& rng);

  /// z * W + 1 b^T
  Matrix forward(const Matrix& z) const;
};

struct EmbeddingGradients {
  Matrix weight;
  std::vector<double> bias;
  Matrix input;
};

EmbeddingGradients embedding_backward(const EmbeddingLayer& layer, const Matrix& input,
                                      const Matrix& grad_output);

}  // namespace itrd

#endif  // ITRD_EMBEDDING_HPP
