#include "itrd/embedding.hpp"

#include <cmath>
#include <string>

#include "itrd/errors.hpp"

namespace itrd {

EmbeddingLayer EmbeddingLayer::init(std::size_t in_dim, std::size_t out_dim, Rng& rng) {
  EmbeddingLayer layer;
  layer.weight = Matrix(in_dim, out_dim);
  const double bound = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
  for (std::size_t i = 0; i < in_dim; ++i)
    for (std::size_t j = 0; j < out_dim; ++j) layer.weight(i, j) = rng.uniform(-bound, bound);
  layer.bias.assign(out_dim, 0.0);
  return layer;
}

Matrix EmbeddingLayer::forward(const Matrix& z) const {
  if (z.cols() != in_dim()) {
    throw DimensionError("EmbeddingLayer: input has " + std::to_string(z.cols()) +
                         " columns, layer expects " + std::to_string(in_dim()));
  }
  Matrix out = matmul(z, weight);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += bias[j];
  return out;
}

EmbeddingGradients embedding_backward(const EmbeddingLayer& layer, const Matrix& input,
                                      const Matrix& grad_output) {
  if (grad_output.rows() != input.rows() || grad_output.cols() != layer.out_dim()) {
    throw DimensionError("embedding_backward: gradient shape mismatch");
  }
  EmbeddingGradients grads;
  grads.weight = matmul_at(input, grad_output);
  grads.bias.assign(layer.out_dim(), 0.0);
  for (std::size_t i = 0; i < grad_output.rows(); ++i)
    for (std::size_t j = 0; j < grad_output.cols(); ++j) grads.bias[j] += grad_output(i, j);
  grads.input = matmul_bt(grad_output, layer.weight);
  return grads;
}

}  // namespace itrd
