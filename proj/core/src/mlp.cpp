#include "itrd/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "itrd/errors.hpp"

namespace itrd {

namespace {

Matrix relu(const Matrix& a) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) = std::max(0.0, out(i, j));
  return out;
}

Matrix affine(const Matrix& x, const Matrix& w, const std::vector<double>& b) {
  Matrix out = matmul(x, w);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) += b[j];
  return out;
}

void check_input(const MlpModel& model, const Matrix& x) {
  if (x.cols() != model.input_dim())
    throw DimensionError("mlp forward: input has " + std::to_string(x.cols()) +
                         " columns, model expects " + std::to_string(model.input_dim()));
}

}  // namespace

MlpModel MlpModel::init(const std::vector<std::size_t>& sizes, Rng& rng) {
  if (sizes.size() < 2) throw DimensionError("mlp init: need at least input and output sizes");
  for (const std::size_t s : sizes)
    if (s == 0) throw DimensionError("mlp init: zero-width layer");
  MlpModel model;
  model.layer_sizes = sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t fan_in = sizes[l];
    const std::size_t fan_out = sizes[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_in, fan_out);
    for (std::size_t i = 0; i < fan_in; ++i)
      for (std::size_t j = 0; j < fan_out; ++j)
        w(i, j) = (2.0 * rng.uniform01() - 1.0) * bound;
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(fan_out, 0.0);
  }
  return model;
}

bool MlpModel::all_finite() const {
  for (const Matrix& w : weights)
    if (!w.all_finite()) return false;
  for (const auto& b : biases)
    for (const double v : b)
      if (!std::isfinite(v)) return false;
  return true;
}

MlpCache forward_cached(const MlpModel& model, const Matrix& x) {
  check_input(model, x);
  MlpCache cache;
  cache.activations.reserve(model.num_layers() + 1);
  cache.activations.push_back(x);
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    Matrix z = affine(cache.activations.back(), model.weights[l], model.biases[l]);
    if (l + 1 < model.num_layers()) z = relu(z);
    cache.activations.push_back(std::move(z));
  }
  return cache;
}

MlpForward forward(const MlpModel& model, const Matrix& x) {
  MlpCache cache = forward_cached(model, x);
  const std::size_t last = cache.activations.size() - 1;
  return MlpForward{std::move(cache.activations[last - 1]), std::move(cache.activations[last])};
}

XentResult softmax_cross_entropy(const Matrix& logits, const std::vector<int>& labels) {
  const std::size_t n = logits.rows();
  const std::size_t classes = logits.cols();
  if (labels.size() != n)
    throw DimensionError("cross entropy: " + std::to_string(n) + " logit rows vs " +
                         std::to_string(labels.size()) + " labels");
  for (const int y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= classes)
      throw DimensionError("cross entropy: label " + std::to_string(y) + " outside [0, " +
                           std::to_string(classes) + ")");
  Matrix grad(n, classes);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double maxv = logits(i, 0);
    for (std::size_t j = 1; j < classes; ++j) maxv = std::max(maxv, logits(i, j));
    double sum = 0.0;
    for (std::size_t j = 0; j < classes; ++j) sum += std::exp(logits(i, j) - maxv);
    const double log_sum = std::log(sum);
    const std::size_t y = static_cast<std::size_t>(labels[i]);
    loss += log_sum - (logits(i, y) - maxv);
    for (std::size_t j = 0; j < classes; ++j) {
      const double p = std::exp(logits(i, j) - maxv) / sum;
      grad(i, j) = (p - (j == y ? 1.0 : 0.0)) / static_cast<double>(n);
    }
  }
  return XentResult{loss / static_cast<double>(n), std::move(grad)};
}

MlpGradients backward(const MlpModel& model, const MlpCache& cache,
                      const Matrix& grad_logits, const Matrix* grad_representation) {
  const std::size_t layers = model.num_layers();
  if (cache.activations.size() != layers + 1)
    throw DimensionError("mlp backward: cache does not match model depth");
  MlpGradients grads;
  grads.weights.resize(layers, Matrix(1, 1));
  grads.biases.resize(layers);
  Matrix delta = grad_logits;  // gradient w.r.t. pre-activation of layer l
  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& input = cache.activations[l];
    grads.weights[l] = matmul_at(input, delta);
    std::vector<double> gb(delta.cols(), 0.0);
    for (std::size_t i = 0; i < delta.rows(); ++i)
      for (std::size_t j = 0; j < delta.cols(); ++j)
        gb[j] += delta(i, j);
    grads.biases[l] = std::move(gb);
    if (l == 0) break;
    Matrix grad_act = matmul_bt(delta, model.weights[l]);
    if (l == layers - 1 && grad_representation != nullptr) {
      if (grad_representation->rows() != grad_act.rows() ||
          grad_representation->cols() != grad_act.cols())
        throw DimensionError("mlp backward: representation gradient shape mismatch");
      grad_act += *grad_representation;
    }
    // ReLU mask: activations[l] stores max(0, pre), so positive means pass.
    for (std::size_t i = 0; i < grad_act.rows(); ++i)
      for (std::size_t j = 0; j < grad_act.cols(); ++j)
        if (input(i, j) <= 0.0) grad_act(i, j) = 0.0;
    delta = std::move(grad_act);
  }
  return grads;
}

double accuracy(const MlpModel& model, const Matrix& points, const std::vector<int>& labels) {
  if (labels.size() != points.rows())
    throw DimensionError("accuracy: row count does not match label count");
  const Matrix logits = forward(model, points).logits;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < logits.cols(); ++j)
      if (logits(i, j) > logits(i, best)) best = j;
    if (best == static_cast<std::size_t>(labels[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(logits.rows());
}

}  // namespace itrd
