#include <doctest.h>

#include <cmath>
#include <vector>

#include "itrd/errors.hpp"
#include "itrd/matrix.hpp"
#include "itrd/mlp.hpp"
#include "itrd/rng.hpp"

using namespace itrd;

namespace {

Matrix random_matrix(std::size_t n, std::size_t d, Rng& rng, double scale = 1.0) {
  Matrix z(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) z(i, j) = scale * rng.normal();
  return z;
}

MlpModel zeroed(const std::vector<std::size_t>& sizes) {
  Rng rng(0);
  MlpModel model = MlpModel::init(sizes, rng);
  for (Matrix& w : model.weights) w *= 0.0;
  return model;
}

}  // namespace

TEST_CASE("zero weights map every input to zero logits") {
  const MlpModel model = zeroed({2, 3, 2});
  Rng rng(71);
  const Matrix x = random_matrix(5, 2, rng);
  const MlpForward out = forward(model, x);
  for (double v : out.logits.data()) CHECK(v == 0.0);
  for (double v : out.representation.data()) CHECK(v == 0.0);
}

TEST_CASE("a single identity layer is exact passthrough") {
  MlpModel model = zeroed({3, 3});
  model.weights[0] = Matrix::identity(3);
  Rng rng(72);
  const Matrix x = random_matrix(4, 3, rng);
  const MlpForward out = forward(model, x);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(out.logits(i, j) == x(i, j));
  // with no hidden layer the representation is the input batch itself
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(out.representation(i, j) == x(i, j));
}

TEST_CASE("forward matches a per-neuron reference evaluation") {
  Rng rng(73);
  MlpModel model = MlpModel::init({4, 5, 3}, rng);
  for (auto& b : model.biases)
    for (double& v : b) v = rng.normal() * 0.1;
  const Matrix x = random_matrix(6, 4, rng);

  const MlpForward out = forward(model, x);
  for (std::size_t r = 0; r < 6; ++r) {
    double hidden[5];
    for (std::size_t j = 0; j < 5; ++j) {
      double a = model.biases[0][j];
      for (std::size_t k = 0; k < 4; ++k) a += x(r, k) * model.weights[0](k, j);
      hidden[j] = std::max(0.0, a);
      CHECK(out.representation(r, j) == doctest::Approx(hidden[j]).epsilon(1e-13));
    }
    for (std::size_t j = 0; j < 3; ++j) {
      double a = model.biases[1][j];
      for (std::size_t k = 0; k < 5; ++k) a += hidden[k] * model.weights[1](k, j);
      CHECK(out.logits(r, j) == doctest::Approx(a).epsilon(1e-13));
    }
  }
}

TEST_CASE("cached forward agrees with the plain forward") {
  Rng rng(74);
  const MlpModel model = MlpModel::init({3, 6, 4, 2}, rng);
  const Matrix x = random_matrix(5, 3, rng);
  const MlpForward out = forward(model, x);
  const MlpCache cache = forward_cached(model, x);
  REQUIRE(cache.activations.size() == 4);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(cache.activations[3](i, j) == out.logits(i, j));
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(cache.activations[2](i, j) == out.representation(i, j));
  }
}

TEST_CASE("cross entropy of uniform logits is log of the class count") {
  const Matrix logits(5, 4, 0.0);
  const std::vector<int> labels{0, 1, 2, 3, 0};
  CHECK(softmax_cross_entropy(logits, labels).loss ==
        doctest::Approx(1.3862943611198906).epsilon(1e-12));
}

TEST_CASE("cross entropy with a decisive margin is near zero") {
  Matrix logits(3, 4, 0.0);
  const std::vector<int> labels{2, 0, 1};
  for (std::size_t i = 0; i < 3; ++i) logits(i, static_cast<std::size_t>(labels[i])) = 20.0;
  CHECK(softmax_cross_entropy(logits, labels).loss < 1e-3);
}

TEST_CASE("cross entropy is invariant to per-row logit shifts") {
  Rng rng(75);
  const Matrix logits = random_matrix(6, 3, rng);
  Matrix shifted = logits;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 3; ++j) shifted(i, j) += 1000.0 * (static_cast<double>(i) + 1.0);
  const std::vector<int> labels{0, 1, 2, 0, 1, 2};
  const double base = softmax_cross_entropy(logits, labels).loss;
  const double moved = softmax_cross_entropy(shifted, labels).loss;
  CHECK(moved == doctest::Approx(base).epsilon(1e-12));
  CHECK(std::isfinite(softmax_cross_entropy(logits * 1e4, labels).loss));
}

TEST_CASE("cross entropy rejects out-of-range labels and count mismatches") {
  const Matrix logits(2, 3, 0.0);
  CHECK_THROWS_AS(softmax_cross_entropy(logits, {0, 3}), DimensionError);
  CHECK_THROWS_AS(softmax_cross_entropy(logits, {-1, 0}), DimensionError);
  CHECK_THROWS_AS(softmax_cross_entropy(logits, {0}), DimensionError);
}

TEST_CASE("initialization respects the Glorot bound with zero biases") {
  Rng rng(76);
  const MlpModel model = MlpModel::init({6, 10, 3}, rng);
  REQUIRE(model.num_layers() == 2);
  const double bounds[2] = {std::sqrt(6.0 / 16.0), std::sqrt(6.0 / 13.0)};
  for (std::size_t l = 0; l < 2; ++l) {
    double spread = 0.0;
    for (double w : model.weights[l].data()) {
      CHECK(std::fabs(w) <= bounds[l]);
      spread = std::max(spread, std::fabs(w));
    }
    CHECK(spread > 0.1 * bounds[l]);  // not degenerate
    for (double b : model.biases[l]) CHECK(b == 0.0);
  }
  CHECK(model.all_finite());
  CHECK_THROWS_AS(MlpModel::init({4}, rng), DimensionError);
  CHECK_THROWS_AS(MlpModel::init({4, 0, 2}, rng), DimensionError);
}

TEST_CASE("backward matches central differences through every parameter") {
  Rng rng(77);
  MlpModel model = MlpModel::init({3, 4, 2}, rng);
  const Matrix x = random_matrix(5, 3, rng);
  const std::vector<int> labels{0, 1, 0, 1, 1};
  const Matrix readout = random_matrix(5, 4, rng);  // couples to the representation

  const auto objective = [&](const MlpModel& m) {
    const MlpForward out = forward(m, x);
    double s = softmax_cross_entropy(out.logits, labels).loss;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 4; ++j) s += readout(i, j) * out.representation(i, j);
    return s;
  };

  const MlpCache cache = forward_cached(model, x);
  const XentResult xent = softmax_cross_entropy(cache.activations.back(), labels);
  const MlpGradients grads = backward(model, cache, xent.grad_logits, &readout);

  const double h = 1e-6;
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    for (std::size_t i = 0; i < model.weights[l].rows(); ++i) {
      for (std::size_t j = 0; j < model.weights[l].cols(); ++j) {
        const double keep = model.weights[l](i, j);
        model.weights[l](i, j) = keep + h;
        const double hi = objective(model);
        model.weights[l](i, j) = keep - h;
        const double lo = objective(model);
        model.weights[l](i, j) = keep;
        const double numeric = (hi - lo) / (2.0 * h);
        CHECK(std::fabs(grads.weights[l](i, j) - numeric) /
                  std::max(1e-6, std::fabs(numeric)) <
              1e-4);
      }
    }
    for (std::size_t j = 0; j < model.biases[l].size(); ++j) {
      const double keep = model.biases[l][j];
      model.biases[l][j] = keep + h;
      const double hi = objective(model);
      model.biases[l][j] = keep - h;
      const double lo = objective(model);
      model.biases[l][j] = keep;
      const double numeric = (hi - lo) / (2.0 * h);
      CHECK(std::fabs(grads.biases[l][j] - numeric) / std::max(1e-6, std::fabs(numeric)) <
            1e-4);
    }
  }
}

TEST_CASE("accuracy counts argmax hits and breaks ties toward class zero") {
  const MlpModel model = zeroed({2, 3});  // constant zero logits, all rows tie
  const Matrix x = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(accuracy(model, x, {0, 0}) == 1.0);
  CHECK(accuracy(model, x, {1, 2}) == 0.0);
  CHECK(accuracy(model, x, {0, 1}) == 0.5);
  CHECK_THROWS_AS(accuracy(model, x, {0}), DimensionError);
}
