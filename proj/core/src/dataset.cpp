#include "itrd/dataset.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "itrd/errors.hpp"
#include "itrd/rng.hpp"

namespace itrd {

Matrix SyntheticDataset::split_points(Split s) const {
  const auto& idx = index(s);
  if (idx.empty()) throw DimensionError("dataset split is empty");
  Matrix out(idx.size(), points.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < points.cols(); ++j)
      out(i, j) = points(idx[i], j);
  return out;
}

std::vector<int> SyntheticDataset::split_labels(Split s) const {
  const auto& idx = index(s);
  std::vector<int> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = labels[idx[i]];
  return out;
}

SyntheticDataset generate_blobs(std::uint64_t seed, std::size_t n_per_class, int classes,
                                double spread) {
  if (classes < 2) throw DimensionError("generate_blobs: need at least 2 classes");
  if (n_per_class < 10) throw DimensionError("generate_blobs: need at least 10 points per class");
  if (!(spread >= 0.0) || !std::isfinite(spread))
    throw DimensionError("generate_blobs: spread must be finite and non-negative");

  const std::size_t n = n_per_class * static_cast<std::size_t>(classes);
  SyntheticDataset ds;
  ds.points = Matrix(n, 2);
  ds.labels.resize(n);
  ds.classes = classes;

  Rng rng = Rng(seed).stream(0);
  const std::size_t train_per_class = (n_per_class * 3) / 4;
  constexpr double kRadius = 2.0;
  for (int c = 0; c < classes; ++c) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) /
                         static_cast<double>(classes);
    const double cx = kRadius * std::cos(angle);
    const double cy = kRadius * std::sin(angle);
    for (std::size_t k = 0; k < n_per_class; ++k) {
      const std::size_t row = static_cast<std::size_t>(c) * n_per_class + k;
      ds.points(row, 0) = cx + spread * rng.normal();
      ds.points(row, 1) = cy + spread * rng.normal();
      ds.labels[row] = c;
      if (k < train_per_class)
        ds.train_index.push_back(row);
      else
        ds.test_index.push_back(row);
    }
  }
  return ds;
}

}  // namespace itrd
