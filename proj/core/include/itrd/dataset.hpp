#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "itrd/matrix.hpp"

namespace itrd {

enum class Split { train, test };

// Planar Gaussian blobs, one per class, centered on a circle of radius 2.
struct SyntheticDataset {
  Matrix points;                        // n x 2
  std::vector<int> labels;              // values in [0, classes)
  std::vector<std::size_t> train_index;
  std::vector<std::size_t> test_index;
  int classes = 0;

  const std::vector<std::size_t>& index(Split s) const {
    return s == Split::train ? train_index : test_index;
  }
  Matrix split_points(Split s) const;
  std::vector<int> split_labels(Split s) const;
};

// Deterministic per seed. Each class contributes n_per_class points; the
// first 3/4 of each class go to the train split, so both splits stay
// class-balanced and disjoint by construction.
SyntheticDataset generate_blobs(std::uint64_t seed, std::size_t n_per_class, int classes,
                                double spread);

}  // namespace itrd
