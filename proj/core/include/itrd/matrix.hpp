#ifndef ITRD_MATRIX_HPP
#define ITRD_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace itrd {

/// Dense real matrix, row-major storage. Values are immutable once built by
/// the library operations below; everything here is a pure function of its
/// inputs and safe to share across threads.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  /// Builds from row-major data; rejects non-finite entries and size mismatch.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix ones(std::size_t rows, std::size_t cols);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }

  Matrix transpose() const;
  double trace() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double scalar);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A batch of representation vectors, one sample per row.
using FeatureBatch = Matrix;

/// Which standard deviation convention batch normalization divides by.
enum class StdMode {
  population,  // divide by n; self-correlation diagonal is exactly 1
  sample,      // divide by n-1
};

Matrix matmul(const Matrix& a, const Matrix& b);

/// a * b^T without materializing the transpose.
Matrix matmul_bt(const Matrix& a, const Matrix& b);

/// a^T * b without materializing the transpose.
Matrix matmul_at(const Matrix& a, const Matrix& b);

/// Elementwise product; shapes must match.
Matrix hadamard(const Matrix& a, const Matrix& b);

/// Sum of squared entries. For symmetric A this equals the sum of squared
/// eigenvalues, which is what makes it usable as an alpha=2 spectral proxy.
double frobenius_norm_sq(const Matrix& a);

/// K / tr(K). Throws DegenerateKernelError when tr(K) <= 1e-12.
Matrix trace_normalize(const Matrix& k);

/// Normalizes each column to zero mean and unit variance over the batch
/// dimension, dividing by (std + eps). Requires at least 2 rows.
Matrix batch_normalize(const Matrix& z, double eps, StdMode mode = StdMode::population);

/// batch_normalize plus the per-column statistics needed by backward passes.
struct BatchNormContext {
  Matrix normalized;
  std::vector<double> mean;
  std::vector<double> stddev;  // without the eps shift
};
BatchNormContext batch_normalize_ctx(const Matrix& z, double eps,
                                     StdMode mode = StdMode::population);

/// Chain rule through batch_normalize: given dL/d(normalized), returns dL/dz.
Matrix batch_normalize_backward(const BatchNormContext& ctx, const Matrix& grad_normalized,
                                double eps, StdMode mode = StdMode::population);

/// Scales every row to unit Euclidean norm; all-zero rows pass through.
Matrix l2_normalize_rows(const Matrix& z);

/// Chain rule through l2_normalize_rows. `normalized` must be the forward
/// output for `z`; zero rows propagate their upstream gradient unchanged.
Matrix l2_normalize_rows_backward(const Matrix& z, const Matrix& normalized,
                                  const Matrix& grad_normalized);

}  // namespace itrd

#endif  // ITRD_MATRIX_HPP
