#include "itrd/matrix.hpp"

#include <cmath>
#include <string>

#include "itrd/errors.hpp"

namespace itrd {

namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " +
                         shape_str(b));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("Matrix: rows and cols must be >= 1");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("Matrix: rows and cols must be >= 1");
  }
  if (data_.size() != rows * cols) {
    throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite()) {
    throw NumericError("Matrix: non-finite entry in input data");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 1.0); }

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  if (r == 0) throw DimensionError("Matrix::from_rows: empty row list");
  const std::size_t c = rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("Matrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  if (r == 0) throw DimensionError("Matrix::from_rows: empty row list");
  const std::size_t c = rows.front().size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("Matrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const {
  if (rows_ != cols_) throw DimensionError("trace: matrix is " + shape_str(*this) + ", not square");
  double t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double scalar) {
  for (double& v : data_) v *= scalar;
  return *this;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
  }
  Matrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_bt: column counts " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ra = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto rb = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < ra.size(); ++k) s += ra[k] * rb[k];
      c(i, j) = s;
    }
  }
  return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_at: row counts " + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()));
  }
  Matrix c(a.cols(), b.cols(), 0.0);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  }
  return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * b(i, j);
  return c;
}

double frobenius_norm_sq(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return s;
}

Matrix trace_normalize(const Matrix& k) {
  const double t = k.trace();
  if (!(t > 1e-12)) {
    throw DegenerateKernelError("trace_normalize: trace " + std::to_string(t) +
                                " is not above 1e-12");
  }
  return k * (1.0 / t);
}

namespace {

struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

ColumnStats column_stats(const Matrix& z, StdMode mode) {
  const std::size_t n = z.rows();
  const std::size_t d = z.cols();
  ColumnStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += z(i, j);
  for (std::size_t j = 0; j < d; ++j) s.mean[j] /= static_cast<double>(n);
  const double denom = (mode == StdMode::population) ? static_cast<double>(n)
                                                     : static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = z(i, j) - s.mean[j];
      s.stddev[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) s.stddev[j] = std::sqrt(s.stddev[j] / denom);
  return s;
}

}  // namespace

BatchNormContext batch_normalize_ctx(const Matrix& z, double eps, StdMode mode) {
  if (z.rows() < 2) {
    throw DimensionError("batch_normalize: need at least 2 rows, got " +
                         std::to_string(z.rows()));
  }
  if (!(eps > 0.0)) throw DimensionError("batch_normalize: eps must be > 0");
  auto stats = column_stats(z, mode);
  Matrix out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j)
      out(i, j) = (z(i, j) - stats.mean[j]) / (stats.stddev[j] + eps);
  if (!out.all_finite()) throw NumericError("batch_normalize: non-finite output");
  return {std::move(out), std::move(stats.mean), std::move(stats.stddev)};
}

Matrix batch_normalize(const Matrix& z, double eps, StdMode mode) {
  return batch_normalize_ctx(z, eps, mode).normalized;
}

Matrix batch_normalize_backward(const BatchNormContext& ctx, const Matrix& grad_normalized,
                                double eps, StdMode mode) {
  const Matrix& zhat = ctx.normalized;
  require_same_shape(zhat, grad_normalized, "batch_normalize_backward");
  const std::size_t n = zhat.rows();
  const std::size_t d = zhat.cols();
  const double denom = (mode == StdMode::population) ? static_cast<double>(n)
                                                     : static_cast<double>(n - 1);
  Matrix grad(n, d);
  for (std::size_t j = 0; j < d; ++j) {
    const double sigma = ctx.stddev[j];
    double g_mean = 0.0;
    double g_dot_zhat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g_mean += grad_normalized(i, j);
      g_dot_zhat += grad_normalized(i, j) * zhat(i, j);
    }
    g_mean /= static_cast<double>(n);
    // d zhat_b / d z_a = (delta_ab - 1/n)/(sigma+eps) - zhat_b * zhat_a / (denom*sigma)
    // summed against the upstream gradient. Constant columns have zhat = 0,
    // so the sigma term vanishes with them.
    const double sigma_term = (sigma > 0.0) ? g_dot_zhat / (denom * sigma) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grad(i, j) = (grad_normalized(i, j) - g_mean) / (sigma + eps) - sigma_term * zhat(i, j);
    }
  }
  return grad;
}

Matrix l2_normalize_rows(const Matrix& z) {
  Matrix out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const auto r = z.row(i);
    double norm_sq = 0.0;
    for (double v : r) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    auto o = out.row(i);
    if (norm == 0.0) {
      for (std::size_t j = 0; j < r.size(); ++j) o[j] = r[j];
    } else {
      for (std::size_t j = 0; j < r.size(); ++j) o[j] = r[j] / norm;
    }
  }
  return out;
}

Matrix l2_normalize_rows_backward(const Matrix& z, const Matrix& normalized,
                                  const Matrix& grad_normalized) {
  require_same_shape(z, grad_normalized, "l2_normalize_rows_backward");
  Matrix grad(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const auto r = z.row(i);
    double norm_sq = 0.0;
    for (double v : r) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    const auto g = grad_normalized.row(i);
    const auto u = normalized.row(i);
    auto out = grad.row(i);
    if (norm == 0.0) {
      for (std::size_t j = 0; j < r.size(); ++j) out[j] = g[j];
      continue;
    }
    double g_dot_u = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) g_dot_u += g[j] * u[j];
    for (std::size_t j = 0; j < r.size(); ++j) out[j] = (g[j] - g_dot_u * u[j]) / norm;
  }
  return grad;
}

}  // namespace itrd
