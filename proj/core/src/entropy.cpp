#include "itrd/entropy.hpp"

#include <cmath>
#include <string>

#include "itrd/errors.hpp"
#include "itrd/spectral.hpp"

namespace itrd {

namespace {

constexpr double kShannonRoutingTol = 1e-6;
constexpr double kTraceTol = 1e-9;
constexpr double kSymmetryTol = 1e-8;

std::vector<double> clamped_spectrum(const NpdMatrix& a) {
  return symmetric_eigenvalues(a.matrix(), {.expect_psd = true}).eigenvalues;
}

}  // namespace

Alpha::Alpha(double value) : value_(value), shannon_limit_(std::abs(value - 1.0) < kShannonRoutingTol) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DimensionError("Alpha: order must be finite and > 0, got " + std::to_string(value));
  }
}

NpdMatrix::NpdMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw InvalidNpdError("NpdMatrix: matrix is not square");
  }
  double max_abs = 0.0;
  for (double v : m_.data()) max_abs = std::max(max_abs, std::abs(v));
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    for (std::size_t j = i + 1; j < m_.cols(); ++j) {
      if (std::abs(m_(i, j) - m_(j, i)) > kSymmetryTol * std::max(1.0, max_abs)) {
        throw InvalidNpdError("NpdMatrix: matrix is not symmetric within 1e-8");
      }
    }
  }
  const double t = m_.trace();
  if (std::abs(t - 1.0) > kTraceTol) {
    throw InvalidNpdError("NpdMatrix: trace " + std::to_string(t) + " is not 1 within 1e-9");
  }
}

NpdMatrix NpdMatrix::from_gram(const Matrix& k) { return NpdMatrix(trace_normalize(k)); }

NpdMatrix NpdMatrix::from_features(const Matrix& z, KernelSpec kernel) {
  return from_gram(gram_matrix(z, kernel));
}

Matrix gram_matrix(const Matrix& z, KernelSpec kernel) {
  switch (kernel.kind) {
    case KernelKind::linear_on_l2_rows: {
      if (kernel.degree != 1) {
        throw DimensionError("gram_matrix: only degree 1 is registered for the linear kernel");
      }
      const Matrix unit_rows = l2_normalize_rows(z);
      return matmul_bt(unit_rows, unit_rows);
    }
  }
  throw DimensionError("gram_matrix: unknown kernel kind");
}

double matrix_entropy(const NpdMatrix& a, Alpha alpha) {
  if (alpha.shannon_limit()) return shannon_entropy_limit(a);
  const auto spectrum = clamped_spectrum(a);
  double potential = 0.0;
  for (double lambda : spectrum) {
    if (lambda > 0.0) potential += std::pow(lambda, alpha.value());
  }
  const double s = std::log2(potential) / (1.0 - alpha.value());
  return std::max(0.0, s);
}

double shannon_entropy_limit(const NpdMatrix& a) {
  const auto spectrum = clamped_spectrum(a);
  double s = 0.0;
  for (double lambda : spectrum) {
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return std::max(0.0, s);
}

double information_potential(const NpdMatrix& a, Alpha alpha) {
  const auto spectrum = clamped_spectrum(a);
  double potential = 0.0;
  for (double lambda : spectrum) {
    if (lambda > 0.0) potential += std::pow(lambda, alpha.value());
  }
  return potential;
}

double joint_entropy(const NpdMatrix& a, const NpdMatrix& b, Alpha alpha) {
  const Matrix product = hadamard(a.matrix(), b.matrix());
  const double t = product.trace();
  if (!(t > 1e-12)) {
    throw DegenerateKernelError("joint_entropy: Hadamard product trace " + std::to_string(t) +
                                " is not above 1e-12");
  }
  return matrix_entropy(NpdMatrix(product * (1.0 / t)), alpha);
}

double mutual_information(const NpdMatrix& a, const NpdMatrix& b, Alpha alpha) {
  return matrix_entropy(a, alpha) + matrix_entropy(b, alpha) - joint_entropy(a, b, alpha);
}

}  // namespace itrd
