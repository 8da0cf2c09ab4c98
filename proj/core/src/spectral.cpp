#include "itrd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "itrd/errors.hpp"

namespace itrd {

namespace {

constexpr double kSymmetryTol = 1e-8;
constexpr double kOffDiagTol = 1e-12;
constexpr int kMaxSweeps = 100;
constexpr double kPsdClampTol = 1e-9;

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(s);
}

Matrix symmetrized(const Matrix& a) {
  const std::size_t n = a.rows();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
  if (asym > kSymmetryTol * std::max(1.0, max_abs(a))) {
    throw DimensionError("symmetric_eigenvalues: input asymmetric by " + std::to_string(asym));
  }
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

// One Jacobi rotation annihilating a(p, q); updates a and, if present, the
// accumulated eigenvector matrix q_acc.
void rotate(Matrix& a, std::size_t p, std::size_t q, Matrix* q_acc) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (theta >= 0.0) {
    t = 1.0 / (theta + std::sqrt(theta * theta + 1.0));
  } else {
    t = -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  const std::size_t n = a.rows();
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p || i == q) continue;
    const double aip = a(i, p);
    const double aiq = a(i, q);
    a(i, p) = aip - s * (aiq + tau * aip);
    a(p, i) = a(i, p);
    a(i, q) = aiq + s * (aip - tau * aiq);
    a(q, i) = a(i, q);
  }
  if (q_acc != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      const double qip = (*q_acc)(i, p);
      const double qiq = (*q_acc)(i, q);
      (*q_acc)(i, p) = qip - s * (qiq + tau * qip);
      (*q_acc)(i, q) = qiq + s * (qip - tau * qiq);
    }
  }
}

}  // namespace

SpectralDecomposition symmetric_eigenvalues(const Matrix& a, EigenOptions opts) {
  if (a.rows() != a.cols()) {
    throw DimensionError("symmetric_eigenvalues: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", not square");
  }
  const std::size_t n = a.rows();
  Matrix work = symmetrized(a);
  Matrix q_acc = Matrix::identity(n);
  Matrix* q_ptr = opts.eigenvectors ? &q_acc : nullptr;

  const double scale = std::max(1.0, std::sqrt(frobenius_norm_sq(work)));
  const double tol = kOffDiagTol * scale;

  bool converged = n <= 1;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (offdiag_norm(work) <= tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(work, p, q, q_ptr);
  }
  if (!converged && offdiag_norm(work) > tol) {
    throw NumericError("symmetric_eigenvalues: no convergence within " +
                       std::to_string(kMaxSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return work(i, i) > work(j, j); });

  SpectralDecomposition result;
  result.eigenvalues.reserve(n);
  for (std::size_t k : order) result.eigenvalues.push_back(work(k, k));

  if (opts.expect_psd) {
    for (double& lambda : result.eigenvalues) {
      if (lambda < -kPsdClampTol) {
        throw InvalidNpdError("symmetric_eigenvalues: eigenvalue " + std::to_string(lambda) +
                              " below -1e-9 on matrix declared PSD");
      }
      if (lambda < 0.0) lambda = 0.0;
    }
  }

  if (opts.eigenvectors) {
    Matrix vectors(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) vectors(i, j) = q_acc(i, order[j]);
    result.eigenvectors = std::move(vectors);
  }
  return result;
}

Matrix symmetric_matrix_power(const Matrix& a, double power) {
  if (power < 0.0) {
    throw DimensionError("symmetric_matrix_power: power must be >= 0");
  }
  auto decomp = symmetric_eigenvalues(a, {.eigenvectors = true, .expect_psd = true});
  const Matrix& q = *decomp.eigenvectors;
  const std::size_t n = a.rows();
  Matrix out(n, n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = decomp.eigenvalues[k];
    const double f = (lambda == 0.0) ? 0.0 : std::pow(lambda, power);
    if (f == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double qik = q(i, k) * f;
      if (qik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += qik * q(j, k);
    }
  }
  return out;
}

}  // namespace itrd
