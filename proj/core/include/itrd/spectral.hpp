#ifndef ITRD_SPECTRAL_HPP
#define ITRD_SPECTRAL_HPP

#include <optional>
#include <vector>

#include "itrd/matrix.hpp"

namespace itrd {

/// Eigenvalues of a symmetric matrix, sorted descending. When eigenvectors
/// are requested, column j of `eigenvectors` pairs with eigenvalues[j] and
/// Q * diag(lambda) * Q^T reconstructs the symmetrized input.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::optional<Matrix> eigenvectors;
};

struct EigenOptions {
  bool eigenvectors = false;
  /// Apply the PSD rounding policy: eigenvalues in [-1e-9, 0) clamp to 0,
  /// anything below -1e-9 is rejected as genuinely non-PSD input.
  bool expect_psd = false;
};

/// Cyclic Jacobi eigensolver for symmetric matrices. The input must be
/// symmetric within 1e-8 (it is symmetrized as (A + A^T)/2 first); the sweep
/// loop stops once the off-diagonal norm falls below 1e-12 relative to
/// max(1, ||A||_F) and gives up after 100 sweeps.
SpectralDecomposition symmetric_eigenvalues(const Matrix& a, EigenOptions opts = {});

/// Q f(Lambda) Q^T for f(x) = x^power, with PSD clamping of the spectrum.
/// Requires power >= 0; clamped zero eigenvalues map to 0 (0^0 := 0 here,
/// matching the continuity convention used for entropies).
Matrix symmetric_matrix_power(const Matrix& a, double power);

}  // namespace itrd

#endif  // ITRD_SPECTRAL_HPP
