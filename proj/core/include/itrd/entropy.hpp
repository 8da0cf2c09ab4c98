#ifndef ITRD_ENTROPY_HPP
#define ITRD_ENTROPY_HPP

#include "itrd/matrix.hpp"

namespace itrd {

/// Renyi entropy order. Any positive finite value is accepted; orders within
/// 1e-6 of 1 are routed to the Shannon limit, where the generic formula loses
/// precision to cancellation.
class Alpha {
 public:
  explicit Alpha(double value);
  double value() const { return value_; }
  bool shannon_limit() const { return shannon_limit_; }

 private:
  double value_;
  bool shannon_limit_;
};

enum class KernelKind {
  linear_on_l2_rows,  // degree-1 polynomial kernel on L2-normalized rows
};

/// Kernel used for Gram construction. Only the degree-1 polynomial kernel on
/// unit rows is registered; the enum leaves room for RBF or higher degrees
/// without changing any call site.
struct KernelSpec {
  KernelKind kind = KernelKind::linear_on_l2_rows;
  int degree = 1;
};

/// Symmetric PSD matrix with unit trace, the input object of the entropy
/// functional. Construction validates symmetry (1e-8) and trace (1e-9);
/// the eigenvalue clamp policy is applied when the spectrum is taken.
class NpdMatrix {
 public:
  /// Wraps an already trace-1 matrix; throws InvalidNpdError otherwise.
  explicit NpdMatrix(Matrix m);

  /// Trace-normalizes a raw kernel matrix.
  static NpdMatrix from_gram(const Matrix& k);

  /// Gram matrix of a feature batch under `kernel`, trace-normalized.
  static NpdMatrix from_features(const Matrix& z, KernelSpec kernel = {});

  const Matrix& matrix() const { return m_; }
  std::size_t size() const { return m_.rows(); }

 private:
  Matrix m_;
};

/// Pairwise kernel evaluations over a batch (rows = samples). For the
/// degree-1 kernel this is Z'Z'^T with Z' the row-normalized batch:
/// symmetric, PSD, unit diagonal for nonzero rows. Not trace-normalized.
Matrix gram_matrix(const Matrix& z, KernelSpec kernel = {});

/// Matrix-based Renyi alpha-entropy in bits:
///   S_alpha(A) = 1/(1-alpha) * log2( sum_i lambda_i(A)^alpha )
/// with clamped eigenvalues and 0^alpha := 0. Lies in [0, log2 n].
double matrix_entropy(const NpdMatrix& a, Alpha alpha);

/// The alpha -> 1 limit: -sum_i lambda_i log2 lambda_i, with 0 log 0 := 0.
double shannon_entropy_limit(const NpdMatrix& a);

/// tr(A^alpha) = sum_i lambda_i^alpha, the argument of the entropy's log.
/// Related to the entropy by a strictly monotonic transform, so the two are
/// interchangeable as optimization objectives.
double information_potential(const NpdMatrix& a, Alpha alpha);

/// S_alpha(A o B / tr(A o B)): entropy of the trace-normalized Hadamard
/// product. Throws DegenerateKernelError when the Hadamard trace vanishes.
double joint_entropy(const NpdMatrix& a, const NpdMatrix& b, Alpha alpha);

/// I_alpha(A;B) = S_alpha(A) + S_alpha(B) - S_alpha(A,B).
double mutual_information(const NpdMatrix& a, const NpdMatrix& b, Alpha alpha);

}  // namespace itrd

#endif  // ITRD_ENTROPY_HPP
