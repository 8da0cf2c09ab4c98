#ifndef ITRD_LOSSES_HPP
#define ITRD_LOSSES_HPP

#include <vector>

#include "itrd/embedding.hpp"
#include "itrd/matrix.hpp"

namespace itrd {

/// How the mutual information loss is evaluated.
enum class MiVariant {
  no_log,         // ||Gs_hat||_F^2 - ||Gst_hat||_F^2: information-potential distance
  log_potential,  // log2 ||Gs_hat||_F^2 - log2 ||Gst_hat||_F^2: alpha=2 entropy difference
  eigen_exact,    // S_alpha(Gst_hat) - S_alpha(Gs_hat) from the eigenspectrum, general alpha
};

/// All hyperparameters of the combined distillation objective. Defaults are
/// the same-architecture setting: beta_corr 2.0, beta_mi 1.0, alpha_corr 1.01
/// (1.50 is the cross-architecture choice), alpha 2 for the MI proxy.
struct ItrdConfig {
  double alpha_corr = 1.01;
  double alpha_mi = 2.0;
  double beta_corr = 2.0;
  double beta_mi = 1.0;
  MiVariant mi_variant = MiVariant::no_log;
  double corr_log_floor = 1e-12;
  double std_eps = 1e-5;
  StdMode std_mode = StdMode::population;
};

/// Per-feature correlations v_i between batch-normalized student and teacher
/// features. With population normalization every entry lies in [-1, 1] up to
/// the eps perturbation.
struct CorrelationDiagonal {
  std::vector<double> values;
};

struct LossBreakdown {
  double total = 0.0;
  double corr = 0.0;
  double mi = 0.0;
  double xent = 0.0;
};

/// Diagonal of the cross-correlation matrix Zs_hat^T Zt_hat / n over
/// batch-normalized columns. Only the diagonal is ever materialized; the
/// full d x d matrix is not needed by the loss.
CorrelationDiagonal cross_correlation_diag(const Matrix& zs, const Matrix& zt, double std_eps,
                                           StdMode mode = StdMode::population);

/// log2( max(sum_i |v_i - 1|^(2 alpha), log_floor) ). The floor bounds the
/// loss at perfect correlation, where the raw formula diverges to -inf.
/// |v-1|^(2 alpha) is evaluated as ((v-1)^2 + 1e-30)^alpha so the
/// non-integer power stays differentiable at v = 1.
double correlation_loss(const CorrelationDiagonal& v, double alpha_corr, double log_floor);

/// Mutual-information loss between student and teacher feature batches:
/// rows are L2-normalized, linear Grams Gs and Gt are formed, Gst = Gs o Gt,
/// and Gs and Gst are trace-normalized. The teacher marginal entropy term is
/// omitted throughout (the teacher is fixed). `alpha` is used only by the
/// eigen_exact variant.
double mi_loss(const Matrix& zs, const Matrix& zt, MiVariant variant, double alpha = 2.0);

/// The combined objective: xent + beta_corr * corr + beta_mi * mi, with both
/// distillation terms evaluated on the embedded student features. `embed`
/// may be null when student and teacher dimensions already match.
LossBreakdown itrd_loss(const Matrix& zs_raw, const Matrix& zt, const EmbeddingLayer* embed,
                        double xent, const ItrdConfig& cfg);

/// Analytic d(correlation_loss)/dZs, chained through batch normalization
/// (both the mean and the std depend on Zs). Zero inside the floor clamp.
/// The teacher input is a constant in this and every other gradient path.
Matrix correlation_loss_grad(const Matrix& zs, const Matrix& zt, const ItrdConfig& cfg);

/// Analytic d(mi_loss)/dZs, chained through row normalization, Gram
/// construction, the Hadamard product, and trace normalization. The
/// eigen_exact variant requires alpha > 1.
Matrix mi_loss_grad(const Matrix& zs, const Matrix& zt, MiVariant variant, double alpha = 2.0);

}  // namespace itrd

#endif  // ITRD_LOSSES_HPP
