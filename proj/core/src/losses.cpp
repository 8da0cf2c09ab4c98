#include "itrd/losses.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "itrd/entropy.hpp"
#include "itrd/errors.hpp"
#include "itrd/spectral.hpp"

namespace itrd {

namespace {

constexpr double kTiny = 1e-30;
constexpr double kLn2 = std::numbers::ln2;

void require_batch_pair(const Matrix& zs, const Matrix& zt, const char* op, bool same_cols) {
  if (zs.rows() != zt.rows() || (same_cols && zs.cols() != zt.cols())) {
    throw DimensionError(std::string(op) + ": student batch " + std::to_string(zs.rows()) + "x" +
                         std::to_string(zs.cols()) + " vs teacher " + std::to_string(zt.rows()) +
                         "x" + std::to_string(zt.cols()));
  }
}

struct CorrForward {
  BatchNormContext student;
  Matrix teacher_hat;
  CorrelationDiagonal diag;
};

CorrForward corr_forward(const Matrix& zs, const Matrix& zt, double std_eps, StdMode mode) {
  require_batch_pair(zs, zt, "cross_correlation_diag", /*same_cols=*/true);
  CorrForward fwd{batch_normalize_ctx(zs, std_eps, mode), batch_normalize(zt, std_eps, mode), {}};
  const std::size_t n = zs.rows();
  const std::size_t d = zs.cols();
  fwd.diag.values.assign(d, 0.0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t i = 0; i < d; ++i)
      fwd.diag.values[i] += fwd.student.normalized(b, i) * fwd.teacher_hat(b, i);
  for (double& v : fwd.diag.values) v /= static_cast<double>(n);
  return fwd;
}

double corr_term(double v, double alpha) { return std::pow((v - 1.0) * (v - 1.0) + kTiny, alpha); }

struct MiForward {
  Matrix zs_unit;   // row-normalized student
  Matrix gram_t;    // raw teacher Gram
  Matrix gs_hat;    // trace-normalized student Gram
  Matrix gst_hat;   // trace-normalized Hadamard Gram
  double trace_s = 0.0;
  double trace_st = 0.0;
};

MiForward mi_forward(const Matrix& zs, const Matrix& zt) {
  require_batch_pair(zs, zt, "mi_loss", /*same_cols=*/false);
  if (zs.rows() < 2) {
    throw DimensionError("mi_loss: need at least 2 rows, got " + std::to_string(zs.rows()));
  }
  MiForward fwd;
  fwd.zs_unit = l2_normalize_rows(zs);
  const Matrix zt_unit = l2_normalize_rows(zt);
  Matrix gram_s = matmul_bt(fwd.zs_unit, fwd.zs_unit);
  fwd.gram_t = matmul_bt(zt_unit, zt_unit);
  Matrix gram_st = hadamard(gram_s, fwd.gram_t);
  fwd.trace_s = gram_s.trace();
  fwd.trace_st = gram_st.trace();
  fwd.gs_hat = trace_normalize(gram_s);
  fwd.gst_hat = trace_normalize(gram_st);
  return fwd;
}

double mi_value(const MiForward& fwd, MiVariant variant, double alpha) {
  switch (variant) {
    case MiVariant::no_log:
      return frobenius_norm_sq(fwd.gs_hat) - frobenius_norm_sq(fwd.gst_hat);
    case MiVariant::log_potential:
      return std::log2(frobenius_norm_sq(fwd.gs_hat)) - std::log2(frobenius_norm_sq(fwd.gst_hat));
    case MiVariant::eigen_exact: {
      const Alpha a(alpha);
      return matrix_entropy(NpdMatrix(fwd.gst_hat), a) - matrix_entropy(NpdMatrix(fwd.gs_hat), a);
    }
  }
  throw DimensionError("mi_loss: unknown variant");
}

// d tr(A^alpha)/dA = alpha A^(alpha-1) for symmetric A, plus the potential
// itself, from a single eigendecomposition.
struct SpectralPower {
  Matrix power;  // A^(alpha-1)
  double potential = 0.0;
};

SpectralPower spectral_power(const Matrix& a, double alpha) {
  auto decomp = symmetric_eigenvalues(a, {.eigenvectors = true, .expect_psd = true});
  const Matrix& q = *decomp.eigenvectors;
  const std::size_t n = a.rows();
  SpectralPower out{Matrix(n, n, 0.0), 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = decomp.eigenvalues[k];
    if (lambda <= 0.0) continue;
    out.potential += std::pow(lambda, alpha);
    const double f = std::pow(lambda, alpha - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double qf = q(i, k) * f;
      if (qf == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out.power(i, j) += qf * q(j, k);
    }
  }
  return out;
}

// Backward through G_hat = G / tr(G): upstream/trace minus the trace
// direction on the diagonal.
Matrix trace_normalize_backward(const Matrix& g_hat, double trace, const Matrix& upstream) {
  double inner = 0.0;
  for (std::size_t i = 0; i < g_hat.rows(); ++i)
    for (std::size_t j = 0; j < g_hat.cols(); ++j) inner += upstream(i, j) * g_hat(i, j);
  Matrix out = upstream * (1.0 / trace);
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) -= inner / trace;
  return out;
}

}  // namespace

CorrelationDiagonal cross_correlation_diag(const Matrix& zs, const Matrix& zt, double std_eps,
                                           StdMode mode) {
  return corr_forward(zs, zt, std_eps, mode).diag;
}

double correlation_loss(const CorrelationDiagonal& v, double alpha_corr, double log_floor) {
  if (!(alpha_corr > 0.0)) throw DimensionError("correlation_loss: alpha must be > 0");
  if (!(log_floor > 0.0)) throw DimensionError("correlation_loss: log_floor must be > 0");
  double sum = 0.0;
  for (double vi : v.values) sum += corr_term(vi, alpha_corr);
  return std::log2(std::max(sum, log_floor));
}

double mi_loss(const Matrix& zs, const Matrix& zt, MiVariant variant, double alpha) {
  return mi_value(mi_forward(zs, zt), variant, alpha);
}

LossBreakdown itrd_loss(const Matrix& zs_raw, const Matrix& zt, const EmbeddingLayer* embed,
                        double xent, const ItrdConfig& cfg) {
  Matrix embedded;
  const Matrix* ze = &zs_raw;
  if (embed != nullptr) {
    embedded = embed->forward(zs_raw);
    ze = &embedded;
  }
  if (ze->cols() != zt.cols()) {
    throw DimensionError("itrd_loss: student dimension " + std::to_string(ze->cols()) +
                         " does not match teacher " + std::to_string(zt.cols()) +
                         (embed == nullptr ? " and no embedding was given" : " after embedding"));
  }
  LossBreakdown breakdown;
  breakdown.xent = xent;
  breakdown.corr = correlation_loss(cross_correlation_diag(*ze, zt, cfg.std_eps, cfg.std_mode),
                                    cfg.alpha_corr, cfg.corr_log_floor);
  breakdown.mi = mi_loss(*ze, zt, cfg.mi_variant, cfg.alpha_mi);
  breakdown.total = xent + cfg.beta_corr * breakdown.corr + cfg.beta_mi * breakdown.mi;
  return breakdown;
}

Matrix correlation_loss_grad(const Matrix& zs, const Matrix& zt, const ItrdConfig& cfg) {
  const auto fwd = corr_forward(zs, zt, cfg.std_eps, cfg.std_mode);
  const double alpha = cfg.alpha_corr;
  double sum = 0.0;
  for (double vi : fwd.diag.values) sum += corr_term(vi, alpha);
  if (sum <= cfg.corr_log_floor) {
    return Matrix(zs.rows(), zs.cols(), 0.0);  // inside the clamp, loss is constant
  }
  const std::size_t n = zs.rows();
  const std::size_t d = zs.cols();
  // dL/dv_i = (1 / (sum ln 2)) * alpha * ((v_i-1)^2 + tiny)^(alpha-1) * 2 (v_i - 1)
  std::vector<double> grad_v(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double r = fwd.diag.values[i] - 1.0;
    grad_v[i] = 2.0 * alpha * std::pow(r * r + kTiny, alpha - 1.0) * r / (sum * kLn2);
  }
  Matrix grad_zhat(n, d);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t i = 0; i < d; ++i)
      grad_zhat(b, i) = grad_v[i] * fwd.teacher_hat(b, i) / static_cast<double>(n);
  return batch_normalize_backward(fwd.student, grad_zhat, cfg.std_eps, cfg.std_mode);
}

Matrix mi_loss_grad(const Matrix& zs, const Matrix& zt, MiVariant variant, double alpha) {
  const auto fwd = mi_forward(zs, zt);
  const std::size_t n = zs.rows();

  Matrix up_s(n, n);   // dL/d gs_hat
  Matrix up_st(n, n);  // dL/d gst_hat
  switch (variant) {
    case MiVariant::no_log:
      up_s = fwd.gs_hat * 2.0;
      up_st = fwd.gst_hat * -2.0;
      break;
    case MiVariant::log_potential: {
      up_s = fwd.gs_hat * (2.0 / (frobenius_norm_sq(fwd.gs_hat) * kLn2));
      up_st = fwd.gst_hat * (-2.0 / (frobenius_norm_sq(fwd.gst_hat) * kLn2));
      break;
    }
    case MiVariant::eigen_exact: {
      if (!(alpha > 1.0)) {
        throw DimensionError("mi_loss_grad: eigen_exact gradient requires alpha > 1");
      }
      const double c = alpha / ((1.0 - alpha) * kLn2);
      const auto ps = spectral_power(fwd.gs_hat, alpha);
      const auto pst = spectral_power(fwd.gst_hat, alpha);
      up_st = pst.power * (c / pst.potential);
      up_s = ps.power * (-c / ps.potential);
      break;
    }
  }

  // gst_hat depends on gs through the Hadamard product; gs_hat directly.
  Matrix grad_gs = trace_normalize_backward(fwd.gs_hat, fwd.trace_s, up_s);
  const Matrix grad_gst = trace_normalize_backward(fwd.gst_hat, fwd.trace_st, up_st);
  grad_gs += hadamard(grad_gst, fwd.gram_t);

  // gs = zu zu^T with zu the unit rows: dL/dzu = (W + W^T) zu.
  const Matrix w_sym = grad_gs + grad_gs.transpose();
  const Matrix grad_unit = matmul(w_sym, fwd.zs_unit);
  return l2_normalize_rows_backward(zs, fwd.zs_unit, grad_unit);
}

}  // namespace itrd
