// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Each check pins its own tolerance; the numbers printed are the measured
// quantities the tolerance applies to.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "itrd/distill.hpp"
#include "itrd/entropy.hpp"
#include "itrd/losses.hpp"
#include "itrd/matrix.hpp"
#include "itrd/mlp.hpp"
#include "itrd/rng.hpp"

using namespace itrd;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Matrix random_features(std::size_t n, std::size_t d, Rng& rng) {
  Matrix z(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) z(i, j) = rng.normal();
  return z;
}

Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, const Matrix& at) {
  const double h = 1e-5;
  Matrix grad(at.rows(), at.cols());
  Matrix probe = at;
  for (std::size_t i = 0; i < at.rows(); ++i)
    for (std::size_t j = 0; j < at.cols(); ++j) {
      probe(i, j) = at(i, j) + h;
      const double hi = f(probe);
      probe(i, j) = at(i, j) - h;
      const double lo = f(probe);
      probe(i, j) = at(i, j);
      grad(i, j) = (hi - lo) / (2.0 * h);
    }
  return grad;
}

double max_rel_err(const Matrix& analytic, const Matrix& numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.rows(); ++i)
    for (std::size_t j = 0; j < analytic.cols(); ++j) {
      const double denom = std::max(1e-8, std::fabs(numeric(i, j)));
      worst = std::max(worst, std::fabs(analytic(i, j) - numeric(i, j)) / denom);
    }
  return worst;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool criterion1(std::string& detail) {
  const double t0 = now_s();
  double worst = 0.0;
  for (std::size_t n : {2u, 4u, 8u, 16u, 64u}) {
    const NpdMatrix u(Matrix::identity(n) * (1.0 / static_cast<double>(n)));
    const double expected = std::log2(static_cast<double>(n));
    for (double alpha : {0.5, 1.01, 1.5, 2.0, 3.0})
      worst = std::max(worst, std::fabs(matrix_entropy(u, Alpha(alpha)) - expected));
  }
  Matrix rank_one(8, 8, 0.0);
  rank_one(0, 0) = 1.0;
  for (double alpha : {0.5, 1.01, 1.5, 2.0, 3.0})
    worst = std::max(worst, std::fabs(matrix_entropy(NpdMatrix(rank_one), Alpha(alpha))));
  const double dt = now_s() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "uniform and rank-one spectra: max entropy error %.2e (tol 1e-9), %.2fs "
                "(limit 1s)",
                worst, dt);
  detail = buf;
  return worst < 1e-9 && dt < 1.0;
}

bool criterion2(std::string& detail) {
  const double t0 = now_s();
  Rng rng(1001);
  double worst_proxy = 0.0;
  double worst_frob = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(31);
    const Matrix zs = random_features(n, 1 + rng.below(16), rng);
    const Matrix zt = random_features(n, 1 + rng.below(16), rng);
    worst_proxy = std::max(worst_proxy,
                           std::fabs(mi_loss(zs, zt, MiVariant::eigen_exact, 2.0) -
                                     mi_loss(zs, zt, MiVariant::log_potential)));
    const NpdMatrix a = NpdMatrix::from_features(zs);
    worst_frob = std::max(worst_frob, std::fabs(matrix_entropy(a, Alpha(2.0)) +
                                                std::log2(frobenius_norm_sq(a.matrix()))));
  }
  const double dt = now_s() - t0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "200 pairs: eigen-vs-log-potential gap %.2e, Frobenius identity gap %.2e "
                "(tol 1e-8), %.2fs (limit 10s)",
                worst_proxy, worst_frob, dt);
  detail = buf;
  return worst_proxy < 1e-8 && worst_frob < 1e-8 && dt < 10.0;
}

bool criterion3(std::string& detail) {
  Rng rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(15);
    const NpdMatrix a = NpdMatrix::from_features(random_features(n, n + 2, rng));
    worst = std::max(worst, std::fabs(matrix_entropy(a, Alpha(1.0001)) -
                                      shannon_entropy_limit(a)));
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "100 matrices: max |S_1.0001 - Shannon| = %.2e (tol 1e-3)",
                worst);
  detail = buf;
  return worst < 1e-3;
}

bool criterion4(std::string& detail) {
  const double t0 = now_s();
  Rng rng(1003);
  double worst = 0.0;
  for (double alpha : {1.01, 1.5}) {
    ItrdConfig cfg;
    cfg.alpha_corr = alpha;
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix zs = random_features(8, 5, rng);
      const Matrix zt = random_features(8, 5, rng);
      const auto f = [&](const Matrix& z) {
        return correlation_loss(cross_correlation_diag(z, zt, cfg.std_eps), cfg.alpha_corr,
                                cfg.corr_log_floor);
      };
      worst = std::max(worst,
                       max_rel_err(correlation_loss_grad(zs, zt, cfg), numeric_gradient(f, zs)));
    }
  }
  struct Case {
    MiVariant variant;
    double alpha;
  };
  for (const Case c : {Case{MiVariant::no_log, 2.0}, Case{MiVariant::log_potential, 2.0},
                       Case{MiVariant::eigen_exact, 2.0}}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix zs = random_features(8, 5, rng);
      const Matrix zt = random_features(8, 5, rng);
      const auto f = [&](const Matrix& z) { return mi_loss(z, zt, c.variant, c.alpha); };
      worst = std::max(
          worst, max_rel_err(mi_loss_grad(zs, zt, c.variant, c.alpha), numeric_gradient(f, zs)));
    }
  }
  const double dt = now_s() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "50 instances per op at n=8 d=5: max relative gradient error %.2e (tol 1e-4), "
                "%.2fs (limit 30s)",
                worst, dt);
  detail = buf;
  return worst < 1e-4 && dt < 30.0;
}

bool criterion5(std::string& detail) {
  const NpdMatrix a(Matrix::from_rows({{0.6, 0.2}, {0.2, 0.4}}));
  const NpdMatrix half(Matrix::identity(2) * 0.5);
  const double gaps[3] = {
      std::fabs(matrix_entropy(a, Alpha(2.0)) - 0.7369655941662062),
      std::fabs(joint_entropy(a, half, Alpha(2.0)) - 0.9434164716336325),
      std::fabs(mutual_information(a, half, Alpha(2.0)) - 0.7935491225325736),
  };
  const double worst = std::max({gaps[0], gaps[1], gaps[2]});
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "2x2 closed forms: entropy gap %.2e, joint gap %.2e, MI gap %.2e (tol 1e-6)",
                gaps[0], gaps[1], gaps[2]);
  detail = buf;
  return worst < 1e-6;
}

bool criterion6(std::string& detail) {
  Rng rng(1004);
  double lowest = 0.0;
  // batches drawn from the regime the losses see: d <= 4 admits real negatives
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 8 + rng.below(57);
    const NpdMatrix a = NpdMatrix::from_features(random_features(n, 5 + rng.below(12), rng));
    const NpdMatrix b = NpdMatrix::from_features(random_features(n, 5 + rng.below(12), rng));
    for (double alpha : {1.01, 2.0})
      lowest = std::min(lowest, mutual_information(a, b, Alpha(alpha)));
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "1000 Gram pairs: min I_alpha = %.2e (floor -1e-8)", lowest);
  detail = buf;
  return lowest >= -1e-8;
}

bool criterion7(std::string& detail) {
  const double t0 = now_s();
  double mean_itrd = 0.0;
  double mean_xe = 0.0;
  int wins = 0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DemoConfig itrd_cfg;
    itrd_cfg.seed = seed;
    DemoConfig xe_cfg = itrd_cfg;
    xe_cfg.loss.beta_corr = 0.0;
    xe_cfg.loss.beta_mi = 0.0;
    const double acc_itrd = run_demo(itrd_cfg).student_run.final_accuracy;
    const double acc_xe = run_demo(xe_cfg).student_run.final_accuracy;
    mean_itrd += acc_itrd;
    mean_xe += acc_xe;
    if (acc_itrd >= acc_xe) ++wins;
    char pair[48];
    std::snprintf(pair, sizeof(pair), " s%llu %.3f/%.3f",
                  static_cast<unsigned long long>(seed), acc_itrd, acc_xe);
    per_seed += pair;
  }
  mean_itrd /= 5.0;
  mean_xe /= 5.0;
  const double dt = now_s() - t0;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "means itrd %.4f vs xe %.4f, itrd >= xe on %d/5 seeds (need mean >= and 4/5),"
                "%s, %.0fs (limit 300s)",
                mean_itrd, mean_xe, wins, per_seed.c_str(), dt);
  detail = buf;
  return mean_itrd >= mean_xe && wins >= 4 && dt < 300.0;
}

bool criterion8(std::string& detail) {
  const std::string dir = ITRD_TMP_DIR;
  const std::string out_a = dir + "/accept_demo_a.json";
  const std::string out_b = dir + "/accept_demo_b.json";
  const std::string base = std::string("ITRD_LOG=error \"") + ITRD_CLI_PATH +
                           "\" demo --seed 0 --out \"";
  const std::string log = dir + "/accept_demo.log";
  int rc_a = std::system((base + out_a + "\" > \"" + log + "\" 2>&1").c_str());
  int rc_b = std::system((base + out_b + "\" > \"" + log + "\" 2>&1").c_str());
  const bool ran = WIFEXITED(rc_a) && WEXITSTATUS(rc_a) == 0 && WIFEXITED(rc_b) &&
                   WEXITSTATUS(rc_b) == 0;
  const std::string a = slurp(out_a);
  const std::string b = slurp(out_b);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "two cmd_demo runs at seed 0: %zu and %zu report bytes, identical: %s",
                a.size(), b.size(), (!a.empty() && a == b) ? "yes" : "no");
  detail = buf;
  return ran && !a.empty() && a == b;
}

bool criterion9(std::string& detail) {
  Rng rng(1005);
  const Matrix zs = random_features(64, 128, rng);
  const Matrix zt = random_features(64, 128, rng);
  const ItrdConfig cfg;
  std::vector<double> times;
  double sink = 0.0;
  for (int rep = 0; rep < 21; ++rep) {
    const double t0 = now_s();
    const LossBreakdown fwd = itrd_loss(zs, zt, nullptr, 0.0, cfg);
    const Matrix g1 = correlation_loss_grad(zs, zt, cfg);
    const Matrix g2 = mi_loss_grad(zs, zt, cfg.mi_variant, cfg.alpha_mi);
    times.push_back(now_s() - t0);
    sink += fwd.total + g1(0, 0) + g2(0, 0);
  }
  std::sort(times.begin(), times.end());
  const double median_ms = times[times.size() / 2] * 1e3;
  char buf[140];
  std::snprintf(buf, sizeof(buf),
                "itrd_loss forward+gradients at n=64 d=128: median %.3f ms over 21 reps "
                "(limit 5 ms)",
                median_ms);
  detail = buf;
  return median_ms < 5.0 && std::isfinite(sink);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)(std::string&);
  };
  const Criterion criteria[] = {
      {"estimator identities", criterion1},
      {"proxy identity oracle", criterion2},
      {"Shannon limit", criterion3},
      {"gradient suite", criterion4},
      {"hand-computed 2x2 values", criterion5},
      {"MI nonnegativity", criterion6},
      {"desk-scale distillation", criterion7},
      {"demo determinism", criterion8},
      {"loss throughput", criterion9},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", index, c.name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
