#include "itrd/distill.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "itrd/errors.hpp"
#include "itrd/rng.hpp"

namespace itrd {

namespace {

constexpr std::size_t kBatchSize = 64;
constexpr double kMomentum = 0.9;

// Stream ids of the per-run generator. Disjoint so that, e.g., consuming
// more shuffle draws (longer schedules) never shifts the weight init.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kEmbedStream = 2;
constexpr std::uint64_t kShuffleStream = 3;

struct Batch {
  Matrix points;
  std::vector<int> labels;
};

Batch gather_batch(const SyntheticDataset& ds, const std::vector<std::size_t>& order,
                   std::size_t begin, std::size_t end) {
  Batch b{Matrix(end - begin, ds.points.cols()), std::vector<int>(end - begin)};
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t j = 0; j < ds.points.cols(); ++j)
      b.points(i - begin, j) = ds.points(order[i], j);
    b.labels[i - begin] = ds.labels[order[i]];
  }
  return b;
}

SgdState make_state(const MlpModel& model) {
  SgdState s;
  for (const Matrix& w : model.weights) s.weight_velocity.emplace_back(w.rows(), w.cols());
  for (const auto& b : model.biases) s.bias_velocity.emplace_back(b.size(), 0.0);
  return s;
}

SgdState make_state(const EmbeddingLayer& embed) {
  SgdState s;
  s.weight_velocity.emplace_back(embed.weight.rows(), embed.weight.cols());
  s.bias_velocity.emplace_back(embed.bias.size(), 0.0);
  return s;
}

void sgd_update(Matrix& param, Matrix& velocity, const Matrix& grad, double lr) {
  for (std::size_t i = 0; i < param.rows(); ++i)
    for (std::size_t j = 0; j < param.cols(); ++j) {
      velocity(i, j) = kMomentum * velocity(i, j) + grad(i, j);
      param(i, j) -= lr * velocity(i, j);
    }
}

void sgd_update(std::vector<double>& param, std::vector<double>& velocity,
                const std::vector<double>& grad, double lr) {
  for (std::size_t j = 0; j < param.size(); ++j) {
    velocity[j] = kMomentum * velocity[j] + grad[j];
    param[j] -= lr * velocity[j];
  }
}

void sgd_update(MlpModel& model, SgdState& state, const MlpGradients& grads, double lr) {
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    sgd_update(model.weights[l], state.weight_velocity[l], grads.weights[l], lr);
    sgd_update(model.biases[l], state.bias_velocity[l], grads.biases[l], lr);
  }
}

void check_arch(const SyntheticDataset& ds, const std::vector<std::size_t>& arch,
                const char* what) {
  if (arch.size() < 2) throw DimensionError(std::string(what) + ": arch needs >= 2 layers");
  if (arch.front() != ds.points.cols())
    throw DimensionError(std::string(what) + ": input width " + std::to_string(arch.front()) +
                         " does not match dataset width " + std::to_string(ds.points.cols()));
  if (arch.back() != static_cast<std::size_t>(ds.classes))
    throw DimensionError(std::string(what) + ": output width " + std::to_string(arch.back()) +
                         " does not match " + std::to_string(ds.classes) + " classes");
}

void check_lr(double lr, const char* what) {
  if (!(lr > 0.0) || !std::isfinite(lr))
    throw DimensionError(std::string(what) + ": lr must be finite and positive");
}

[[noreturn]] void diverged(const char* what, std::size_t epoch) {
  throw TrainingError(std::string(what) + ": non-finite loss at epoch " +
                      std::to_string(epoch + 1));
}

// Step schedule: base lr for the first half, then x0.1 at 1/2 and again at
// 3/4 of the run. Late-epoch steps at the full rate keep bouncing around the
// joint optimum instead of settling into it.
double scheduled_lr(double base, std::size_t epoch, std::size_t total_epochs) {
  double lr = base;
  if (epoch * 2 >= total_epochs) lr *= 0.1;
  if (epoch * 4 >= total_epochs * 3) lr *= 0.1;
  return lr;
}

}  // namespace

MlpModel train_teacher(const SyntheticDataset& dataset, const std::vector<std::size_t>& arch,
                       std::size_t epochs, double lr, std::uint64_t seed) {
  check_arch(dataset, arch, "train_teacher");
  check_lr(lr, "train_teacher");
  const Rng base(seed);
  Rng init_rng = base.stream(kInitStream);
  Rng shuffle_rng = base.stream(kShuffleStream);

  MlpModel model = MlpModel::init(arch, init_rng);
  SgdState state = make_state(model);
  std::vector<std::size_t> order = dataset.train_index;

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    const double epoch_lr = scheduled_lr(lr, epoch, epochs);
    for (std::size_t begin = 0; begin < order.size(); begin += kBatchSize) {
      const std::size_t end = std::min(begin + kBatchSize, order.size());
      if (end - begin < 2) continue;  // a 1-row batch carries no usable signal
      const Batch batch = gather_batch(dataset, order, begin, end);
      const MlpCache cache = forward_cached(model, batch.points);
      const XentResult xent = softmax_cross_entropy(cache.activations.back(), batch.labels);
      if (!std::isfinite(xent.loss)) diverged("train_teacher", epoch);
      const MlpGradients grads = backward(model, cache, xent.grad_logits, nullptr);
      sgd_update(model, state, grads, epoch_lr);
    }
    if (!model.all_finite()) diverged("train_teacher", epoch);
  }
  return model;
}

TrainRun distill_student(const SyntheticDataset& dataset, const MlpModel& teacher,
                         const std::vector<std::size_t>& student_arch, const ItrdConfig& cfg,
                         std::size_t epochs, double lr, std::uint64_t seed) {
  check_arch(dataset, student_arch, "distill_student");
  check_lr(lr, "distill_student");
  if (teacher.input_dim() != dataset.points.cols())
    throw DimensionError("distill_student: teacher input width does not match dataset");

  const std::size_t student_dim = student_arch[student_arch.size() - 2];
  const std::size_t teacher_dim = teacher.representation_dim();
  if (student_dim > teacher_dim)
    throw DimensionError("distill_student: student representation wider than teacher's (" +
                         std::to_string(student_dim) + " > " + std::to_string(teacher_dim) + ")");

  const Rng base(seed);
  Rng init_rng = base.stream(kInitStream);
  Rng shuffle_rng = base.stream(kShuffleStream);

  TrainRun run;
  run.seed = seed;
  run.epochs = epochs;
  run.lr = lr;
  run.student = MlpModel::init(student_arch, init_rng);
  run.student_state = make_state(run.student);
  if (student_dim != teacher_dim) {
    Rng embed_rng = base.stream(kEmbedStream);
    run.embedding = EmbeddingLayer::init(student_dim, teacher_dim, embed_rng);
    run.embedding_state = make_state(*run.embedding);
  }

  const bool use_corr = cfg.beta_corr != 0.0;
  const bool use_mi = cfg.beta_mi != 0.0;
  const Matrix test_points = dataset.split_points(Split::test);
  const std::vector<int> test_labels = dataset.split_labels(Split::test);
  std::vector<std::size_t> order = dataset.train_index;

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    const double epoch_lr = scheduled_lr(lr, epoch, epochs);
    EpochMetrics em;
    std::size_t seen = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += kBatchSize) {
      const std::size_t end = std::min(begin + kBatchSize, order.size());
      if (end - begin < 2) continue;  // batch statistics need >= 2 rows
      const Batch batch = gather_batch(dataset, order, begin, end);
      const std::size_t bsize = end - begin;

      const Matrix zt = forward(teacher, batch.points).representation;
      const MlpCache cache = forward_cached(run.student, batch.points);
      const Matrix& zs_raw = cache.activations[cache.activations.size() - 2];
      const Matrix ze = run.embedding ? run.embedding->forward(zs_raw) : zs_raw;

      const XentResult xent = softmax_cross_entropy(cache.activations.back(), batch.labels);

      double corr_val = 0.0;
      double mi_val = 0.0;
      Matrix grad_ze(ze.rows(), ze.cols());
      try {
        if (use_corr) {
          corr_val = correlation_loss(
              cross_correlation_diag(ze, zt, cfg.std_eps, cfg.std_mode), cfg.alpha_corr,
              cfg.corr_log_floor);
          Matrix g = correlation_loss_grad(ze, zt, cfg);
          g *= cfg.beta_corr;
          grad_ze += g;
        }
        if (use_mi) {
          mi_val = mi_loss(ze, zt, cfg.mi_variant, cfg.alpha_mi);
          Matrix g = mi_loss_grad(ze, zt, cfg.mi_variant, cfg.alpha_mi);
          g *= cfg.beta_mi;
          grad_ze += g;
        }
      } catch (const DegenerateKernelError& e) {
        // a zero Gram here means the updates wiped out the representation,
        // which is a training collapse rather than a bad input
        throw TrainingError("distill_student: collapsed representation at epoch " +
                            std::to_string(epoch + 1) + " (" + e.what() + ")");
      }

      const double total = xent.loss + cfg.beta_corr * corr_val + cfg.beta_mi * mi_val;
      if (!std::isfinite(total)) diverged("distill_student", epoch);
      em.total += total * static_cast<double>(bsize);
      em.corr += corr_val * static_cast<double>(bsize);
      em.mi += mi_val * static_cast<double>(bsize);
      em.xent += xent.loss * static_cast<double>(bsize);
      seen += bsize;

      const Matrix* grad_repr = nullptr;
      Matrix grad_repr_storage(1, 1);
      EmbeddingGradients embed_grads{Matrix(1, 1), {}, Matrix(1, 1)};
      if (use_corr || use_mi) {
        if (run.embedding) {
          embed_grads = embedding_backward(*run.embedding, zs_raw, grad_ze);
          grad_repr_storage = std::move(embed_grads.input);
          grad_repr = &grad_repr_storage;
        } else {
          grad_repr_storage = std::move(grad_ze);
          grad_repr = &grad_repr_storage;
        }
      }

      const MlpGradients grads = backward(run.student, cache, xent.grad_logits, grad_repr);
      sgd_update(run.student, run.student_state, grads, epoch_lr);
      if (run.embedding && (use_corr || use_mi)) {
        sgd_update(run.embedding->weight, run.embedding_state.weight_velocity[0],
                   embed_grads.weight, epoch_lr);
        sgd_update(run.embedding->bias, run.embedding_state.bias_velocity[0], embed_grads.bias,
                   epoch_lr);
      }
    }
    if (!run.student.all_finite()) diverged("distill_student", epoch);
    if (seen > 0) {
      em.total /= static_cast<double>(seen);
      em.corr /= static_cast<double>(seen);
      em.mi /= static_cast<double>(seen);
      em.xent /= static_cast<double>(seen);
    }
    em.test_accuracy = accuracy(run.student, test_points, test_labels);
    run.metrics.push_back(em);
  }
  run.final_accuracy = accuracy(run.student, test_points, test_labels);
  return run;
}

double evaluate(const MlpModel& model, const SyntheticDataset& dataset, Split split) {
  return accuracy(model, dataset.split_points(split), dataset.split_labels(split));
}

DemoResult run_demo(const DemoConfig& cfg) {
  const SyntheticDataset dataset =
      generate_blobs(Rng::derive_seed(cfg.seed, 1), cfg.n_per_class, cfg.classes, cfg.spread);
  const std::size_t c = static_cast<std::size_t>(cfg.classes);
  const std::vector<std::size_t> teacher_arch{2, 64, 64, 16, c};
  const std::vector<std::size_t> student_arch{2, 16, 8, c};

  DemoResult result;
  const MlpModel teacher = train_teacher(dataset, teacher_arch, cfg.teacher_epochs, cfg.lr,
                                         Rng::derive_seed(cfg.seed, 2));
  result.teacher_accuracy = evaluate(teacher, dataset, Split::test);
  result.student_run = distill_student(dataset, teacher, student_arch, cfg.loss, cfg.epochs,
                                       cfg.lr, Rng::derive_seed(cfg.seed, 3));
  return result;
}

}  // namespace itrd
