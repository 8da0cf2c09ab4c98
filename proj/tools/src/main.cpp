#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itrd/csv.hpp"
#include "itrd/distill.hpp"
#include "itrd/embedding.hpp"
#include "itrd/entropy.hpp"
#include "itrd/errors.hpp"
#include "itrd/losses.hpp"
#include "itrd/matrix.hpp"
#include "itrd/rng.hpp"

#include "log.hpp"
#include "report.hpp"

namespace {

using itrd::cli::log_debug;
using itrd::cli::log_info;
using itrd::cli::MetricsReport;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitTraining = 4;

const std::map<std::string, itrd::MiVariant> kMiVariants{
    {"no_log", itrd::MiVariant::no_log},
    {"log_potential", itrd::MiVariant::log_potential},
    {"eigen_exact", itrd::MiVariant::eigen_exact},
};

std::string variant_name(itrd::MiVariant v) {
  for (const auto& [name, value] : kMiVariants)
    if (value == v) return name;
  return "?";
}

struct EntropyArgs {
  std::string input;
  double alpha = 2.0;
};

struct MiArgs {
  std::string a;
  std::string b;
  double alpha = 2.0;
};

struct LossArgs {
  std::string student;
  std::string teacher;
  itrd::ItrdConfig cfg;
  std::optional<std::uint64_t> embed_seed;
};

struct DemoArgs {
  std::uint64_t seed = 0;
  std::size_t epochs = 200;
  std::size_t teacher_epochs = 200;
  double lr = 0.05;
  std::string variant = "itrd";
};

MetricsReport cmd_entropy(const EntropyArgs& args) {
  const itrd::Matrix features = itrd::read_feature_csv(args.input);
  log_info("loaded %zu x %zu features from %s", features.rows(), features.cols(),
           args.input.c_str());
  const itrd::NpdMatrix gram = itrd::NpdMatrix::from_features(features);
  const double entropy = itrd::matrix_entropy(gram, itrd::Alpha(args.alpha));

  MetricsReport report;
  report.command = "entropy";
  report.config = {{"input", args.input}, {"alpha", args.alpha}};
  report.results = {{"entropy_bits", entropy},
                    {"rows", features.rows()},
                    {"cols", features.cols()}};
  return report;
}

MetricsReport cmd_mi(const MiArgs& args) {
  const itrd::Matrix a = itrd::read_feature_csv(args.a);
  const itrd::Matrix b = itrd::read_feature_csv(args.b);
  if (a.rows() != b.rows())
    throw itrd::DimensionError("mi: " + args.a + " has " + std::to_string(a.rows()) +
                               " rows, " + args.b + " has " + std::to_string(b.rows()));
  const itrd::Alpha alpha(args.alpha);
  const itrd::NpdMatrix ka = itrd::NpdMatrix::from_features(a);
  const itrd::NpdMatrix kb = itrd::NpdMatrix::from_features(b);
  const double sa = itrd::matrix_entropy(ka, alpha);
  const double sb = itrd::matrix_entropy(kb, alpha);
  const double joint = itrd::joint_entropy(ka, kb, alpha);

  MetricsReport report;
  report.command = "mi";
  report.config = {{"a", args.a}, {"b", args.b}, {"alpha", args.alpha}};
  report.results = {{"entropy_a_bits", sa},
                    {"entropy_b_bits", sb},
                    {"joint_entropy_bits", joint},
                    {"mutual_information_bits", sa + sb - joint}};
  return report;
}

MetricsReport cmd_loss(const LossArgs& args) {
  const itrd::Matrix student = itrd::read_feature_csv(args.student);
  const itrd::Matrix teacher = itrd::read_feature_csv(args.teacher);
  if (student.rows() != teacher.rows())
    throw itrd::DimensionError("loss: " + args.student + " has " +
                               std::to_string(student.rows()) + " rows, " + args.teacher +
                               " has " + std::to_string(teacher.rows()));
  if (student.cols() > teacher.cols())
    throw itrd::DimensionError("loss: student has more columns than teacher (" +
                               std::to_string(student.cols()) + " > " +
                               std::to_string(teacher.cols()) + ")");

  std::optional<itrd::EmbeddingLayer> embed;
  if (student.cols() != teacher.cols()) {
    if (!args.embed_seed)
      throw itrd::DimensionError(
          "loss: column mismatch (" + std::to_string(student.cols()) + " vs " +
          std::to_string(teacher.cols()) + ") needs --embed-seed for the bridging embedding");
    itrd::Rng rng(*args.embed_seed);
    embed = itrd::EmbeddingLayer::init(student.cols(), teacher.cols(), rng);
    log_info("embedding %zu -> %zu initialized from seed %llu", student.cols(), teacher.cols(),
             static_cast<unsigned long long>(*args.embed_seed));
  }

  const itrd::LossBreakdown breakdown =
      itrd::itrd_loss(student, teacher, embed ? &*embed : nullptr, 0.0, args.cfg);

  MetricsReport report;
  report.command = "loss";
  report.config = {{"student", args.student},
                   {"teacher", args.teacher},
                   {"alpha_corr", args.cfg.alpha_corr},
                   {"alpha_mi", args.cfg.alpha_mi},
                   {"beta_corr", args.cfg.beta_corr},
                   {"beta_mi", args.cfg.beta_mi},
                   {"mi_variant", variant_name(args.cfg.mi_variant)}};
  if (args.embed_seed) report.config["embed_seed"] = *args.embed_seed;
  report.results = {{"corr", breakdown.corr},
                    {"mi", breakdown.mi},
                    {"weighted_sum", breakdown.total}};
  return report;
}

MetricsReport cmd_demo(const DemoArgs& args, std::string& summary_line) {
  itrd::DemoConfig cfg;
  cfg.seed = args.seed;
  cfg.epochs = args.epochs;
  cfg.teacher_epochs = args.teacher_epochs;
  cfg.lr = args.lr;
  if (args.variant == "xent") {
    cfg.loss.beta_corr = 0.0;
    cfg.loss.beta_mi = 0.0;
  }

  const itrd::DemoResult result = itrd::run_demo(cfg);
  const itrd::TrainRun& run = result.student_run;
  log_info("teacher test accuracy %.4f", result.teacher_accuracy);

  MetricsReport report;
  report.command = "demo";
  report.config = {{"seed", cfg.seed},
                   {"epochs", cfg.epochs},
                   {"variant", args.variant},
                   {"classes", cfg.classes},
                   {"n_per_class", cfg.n_per_class},
                   {"spread", cfg.spread},
                   {"lr", cfg.lr},
                   {"teacher_epochs", cfg.teacher_epochs},
                   {"alpha_corr", cfg.loss.alpha_corr},
                   {"alpha_mi", cfg.loss.alpha_mi},
                   {"beta_corr", cfg.loss.beta_corr},
                   {"beta_mi", cfg.loss.beta_mi},
                   {"mi_variant", variant_name(cfg.loss.mi_variant)}};
  report.results = {{"teacher_accuracy", result.teacher_accuracy},
                    {"final_accuracy", run.final_accuracy}};

  auto series_of = [&run](auto pick) {
    std::vector<double> s;
    s.reserve(run.metrics.size());
    for (const auto& em : run.metrics) s.push_back(pick(em));
    return s;
  };
  report.series = {
      {"train_total", series_of([](const itrd::EpochMetrics& m) { return m.total; })},
      {"train_corr", series_of([](const itrd::EpochMetrics& m) { return m.corr; })},
      {"train_mi", series_of([](const itrd::EpochMetrics& m) { return m.mi; })},
      {"train_xent", series_of([](const itrd::EpochMetrics& m) { return m.xent; })},
      {"test_accuracy", series_of([](const itrd::EpochMetrics& m) { return m.test_accuracy; })},
  };

  char line[128];
  std::snprintf(line, sizeof(line), "%s seed=%llu test_acc=%.6f", args.variant.c_str(),
                static_cast<unsigned long long>(args.seed), run.final_accuracy);
  summary_line = line;
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-theoretic representation distillation toolkit"};
  app.require_subcommand(1);

  EntropyArgs entropy_args;
  auto* entropy = app.add_subcommand(
      "entropy", "Renyi alpha-entropy of the Gram matrix of a feature CSV");
  entropy->add_option("--input", entropy_args.input, "Feature CSV, rows = samples")->required();
  entropy->add_option("--alpha", entropy_args.alpha, "Entropy order, > 0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  MiArgs mi_args;
  auto* mi = app.add_subcommand("mi", "Mutual information between two feature files");
  mi->add_option("--a", mi_args.a, "First feature CSV")->required();
  mi->add_option("--b", mi_args.b, "Second feature CSV (same row count)")->required();
  mi->add_option("--alpha", mi_args.alpha, "Entropy order, > 0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  LossArgs loss_args;
  std::uint64_t embed_seed_raw = 0;
  auto* loss = app.add_subcommand(
      "loss", "Distillation losses between student and teacher feature dumps");
  loss->add_option("--student", loss_args.student, "Student feature CSV")->required();
  loss->add_option("--teacher", loss_args.teacher, "Teacher feature CSV")->required();
  loss->add_option("--alpha-corr", loss_args.cfg.alpha_corr, "Correlation loss order")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  loss->add_option("--alpha-mi", loss_args.cfg.alpha_mi, "MI loss order (eigen_exact only)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  loss->add_option("--beta-corr", loss_args.cfg.beta_corr, "Correlation loss weight")
      ->capture_default_str();
  loss->add_option("--beta-mi", loss_args.cfg.beta_mi, "MI loss weight")->capture_default_str();
  loss->add_option("--mi-variant", loss_args.cfg.mi_variant, "MI loss form")
      ->transform(CLI::CheckedTransformer(kMiVariants, CLI::ignore_case))
      ->default_str("no_log");
  auto* embed_seed_opt = loss->add_option(
      "--embed-seed", embed_seed_raw, "Seed for the frozen random embedding (dim mismatch)");

  DemoArgs demo_args;
  auto* demo = app.add_subcommand("demo", "Teacher -> student distillation demo on blob data");
  demo->add_option("--seed", demo_args.seed, "Run seed")->capture_default_str();
  demo->add_option("--epochs", demo_args.epochs, "Distillation epochs")->capture_default_str();
  demo->add_option("--teacher-epochs", demo_args.teacher_epochs, "Teacher training epochs")
      ->capture_default_str();
  demo->add_option("--lr", demo_args.lr, "Base learning rate for both phases")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  demo->add_option("--variant", demo_args.variant, "Objective: full loss or plain cross entropy")
      ->check(CLI::IsMember({"itrd", "xent"}))
      ->capture_default_str();

  std::string out_path;
  for (auto* sub : {entropy, mi, loss, demo})
    sub->add_option("--out", out_path, "Write the report JSON to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  if (embed_seed_opt->count() > 0) loss_args.embed_seed = embed_seed_raw;

  try {
    const auto t0 = std::chrono::steady_clock::now();
    MetricsReport report;
    std::string summary_line;
    if (entropy->parsed()) {
      report = cmd_entropy(entropy_args);
    } else if (mi->parsed()) {
      report = cmd_mi(mi_args);
    } else if (loss->parsed()) {
      report = cmd_loss(loss_args);
    } else {
      report = cmd_demo(demo_args, summary_line);
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    log_debug("wall time %.3fs", report.wall_time_s);

    if (!out_path.empty()) report.write_file(out_path);
    if (demo->parsed())
      std::printf("%s\n", summary_line.c_str());
    else
      std::printf("%s\n", report.to_json(true).dump(2).c_str());
    return kExitOk;
  } catch (const itrd::TrainingError& e) {
    itrd::cli::log_error(e.what());
    return kExitTraining;
  } catch (const itrd::DegenerateKernelError& e) {
    itrd::cli::log_error(e.what());
    return kExitDegenerate;
  } catch (const itrd::InvalidNpdError& e) {
    itrd::cli::log_error(e.what());
    return kExitDegenerate;
  } catch (const itrd::NumericError& e) {
    itrd::cli::log_error(e.what());
    return kExitDegenerate;
  } catch (const itrd::ParseError& e) {
    itrd::cli::log_error(e.what());
    return kExitInput;
  } catch (const itrd::DimensionError& e) {
    itrd::cli::log_error(e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    itrd::cli::log_error(e.what());
    return 1;
  }
}
