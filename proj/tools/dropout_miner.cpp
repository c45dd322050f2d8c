// dropout-miner: train, evaluate and report a Naive Bayes student-dropout
// model over ARFF data, plus a seeded synthetic cohort generator.
//
// Exit codes: 0 success, 2 input parse, 3 training/eval, 4 model/schema
// mismatch, 1 internal. Every subcommand is deterministic given its flags.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dropout/arff.hpp"
#include "dropout/eval.hpp"
#include "dropout/nb.hpp"
#include "dropout/report.hpp"
#include "dropout/synth.hpp"
#include "dropout/text.hpp"

namespace {

using namespace dropout;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw arff::ArffError(arff::ErrorKind::MalformedHeader, 1,
                                 "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

// stdout when path is empty or "-".
void write_output(const std::string& path, std::string_view content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

std::uint64_t resolve_seed(const CLI::App* cmd, std::uint64_t from_flag,
                           std::optional<std::uint64_t> fallback = {}) {
  if (cmd->count("--seed")) return from_flag;
  if (const char* env = std::getenv("DROPOUT_MINER_SEED"))
    if (auto v = text::parse_u64(env)) return *v;
  return fallback.value_or(1);
}

nb::NaiveBayesModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw nb::NbError(nb::ErrorKind::ModelParse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return nb::deserialize_model(ss.str());
}

int run(int argc, char** argv) {
  CLI::App app{"Naive Bayes student-dropout mining pipeline"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic cohort");
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_spec_path, gen_dump_spec, gen_out;
  gen->add_option("--n", gen_n, "number of instances");
  gen->add_option("--seed", gen_seed, "PRNG seed");
  gen->add_option("--spec", gen_spec_path, "cohortspec v1 file to load");
  gen->add_option("--dump-spec", gen_dump_spec,
                  "write the effective cohortspec here");
  gen->add_option("-o,--output", gen_out, "output ARFF path (default stdout)");

  // validate
  auto* validate = app.add_subcommand("validate", "check an ARFF file");
  std::string validate_in;
  validate->add_option("data", validate_in, "ARFF file")->required();

  // train
  auto* train = app.add_subcommand("train", "fit a model and print priors");
  std::string train_in, train_target = "Dropout", train_out;
  nb::TrainConfig train_cfg;
  train->add_option("data", train_in, "training ARFF file")->required();
  train->add_option("--target", train_target, "target attribute");
  train->add_option("--alpha", train_cfg.smoothing_alpha, "smoothing alpha");
  train->add_option("--variance-floor", train_cfg.variance_floor,
                    "Gaussian variance floor");
  train->add_option("-o,--output", train_out, "model output path")->required();

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "stratified k-fold cross-validation");
  std::string eval_in, eval_target = "Dropout", eval_out;
  std::size_t eval_k = 10;
  std::uint64_t eval_seed = 1;
  nb::TrainConfig eval_cfg;
  evaluate->add_option("data", eval_in, "ARFF file")->required();
  evaluate->add_option("--target", eval_target, "target attribute");
  evaluate->add_option("--k", eval_k, "fold count");
  evaluate->add_option("--seed", eval_seed, "fold-shuffle seed");
  evaluate->add_option("--alpha", eval_cfg.smoothing_alpha, "smoothing alpha");
  evaluate->add_option("--variance-floor", eval_cfg.variance_floor,
                       "Gaussian variance floor");
  evaluate->add_option("-o,--output", eval_out,
                       "write the machine CSV here instead of stdout");

  // report
  auto* report_cmd =
      app.add_subcommand("report", "high-potential variable report");
  std::string report_model, report_class = "Yes", report_out;
  double report_threshold = 0.5;
  report_cmd->add_option("model", report_model, "nbmodel file")->required();
  report_cmd->add_option("--class", report_class, "conditioning class");
  report_cmd->add_option("--threshold", report_threshold,
                         "probability threshold (strict)");
  report_cmd->add_option("-o,--output", report_out,
                         "write the machine CSV here instead of stdout");

  // predict
  auto* predict_cmd =
      app.add_subcommand("predict", "rank students by posterior risk");
  std::string predict_model, predict_in, predict_class = "Yes", predict_out;
  std::optional<std::size_t> predict_top_n;
  predict_cmd->add_option("model", predict_model, "nbmodel file")->required();
  predict_cmd->add_option("data", predict_in, "ARFF file to score")
      ->required();
  predict_cmd->add_option("--class", predict_class, "risk class");
  predict_cmd->add_option("--top-n", predict_top_n,
                          "keep only the top N entries");
  predict_cmd->add_option("-o,--output", predict_out,
                          "write the machine CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (gen->parsed()) {
    synth::CohortSpec spec;
    if (!gen_spec_path.empty()) {
      spec = synth::load_spec(read_file(gen_spec_path));
      if (gen->count("--n")) spec.n = gen_n;
      if (gen->count("--seed"))
        spec.seed = gen_seed;
      else if (const char* env = std::getenv("DROPOUT_MINER_SEED"))
        if (auto v = text::parse_u64(env)) spec.seed = *v;
    } else {
      if (!gen->count("--n")) {
        std::cerr << "gen: --n is required without --spec\n";
        return 2;
      }
      spec = synth::default_spec(gen_n, resolve_seed(gen, gen_seed));
    }
    if (!gen_dump_spec.empty()) write_file(gen_dump_spec, synth::dump_spec(spec));
    write_output(gen_out, arff::write_arff(synth::generate(spec)));
    return 0;
  }

  if (validate->parsed()) {
    const arff::Dataset d = arff::parse_arff(read_file(validate_in));
    const auto violations = arff::validate(d);
    for (const auto& v : violations) std::cout << arff::describe(v) << "\n";
    return violations.empty() ? 0 : 2;
  }

  if (train->parsed()) {
    const arff::Dataset d = arff::parse_arff(read_file(train_in));
    const nb::NaiveBayesModel model = nb::train(d, train_target, train_cfg);
    write_file(train_out, nb::serialize_model(model));
    std::cout << "class,prior\n";
    for (const auto& cs : model.classes)
      std::cout << cs.label << "," << text::format_double_17g(cs.prior)
                << "\n";
    return 0;
  }

  if (evaluate->parsed()) {
    const arff::Dataset d = arff::parse_arff(read_file(eval_in));
    const eval::CvResult result = eval::cross_validate(
        d, eval_target, eval_k, resolve_seed(evaluate, eval_seed), eval_cfg);
    const eval::MetricsReport metrics = eval::precision_recall(result.matrix);
    std::cout << eval::format_confusion_text(result.matrix) << "\n"
              << eval::format_metrics_text(metrics);
    const std::string machine = eval::format_confusion_csv(result.matrix) +
                                eval::format_metrics_csv(metrics);
    if (eval_out.empty())
      std::cout << "\n" << machine;
    else
      write_file(eval_out, machine);
    return 0;
  }

  if (report_cmd->parsed()) {
    const nb::NaiveBayesModel model = load_model(report_model);
    const auto entries =
        report::high_potential(model, report_class, report_threshold);
    std::cout << report::format_high_potential_text(entries);
    const std::string machine = report::format_high_potential_csv(entries);
    if (report_out.empty())
      std::cout << "\n" << machine;
    else
      write_file(report_out, machine);
    return 0;
  }

  if (predict_cmd->parsed()) {
    const nb::NaiveBayesModel model = load_model(predict_model);
    const arff::Dataset d = arff::parse_arff(read_file(predict_in));
    const auto entries =
        report::at_risk_list(model, d, predict_class, predict_top_n);
    std::cout << report::format_risk_text(entries);
    const std::string machine = report::format_risk_csv(entries);
    if (predict_out.empty())
      std::cout << "\n" << machine;
    else
      write_file(predict_out, machine);
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const arff::ArffError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const synth::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const report::SchemaMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const nb::NbError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case nb::ErrorKind::ModelParse:
      case nb::ErrorKind::UnsupportedVersion:
      case nb::ErrorKind::UnknownClass:
      case nb::ErrorKind::ArityMismatch:
        return 4;
      default:
        return 3;
    }
  } catch (const eval::EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
