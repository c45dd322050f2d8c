#include <doctest.h>

#include <cmath>
#include <string>

#include "dropout/arff.hpp"
#include "dropout/nb.hpp"
#include "dropout/schema.hpp"
#include "dropout/synth.hpp"
#include "helpers.hpp"

using testutil::CliResult;
using testutil::run_cli;
using testutil::slurp;
using testutil::spit;
using testutil::TempDir;

namespace {

const char* kSeparable =
    "@relation sep\n"
    "@attribute echo {a,b}\n"
    "@attribute class {a,b}\n"
    "@data\n";

std::string separable_file(int per_class) {
  std::string out = kSeparable;
  for (int i = 0; i < per_class; ++i) out += "a,a\nb,b\n";
  return out;
}

}  // namespace

TEST_CASE("gen is deterministic and validates cleanly") {
  TempDir dir("gen");
  const auto a = dir.path() / "a.arff";
  const auto b = dir.path() / "b.arff";
  CHECK(run_cli(dir, "gen --n 10 --seed 7 -o \"" + a.string() + "\"")
            .exit_code == 0);
  CHECK(run_cli(dir, "gen --n 10 --seed 7 -o \"" + b.string() + "\"")
            .exit_code == 0);
  const std::string bytes = slurp(a);
  CHECK(bytes == slurp(b));
  CHECK_FALSE(bytes.empty());

  // stdout output carries the same bytes
  const auto res = run_cli(dir, "gen --n 10 --seed 7");
  CHECK(res.out == bytes);

  const auto val = run_cli(dir, "validate \"" + a.string() + "\"");
  CHECK(val.exit_code == 0);
  CHECK(val.out.empty());
}

TEST_CASE("gen without --n or --spec is a usage error") {
  TempDir dir("genu");
  CHECK(run_cli(dir, "gen").exit_code == 2);
}

TEST_CASE("the seed env var applies only when --seed is absent") {
  TempDir dir("env");
  const auto flag = run_cli(dir, "gen --n 8 --seed 7");
  const auto env = run_cli(dir, "gen --n 8", "DROPOUT_MINER_SEED=7 ");
  CHECK(env.out == flag.out);
  const auto both = run_cli(dir, "gen --n 8 --seed 3",
                            "DROPOUT_MINER_SEED=7 ");
  const auto three = run_cli(dir, "gen --n 8 --seed 3");
  CHECK(both.out == three.out);
  CHECK(both.out != flag.out);
}

TEST_CASE("gen can dump and reload its cohort spec") {
  TempDir dir("spec");
  const auto spec_path = dir.path() / "cohort.spec";
  const auto from_default = run_cli(
      dir, "gen --n 12 --seed 4 --dump-spec \"" + spec_path.string() + "\"");
  CHECK(from_default.exit_code == 0);
  const auto from_file =
      run_cli(dir, "gen --spec \"" + spec_path.string() + "\"");
  CHECK(from_file.exit_code == 0);
  CHECK(from_file.out == from_default.out);

  spit(spec_path, "cohortspec v9\n");
  CHECK(run_cli(dir, "gen --spec \"" + spec_path.string() + "\"").exit_code ==
        2);
}

TEST_CASE("validate reports parse errors with a location") {
  TempDir dir("val");
  const auto truncated = dir.path() / "broken.arff";
  spit(truncated, "@relation t\n@attribute a {x,y}\n@data\nx\nz\n");
  const auto res = run_cli(dir, "validate \"" + truncated.string() + "\"");
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("line 5") != std::string::npos);

  spit(truncated, "@relation t\n@attribute a {x,y}\n");
  CHECK(run_cli(dir, "validate \"" + truncated.string() + "\"").exit_code ==
        2);
}

TEST_CASE("train writes a model and prints priors") {
  TempDir dir("train");
  const auto data = dir.path() / "cohort.arff";
  const auto model = dir.path() / "model.nbm";
  REQUIRE(run_cli(dir, "gen --n 400 --seed 2 -o \"" + data.string() + "\"")
              .exit_code == 0);
  const auto res = run_cli(
      dir, "train \"" + data.string() + "\" -o \"" + model.string() + "\"");
  CHECK(res.exit_code == 0);
  CHECK(res.out.substr(0, 12) == "class,prior\n");
  // prior(Yes) stays within the 3-sigma binomial band around 131/165
  const auto yes_at = res.out.find("Yes,");
  REQUIRE(yes_at != std::string::npos);
  const double prior = std::stod(res.out.substr(yes_at + 4));
  CHECK(std::abs(prior - 131.0 / 165.0) <
        3.0 * std::sqrt((131.0 / 165.0) * (34.0 / 165.0) / 400.0));
  CHECK(slurp(model).substr(0, 11) == "nbmodel v1\n");

  const auto bad = run_cli(dir, "train \"" + data.string() +
                                    "\" --target Nope -o \"" +
                                    model.string() + "\"");
  CHECK(bad.exit_code == 3);
  CHECK(bad.err.find("Nope") != std::string::npos);
}

TEST_CASE("train on a single-class file reports prior 1") {
  TempDir dir("train1");
  const auto data = dir.path() / "one.arff";
  const auto model = dir.path() / "one.nbm";
  spit(data,
       "@relation one\n@attribute a {x,y}\n@attribute class {only}\n@data\n"
       "x,only\ny,only\n");
  const auto res =
      run_cli(dir, "train \"" + data.string() + "\" --target class -o \"" +
                       model.string() + "\"");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("only,1\n") != std::string::npos);
}

TEST_CASE("evaluate prints the accuracy line and is deterministic") {
  TempDir dir("eval");
  const auto data = dir.path() / "sep.arff";
  spit(data, separable_file(10));
  const std::string cmd =
      "evaluate \"" + data.string() + "\" --target class --k 5 --seed 3";
  const auto res = run_cli(dir, cmd);
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("accuracy 1.000") != std::string::npos);
  CHECK(res.out.find("accuracy,,1\n") != std::string::npos);
  const auto again = run_cli(dir, cmd);
  CHECK(again.out == res.out);

  CHECK(run_cli(dir, "evaluate \"" + data.string() +
                         "\" --target class --k 50")
            .exit_code == 3);
}

TEST_CASE("report thresholds and bad classes") {
  TempDir dir("report");
  const auto data = dir.path() / "cohort.arff";
  const auto model = dir.path() / "model.nbm";
  REQUIRE(run_cli(dir, "gen --n 300 --seed 6 -o \"" + data.string() + "\"")
              .exit_code == 0);
  REQUIRE(run_cli(dir, "train \"" + data.string() + "\" -o \"" +
                           model.string() + "\"")
              .exit_code == 0);

  const auto strict =
      run_cli(dir, "report \"" + model.string() + "\" --threshold 0.99");
  CHECK(strict.exit_code == 0);
  CHECK(strict.out.find("attribute,value,probability\n") !=
        std::string::npos);
  // header only, no data line in the machine block
  CHECK(strict.out.find("attribute,value,probability\n") + 28 ==
        strict.out.size());

  CHECK(run_cli(dir, "report \"" + model.string() + "\" --class Maybe")
            .exit_code == 4);

  spit(model, "nbmodel v7\n");
  CHECK(run_cli(dir, "report \"" + model.string() + "\"").exit_code == 4);
}

TEST_CASE("a model carrying the flagged probabilities reports all seven") {
  // Hand-build a model over the builtin schema whose Yes-class conditionals
  // are the default cohort distributions, and read it back through the CLI.
  const auto spec = dropout::synth::default_spec(1, 0);
  const auto& attrs = dropout::schema::builtin_schema();
  dropout::nb::NaiveBayesModel m;
  m.target_attribute = "Dropout";
  m.target_index = dropout::schema::kDropoutIndex;
  m.predictors.assign(attrs.begin(), attrs.end() - 1);
  m.training_total = 165;
  const char* labels[2] = {"Yes", "No"};
  const std::uint64_t counts[2] = {131, 34};
  for (std::size_t c = 0; c < 2; ++c) {
    dropout::nb::ClassSummary cs;
    cs.label = labels[c];
    cs.count = counts[c];
    cs.prior = counts[c] / 165.0;
    for (std::size_t k = 0; k < m.predictors.size(); ++k) {
      dropout::nb::CategoricalTable table;
      table.probs = spec.conditionals[c][k];
      table.counts.assign(table.probs.size(), 0);
      cs.conditionals.emplace_back(std::move(table));
    }
    m.classes.push_back(std::move(cs));
  }

  TempDir dir("table2");
  const auto model = dir.path() / "table2.nbm";
  spit(model, dropout::nb::serialize_model(m));
  const auto res =
      run_cli(dir, "report \"" + model.string() + "\" --threshold 0.49");
  CHECK(res.exit_code == 0);
  for (const char* pair :
       {"Med,Hindi,", "Sex,Male,", "SSG,E,", "Atype,Direct,", "LLoc,Village,",
        "MOcc,Service,", "MQual,elementary,"})
    CHECK(res.out.find(pair) != std::string::npos);
  for (const char* prob : {"0.7600", "0.6800", "0.6623", "0.6000", "0.5500",
                           "0.5200", "0.5000"})
    CHECK(res.out.find(prob) != std::string::npos);
}

TEST_CASE("predict ranks rows and rejects schema drift") {
  TempDir dir("predict");
  const auto data = dir.path() / "cohort.arff";
  const auto model = dir.path() / "model.nbm";
  REQUIRE(run_cli(dir, "gen --n 100 --seed 9 -o \"" + data.string() + "\"")
              .exit_code == 0);
  REQUIRE(run_cli(dir, "train \"" + data.string() + "\" -o \"" +
                           model.string() + "\"")
              .exit_code == 0);

  const auto full = run_cli(dir, "predict \"" + model.string() + "\" \"" +
                                     data.string() + "\"");
  CHECK(full.exit_code == 0);
  CHECK(full.out.find("row,risk,predicted\n") != std::string::npos);

  const auto top = run_cli(dir, "predict \"" + model.string() + "\" \"" +
                                    data.string() + "\" --top-n 5");
  CHECK(top.exit_code == 0);
  // 5 entries + header in the human block
  CHECK(top.out.find("risk    predicted") != std::string::npos);

  // drop one predictor column: schema mismatch
  const dropout::arff::Dataset d = dropout::arff::parse_arff(slurp(data));
  dropout::arff::Dataset narrowed = d;
  narrowed.attributes.erase(narrowed.attributes.begin());
  for (auto& row : narrowed.instances) row.erase(row.begin());
  const auto bad_path = dir.path() / "narrow.arff";
  spit(bad_path, dropout::arff::write_arff(narrowed));
  CHECK(run_cli(dir, "predict \"" + model.string() + "\" \"" +
                         bad_path.string() + "\"")
            .exit_code == 4);
}

TEST_CASE("the full pipeline is byte-deterministic") {
  TempDir dir("pipe");
  for (const char* tag : {"one", "two"}) {
    const std::string d = (dir.path() / (std::string("d-") + tag)).string();
    std::filesystem::create_directories(d);
    REQUIRE(run_cli(dir, "gen --n 250 --seed 1 -o \"" + d + "/data.arff\"")
                .exit_code == 0);
    const auto train = run_cli(
        dir, "train \"" + d + "/data.arff\" -o \"" + d + "/model.nbm\"");
    REQUIRE(train.exit_code == 0);
    spit(d + "/priors.txt", train.out);
    REQUIRE(run_cli(dir, "evaluate \"" + d + "/data.arff\" --k 10 --seed 1 "
                             "-o \"" +
                             d + "/metrics.csv\"")
                .exit_code == 0);
    REQUIRE(run_cli(dir, "report \"" + d + "/model.nbm\" --threshold 0.45 "
                             "-o \"" +
                             d + "/report.csv\"")
                .exit_code == 0);
    REQUIRE(run_cli(dir, "predict \"" + d + "/model.nbm\" \"" + d +
                             "/data.arff\" -o \"" + d + "/risk.csv\"")
                .exit_code == 0);
  }
  for (const char* name :
       {"data.arff", "model.nbm", "priors.txt", "metrics.csv", "report.csv",
        "risk.csv"}) {
    CHECK(slurp(dir.path() / "d-one" / name) ==
          slurp(dir.path() / "d-two" / name));
    CHECK_FALSE(slurp(dir.path() / "d-one" / name).empty());
  }
}
