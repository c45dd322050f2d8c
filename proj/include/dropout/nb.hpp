#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dropout/arff.hpp"

namespace dropout::nb {

// Naive Bayes over a nominal target: class priors estimated as relative
// frequencies, categorical likelihoods as additively smoothed count ratios,
// numeric likelihoods as Gaussian densities with per-class mean and
// (n-1)-divisor standard deviation. Scoring runs in log space and
// normalizes with log-sum-exp, which is equivalent to the plain
// probability product by monotonicity but does not underflow.
//
// A trained model is immutable; concurrent predict calls on the same model
// are safe.

struct TrainConfig {
  // Pseudo-count added to every categorical value count. 0 gives the pure
  // count ratio, in which unseen values get probability 0.
  double smoothing_alpha = 1.0;
  // Lower bound on Gaussian variance; also used when a class has fewer
  // than two values for a numeric attribute.
  double variance_floor = 1e-9;
  // Cells with a missing predictor are skipped for that attribute only,
  // at train and predict time alike. This is the only supported policy.

  bool operator==(const TrainConfig&) const = default;
};

struct CategoricalTable {
  std::vector<std::uint64_t> counts;  // per value, non-missing only
  std::vector<double> probs;          // (count + a) / (total + a*|values|)

  bool operator==(const CategoricalTable&) const = default;
};

struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;      // >= sqrt(variance_floor)
  std::uint64_t n = 0;     // non-missing training values

  bool operator==(const GaussianParams&) const = default;
};

using Conditional = std::variant<CategoricalTable, GaussianParams>;

struct ClassSummary {
  std::string label;
  std::uint64_t count = 0;
  double prior = 0.0;                    // count / training_total
  std::vector<Conditional> conditionals;  // one per predictor, in order

  bool operator==(const ClassSummary&) const = default;
};

struct NaiveBayesModel {
  std::string target_attribute;
  std::size_t target_index = 0;  // column of the target in the training data
  std::vector<arff::AttributeDecl> predictors;
  std::vector<ClassSummary> classes;  // declared order of the target values
  TrainConfig config;
  std::uint64_t training_total = 0;  // instances with a non-missing target

  bool operator==(const NaiveBayesModel&) const = default;

  // Index into classes, or npos when the label is unknown.
  std::size_t class_index(std::string_view label) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct Posterior {
  std::vector<double> log_joints;  // log P(C_i) + sum_k log P(x_k|C_i)
  std::vector<double> posteriors;  // normalized, sum to 1
  std::size_t predicted_index = 0;
  std::string predicted;
};

enum class ErrorKind {
  UnknownTarget,
  NonNominalTarget,
  EmptyTraining,
  InstanceArityMismatch,
  BadConfig,
  UnknownClass,
  ArityMismatch,
  NonPositiveSigma,
  UnsupportedVersion,
  ModelParse,
};

class NbError : public std::runtime_error {
 public:
  NbError(ErrorKind kind, std::string message, std::size_t line = 0);

  ErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }  // model-file errors only

 private:
  ErrorKind kind_;
  std::size_t line_;
};

// Trains on every instance of d whose target cell is non-missing. Class
// summaries follow the declared order of the target's value list; declared
// values that never occur get no summary.
NaiveBayesModel train(const arff::Dataset& d, std::string_view target,
                      const TrainConfig& cfg = {});

// (1 / (sqrt(2*pi) * sigma)) * exp(-(x - mu)^2 / (2 * sigma^2))
double gaussian_density(double x, double mu, double sigma);

// Accepts either a bare predictor row (|predictors| cells) or a full
// training-layout row (|predictors| + 1 cells, target at target_index,
// ignored). Missing cells contribute nothing to the sum.
double log_joint(const NaiveBayesModel& m, std::string_view cls,
                 const arff::Row& row);

// MAP prediction; ties go to the earliest class in model order. If every
// class scores log 0 (possible with alpha = 0), posteriors fall back to
// uniform so they still form a distribution.
Posterior predict(const NaiveBayesModel& m, const arff::Row& row);

// nbmodel v1: versioned line-oriented key=value text, reals written with 17
// significant digits so deserialize(serialize(m)) reproduces m bit-exactly.
// The layout is documented in README.md.
std::string serialize_model(const NaiveBayesModel& m);
NaiveBayesModel deserialize_model(std::string_view s);

// log(sum_i exp(v[i])) without overflow; -inf for an all--inf input.
double log_sum_exp(const std::vector<double>& v);

}  // namespace dropout::nb
