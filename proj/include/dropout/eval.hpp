#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dropout/nb.hpp"

namespace dropout::eval {

// Stratified k-fold cross-validation and the confusion-matrix metrics the
// reports are built from. Fold assignment is deterministic given
// (dataset, target, k, seed): instances are grouped by class in the target's
// declared value order, each group is Fisher-Yates shuffled with one
// dropout::rng::Xoshiro256 stream seeded by `seed`, and the concatenated
// groups are dealt round-robin to folds with a cursor that carries across
// groups. That keeps per-class fold counts within 1 of each other and
// overall fold sizes within 1 of each other.

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  // Per instance of the source dataset: fold index in [0,k), or kExcluded
  // for instances whose target is missing.
  std::vector<std::size_t> assignment;

  static constexpr std::size_t kExcluded = static_cast<std::size_t>(-1);
};

class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  void add(std::size_t actual, std::size_t predicted, std::uint64_t n = 1);
  std::uint64_t count(std::size_t actual, std::size_t predicted) const {
    return counts_[actual][predicted];
  }
  std::uint64_t row_total(std::size_t actual) const;
  std::uint64_t col_total(std::size_t predicted) const;
  std::uint64_t trace() const;
  std::uint64_t total() const;
  std::optional<double> accuracy() const;  // trace/total; absent when empty

  // Element-wise sum; labels must match. Merging per-fold matrices in any
  // order gives the same pooled matrix.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

struct ClassMetrics {
  std::string label;
  std::optional<double> precision;  // column ratio; absent on an empty column
  std::optional<double> recall;     // row ratio; absent on an empty row
};

struct MetricsReport {
  std::vector<ClassMetrics> per_class;
  std::optional<double> accuracy;
};

struct CvResult {
  ConfusionMatrix matrix;
  double accuracy = 0.0;
};

enum class ErrorKind { BadK, EmptyClass };

class EvalError : public std::runtime_error {
 public:
  EvalError(ErrorKind kind, std::string message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Throws BadK when k < 2 or k exceeds the eligible instance count, and
// EmptyClass when a declared target value has no eligible instance.
FoldPlan stratified_folds(const arff::Dataset& d, std::string_view target,
                          std::size_t k, std::uint64_t seed);

// Trains on the complement of each fold, predicts the fold, and pools every
// (actual, predicted) pair into one matrix over all eligible instances.
CvResult cross_validate(const arff::Dataset& d, std::string_view target,
                        std::size_t k, std::uint64_t seed,
                        const nb::TrainConfig& cfg = {});

MetricsReport precision_recall(const ConfusionMatrix& cm);

// Aligned human-readable tables and machine CSV blocks (one header row
// each); layouts documented in README.md.
std::string format_confusion_text(const ConfusionMatrix& cm);
std::string format_confusion_csv(const ConfusionMatrix& cm);
std::string format_metrics_text(const MetricsReport& r);
std::string format_metrics_csv(const MetricsReport& r);

}  // namespace dropout::eval
