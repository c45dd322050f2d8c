#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dropout/nb.hpp"

namespace dropout::report {

// The two decision artifacts: attribute values whose class-conditional
// probability clears a threshold, and the roster ranked by posterior risk.

struct HighPotentialVariable {
  std::string attribute;
  std::string value;
  double probability = 0.0;  // P(value | class)

  bool operator==(const HighPotentialVariable&) const = default;
};

struct RiskEntry {
  std::size_t row = 0;       // 0-based index into the scored dataset
  double risk = 0.0;         // posterior of the risk class
  std::string predicted;
};

struct SchemaMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scans every categorical predictor of m for values with
// P(value|cls) > threshold (strictly), sorted by probability descending,
// ties by predictor order then value order. Numeric predictors are skipped:
// a density above the threshold is not a probability statement. Requires
// 0 <= threshold < 1. Throws nb::NbError(UnknownClass) for a class the
// model does not have.
std::vector<HighPotentialVariable> high_potential(
    const nb::NaiveBayesModel& m, std::string_view cls, double threshold);

// Scores every row of d, sorts by risk descending (ties keep dataset
// order), truncates to top_n when given. d must carry exactly the model's
// predictors, with or without the target column; anything else throws
// SchemaMismatch.
std::vector<RiskEntry> at_risk_list(const nb::NaiveBayesModel& m,
                                    const arff::Dataset& d,
                                    std::string_view risk_class,
                                    std::optional<std::size_t> top_n = {});

std::string format_high_potential_text(
    const std::vector<HighPotentialVariable>& entries);
std::string format_high_potential_csv(
    const std::vector<HighPotentialVariable>& entries);
std::string format_risk_text(const std::vector<RiskEntry>& entries);
std::string format_risk_csv(const std::vector<RiskEntry>& entries);

}  // namespace dropout::report
