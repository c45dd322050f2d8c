#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dropout/arff.hpp"

namespace dropout::synth {

// Seeded generator for synthetic student cohorts over the builtin schema.
// Rows are drawn from the Naive Bayes generative process itself: class
// first, then each predictor independently from its class-conditional
// distribution, so the Bayes-optimal accuracy of a cohort is computable in
// closed form from the spec.

inline constexpr std::size_t kClassCount = 2;  // Dropout = Yes, No
inline constexpr std::size_t kYes = 0;
inline constexpr std::size_t kNo = 1;

struct CohortSpec {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double prior_yes = 0.0;  // P(Dropout = Yes), in (0,1)
  // conditionals[class][predictor][value index]; predictors in builtin
  // schema order (Dropout excluded). Each distribution sums to 1.
  std::array<std::vector<std::vector<double>>, kClassCount> conditionals;
};

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The documented default cohort: P(Yes) = 131/165; in the Yes class the
// seven flagged (attribute, value) pairs get probabilities
// Sex=Male .68, SSG=E .6623, Atype=Direct .6, Med=Hindi .76,
// LLoc=Village .55, MQual=elementary .50, MOcc=Service .52, with the
// remaining mass spread uniformly over the attribute's other values; every
// other Yes-class attribute and all No-class attributes are uniform.
CohortSpec default_spec(std::size_t n, std::uint64_t seed);

// Throws SpecError unless every distribution covers its attribute's full
// value set and sums to 1 within 1e-12, n >= 1, and prior_yes is in (0,1).
void check_spec(const CohortSpec& spec);

// Deterministic given spec.seed (dropout::rng::Xoshiro256; one stream,
// row-major: class draw, then each predictor left to right).
arff::Dataset generate(const CohortSpec& spec);

// cohortspec v1 key=value text format, documented in README.md.
std::string dump_spec(const CohortSpec& spec);
CohortSpec load_spec(std::string_view content);

}  // namespace dropout::synth
