#include "dropout/eval.hpp"

#include <algorithm>
#include <utility>

#include "dropout/rng.hpp"
#include "dropout/text.hpp"

namespace dropout::eval {

namespace {

[[noreturn]] void fail(ErrorKind kind, std::string msg) {
  throw EvalError(kind, std::move(msg));
}

std::size_t find_nominal_target(const arff::Dataset& d,
                                std::string_view target) {
  for (std::size_t i = 0; i < d.attributes.size(); ++i)
    if (d.attributes[i].name == target) {
      if (d.attributes[i].kind != arff::AttributeKind::Nominal)
        throw nb::NbError(nb::ErrorKind::NonNominalTarget,
                          "target '" + std::string(target) + "' is numeric");
      return i;
    }
  throw nb::NbError(nb::ErrorKind::UnknownTarget,
                    "no attribute named '" + std::string(target) + "'");
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string metric_text(const std::optional<double>& v) {
  return v ? text::format_double_fixed(*v, 3) : "-";
}

std::string metric_csv(const std::optional<double>& v) {
  return v ? text::format_double_17g(*v) : "";
}

// RFC-4180 style quoting for the machine blocks.
std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

EvalError::EvalError(ErrorKind kind, std::string message)
    : std::runtime_error(std::move(message)), kind_(kind) {}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      counts_(labels_.size(), std::vector<std::uint64_t>(labels_.size(), 0)) {}

std::optional<std::size_t> ConfusionMatrix::index_of(
    std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted,
                          std::uint64_t n) {
  counts_[actual][predicted] += n;
}

std::uint64_t ConfusionMatrix::row_total(std::size_t actual) const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts_[actual]) sum += c;
  return sum;
}

std::uint64_t ConfusionMatrix::col_total(std::size_t predicted) const {
  std::uint64_t sum = 0;
  for (const auto& row : counts_) sum += row[predicted];
  return sum;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) sum += counts_[i][i];
  return sum;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) sum += row_total(i);
  return sum;
}

std::optional<double> ConfusionMatrix::accuracy() const {
  const std::uint64_t t = total();
  if (t == 0) return std::nullopt;
  return static_cast<double>(trace()) / static_cast<double>(t);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (labels_ != other.labels_)
    throw std::invalid_argument("confusion matrices have different labels");
  for (std::size_t i = 0; i < labels_.size(); ++i)
    for (std::size_t j = 0; j < labels_.size(); ++j)
      counts_[i][j] += other.counts_[i][j];
  return *this;
}

FoldPlan stratified_folds(const arff::Dataset& d, std::string_view target,
                          std::size_t k, std::uint64_t seed) {
  const std::size_t target_index = find_nominal_target(d, target);
  const auto& values = d.attributes[target_index].values;

  // Group eligible instances by class, keeping dataset order within each
  // group.
  std::vector<std::vector<std::size_t>> by_class(values.size());
  std::size_t eligible = 0;
  for (std::size_t r = 0; r < d.instances.size(); ++r) {
    if (d.instances[r].size() != d.attributes.size())
      throw nb::NbError(nb::ErrorKind::InstanceArityMismatch,
                        "instance " + std::to_string(r) + " has " +
                            std::to_string(d.instances[r].size()) +
                            " cells, expected " +
                            std::to_string(d.attributes.size()));
    const arff::Cell& t = d.instances[r][target_index];
    if (t.is_missing()) continue;
    if (t.kind() != arff::Cell::Kind::Nominal || t.index() >= values.size())
      throw nb::NbError(nb::ErrorKind::InstanceArityMismatch,
                        "target cell of instance " + std::to_string(r) +
                            " does not index the target's value list");
    by_class[t.index()].push_back(r);
    ++eligible;
  }
  for (std::size_t c = 0; c < values.size(); ++c)
    if (by_class[c].empty())
      fail(ErrorKind::EmptyClass,
           "class '" + values[c] + "' has no eligible instance");
  if (k < 2 || k > eligible)
    fail(ErrorKind::BadK, "k = " + std::to_string(k) +
                              " outside [2, " + std::to_string(eligible) +
                              "]");

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(d.instances.size(), FoldPlan::kExcluded);
  rng::Xoshiro256 gen(seed);
  std::size_t cursor = 0;
  for (auto& group : by_class) {
    gen.shuffle(group);
    for (std::size_t idx : group) {
      plan.assignment[idx] = cursor % k;
      ++cursor;
    }
  }
  return plan;
}

CvResult cross_validate(const arff::Dataset& d, std::string_view target,
                        std::size_t k, std::uint64_t seed,
                        const nb::TrainConfig& cfg) {
  const FoldPlan plan = stratified_folds(d, target, k, seed);
  const std::size_t target_index = find_nominal_target(d, target);
  const auto& values = d.attributes[target_index].values;

  ConfusionMatrix pooled{values};
  for (std::size_t f = 0; f < k; ++f) {
    arff::Dataset training{d.relation, d.attributes, {}};
    std::vector<std::size_t> test;
    for (std::size_t r = 0; r < d.instances.size(); ++r) {
      if (plan.assignment[r] == FoldPlan::kExcluded) continue;
      if (plan.assignment[r] == f)
        test.push_back(r);
      else
        training.instances.push_back(d.instances[r]);
    }
    const nb::NaiveBayesModel model = nb::train(training, target, cfg);
    for (std::size_t r : test) {
      const nb::Posterior p = nb::predict(model, d.instances[r]);
      const std::size_t actual = d.instances[r][target_index].index();
      const auto predicted = pooled.index_of(p.predicted);
      pooled.add(actual, *predicted);
    }
  }
  return {pooled, *pooled.accuracy()};
}

MetricsReport precision_recall(const ConfusionMatrix& cm) {
  MetricsReport report;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    ClassMetrics m;
    m.label = cm.labels()[i];
    const std::uint64_t col = cm.col_total(i);
    const std::uint64_t row = cm.row_total(i);
    if (col > 0)
      m.precision =
          static_cast<double>(cm.count(i, i)) / static_cast<double>(col);
    if (row > 0)
      m.recall = static_cast<double>(cm.count(i, i)) / static_cast<double>(row);
    report.per_class.push_back(std::move(m));
  }
  report.accuracy = cm.accuracy();
  return report;
}

std::string format_confusion_text(const ConfusionMatrix& cm) {
  std::size_t label_width = std::string_view("actual \\ predicted").size();
  for (const std::string& l : cm.labels())
    label_width = std::max(label_width, l.size());
  std::vector<std::size_t> col_width(cm.size());
  for (std::size_t j = 0; j < cm.size(); ++j) {
    col_width[j] = cm.labels()[j].size();
    for (std::size_t i = 0; i < cm.size(); ++i)
      col_width[j] =
          std::max(col_width[j], std::to_string(cm.count(i, j)).size());
  }

  std::string out = pad_right("actual \\ predicted", label_width);
  for (std::size_t j = 0; j < cm.size(); ++j)
    out += "  " + pad_left(cm.labels()[j], col_width[j]);
  out += "\n";
  for (std::size_t i = 0; i < cm.size(); ++i) {
    out += pad_right(cm.labels()[i], label_width);
    for (std::size_t j = 0; j < cm.size(); ++j)
      out += "  " + pad_left(std::to_string(cm.count(i, j)), col_width[j]);
    out += "\n";
  }
  return out;
}

std::string format_confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "actual,predicted,count\n";
  for (std::size_t i = 0; i < cm.size(); ++i)
    for (std::size_t j = 0; j < cm.size(); ++j)
      out += csv_field(cm.labels()[i]) + "," + csv_field(cm.labels()[j]) +
             "," + std::to_string(cm.count(i, j)) + "\n";
  return out;
}

std::string format_metrics_text(const MetricsReport& r) {
  std::size_t label_width = std::string_view("class").size();
  for (const ClassMetrics& m : r.per_class)
    label_width = std::max(label_width, m.label.size());

  std::string out = pad_right("class", label_width) + "  precision  recall\n";
  for (const ClassMetrics& m : r.per_class) {
    out += pad_right(m.label, label_width) + "  " +
           pad_left(metric_text(m.precision), 9) + "  " +
           pad_left(metric_text(m.recall), 6) + "\n";
  }
  out += "accuracy " + metric_text(r.accuracy) + "\n";
  return out;
}

std::string format_metrics_csv(const MetricsReport& r) {
  std::string out = "metric,class,value\n";
  for (const ClassMetrics& m : r.per_class) {
    out += "precision," + csv_field(m.label) + "," + metric_csv(m.precision) +
           "\n";
    out += "recall," + csv_field(m.label) + "," + metric_csv(m.recall) + "\n";
  }
  out += "accuracy,," + metric_csv(r.accuracy) + "\n";
  return out;
}

}  // namespace dropout::eval
