#include "dropout/nb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "dropout/text.hpp"

namespace dropout::nb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

[[noreturn]] void fail(ErrorKind kind, std::string msg, std::size_t line = 0) {
  throw NbError(kind, std::move(msg), line);
}

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnknownTarget: return "unknown target";
    case ErrorKind::NonNominalTarget: return "non-nominal target";
    case ErrorKind::EmptyTraining: return "empty training set";
    case ErrorKind::InstanceArityMismatch: return "instance arity mismatch";
    case ErrorKind::BadConfig: return "bad config";
    case ErrorKind::UnknownClass: return "unknown class";
    case ErrorKind::ArityMismatch: return "arity mismatch";
    case ErrorKind::NonPositiveSigma: return "non-positive sigma";
    case ErrorKind::UnsupportedVersion: return "unsupported version";
    case ErrorKind::ModelParse: return "model parse error";
  }
  return "error";
}

// Streaming mean/variance (Welford); variance uses the n-1 divisor.
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  double sample_variance() const {
    return n >= 2 ? m2 / static_cast<double>(n - 1) : 0.0;
  }
};

double log_gaussian_density(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

// Maps predictor position k to the column in a full training-layout row.
std::size_t full_row_column(const NaiveBayesModel& m, std::size_t k) {
  return k < m.target_index ? k : k + 1;
}

const arff::Cell& predictor_cell(const NaiveBayesModel& m,
                                 const arff::Row& row, std::size_t k) {
  if (row.size() == m.predictors.size()) return row[k];
  return row[full_row_column(m, k)];
}

void check_row_arity(const NaiveBayesModel& m, const arff::Row& row) {
  if (row.size() != m.predictors.size() &&
      row.size() != m.predictors.size() + 1)
    fail(ErrorKind::ArityMismatch,
         "row has " + std::to_string(row.size()) + " cells, expected " +
             std::to_string(m.predictors.size()) + " or " +
             std::to_string(m.predictors.size() + 1));
}

double cell_log_likelihood(const Conditional& cond, const arff::Cell& cell) {
  if (const auto* cat = std::get_if<CategoricalTable>(&cond)) {
    if (cell.kind() != arff::Cell::Kind::Nominal)
      fail(ErrorKind::ArityMismatch, "numeric cell under nominal predictor");
    if (cell.index() >= cat->probs.size())
      fail(ErrorKind::ArityMismatch, "nominal index outside value list");
    const double p = cat->probs[cell.index()];
    return p > 0.0 ? std::log(p) : kNegInf;
  }
  const auto& g = std::get<GaussianParams>(cond);
  if (cell.kind() != arff::Cell::Kind::Numeric)
    fail(ErrorKind::ArityMismatch, "nominal cell under numeric predictor");
  return log_gaussian_density(cell.number(), g.mu, g.sigma);
}

// Row arity already checked.
double log_joint_at(const NaiveBayesModel& m, std::size_t c,
                    const arff::Row& row) {
  const ClassSummary& cs = m.classes[c];
  double sum = std::log(cs.prior);
  for (std::size_t k = 0; k < m.predictors.size(); ++k) {
    const arff::Cell& cell = predictor_cell(m, row, k);
    if (cell.is_missing()) continue;
    sum += cell_log_likelihood(cs.conditionals[k], cell);
  }
  return sum;
}

}  // namespace

NbError::NbError(ErrorKind kind, std::string message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " +
                                    kind_name(kind) + ": " + message
                              : std::string(kind_name(kind)) + ": " + message),
      kind_(kind),
      line_(line) {}

std::size_t NaiveBayesModel::class_index(std::string_view label) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].label == label) return i;
  return npos;
}

double gaussian_density(double x, double mu, double sigma) {
  if (!(sigma > 0.0))
    fail(ErrorKind::NonPositiveSigma,
         "sigma = " + text::format_double_shortest(sigma));
  const double d = x - mu;
  return std::exp(-d * d / (2.0 * sigma * sigma)) /
         (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double log_sum_exp(const std::vector<double>& v) {
  double max = kNegInf;
  for (double x : v) max = std::max(max, x);
  if (!std::isfinite(max)) return max;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - max);
  return max + std::log(sum);
}

NaiveBayesModel train(const arff::Dataset& d, std::string_view target,
                      const TrainConfig& cfg) {
  if (!(cfg.smoothing_alpha >= 0.0) || !std::isfinite(cfg.smoothing_alpha))
    fail(ErrorKind::BadConfig, "smoothing_alpha must be >= 0");
  if (!(cfg.variance_floor > 0.0) || !std::isfinite(cfg.variance_floor))
    fail(ErrorKind::BadConfig, "variance_floor must be > 0");

  std::size_t target_index = d.attributes.size();
  for (std::size_t i = 0; i < d.attributes.size(); ++i)
    if (d.attributes[i].name == target) {
      target_index = i;
      break;
    }
  if (target_index == d.attributes.size())
    fail(ErrorKind::UnknownTarget, "no attribute named '" +
                                       std::string(target) + "'");
  const arff::AttributeDecl& target_attr = d.attributes[target_index];
  if (target_attr.kind != arff::AttributeKind::Nominal)
    fail(ErrorKind::NonNominalTarget,
         "target '" + std::string(target) + "' is numeric");

  for (std::size_t r = 0; r < d.instances.size(); ++r)
    if (d.instances[r].size() != d.attributes.size())
      fail(ErrorKind::InstanceArityMismatch,
           "instance " + std::to_string(r) + " has " +
               std::to_string(d.instances[r].size()) + " cells, expected " +
               std::to_string(d.attributes.size()));

  NaiveBayesModel m;
  m.target_attribute = target_attr.name;
  m.target_index = target_index;
  m.config = cfg;
  for (std::size_t i = 0; i < d.attributes.size(); ++i)
    if (i != target_index) m.predictors.push_back(d.attributes[i]);

  const std::size_t num_values = target_attr.values.size();
  const std::size_t num_preds = m.predictors.size();

  // Per declared target value: instance count, categorical count tables,
  // numeric accumulators.
  std::vector<std::uint64_t> class_counts(num_values, 0);
  std::vector<std::vector<std::vector<std::uint64_t>>> cat_counts(num_values);
  std::vector<std::vector<RunningStats>> stats(num_values);
  for (std::size_t c = 0; c < num_values; ++c) {
    cat_counts[c].resize(num_preds);
    stats[c].resize(num_preds);
    for (std::size_t k = 0; k < num_preds; ++k)
      if (m.predictors[k].kind == arff::AttributeKind::Nominal)
        cat_counts[c][k].assign(m.predictors[k].values.size(), 0);
  }

  std::uint64_t total = 0;
  for (const arff::Row& row : d.instances) {
    const arff::Cell& t = row[target_index];
    if (t.is_missing()) continue;
    if (t.kind() != arff::Cell::Kind::Nominal || t.index() >= num_values)
      fail(ErrorKind::InstanceArityMismatch,
           "target cell does not index the target's value list");
    const std::size_t c = t.index();
    ++class_counts[c];
    ++total;
    for (std::size_t k = 0; k < num_preds; ++k) {
      const arff::Cell& cell = row[k < target_index ? k : k + 1];
      if (cell.is_missing()) continue;
      if (m.predictors[k].kind == arff::AttributeKind::Nominal) {
        if (cell.kind() != arff::Cell::Kind::Nominal ||
            cell.index() >= cat_counts[c][k].size())
          fail(ErrorKind::InstanceArityMismatch,
               "cell does not match the declared kind of '" +
                   m.predictors[k].name + "'");
        ++cat_counts[c][k][cell.index()];
      } else {
        if (cell.kind() != arff::Cell::Kind::Numeric)
          fail(ErrorKind::InstanceArityMismatch,
               "cell does not match the declared kind of '" +
                   m.predictors[k].name + "'");
        stats[c][k].add(cell.number());
      }
    }
  }
  if (total == 0)
    fail(ErrorKind::EmptyTraining, "no instance has a non-missing target");
  m.training_total = total;

  const double alpha = cfg.smoothing_alpha;
  for (std::size_t c = 0; c < num_values; ++c) {
    if (class_counts[c] == 0) continue;
    ClassSummary cs;
    cs.label = target_attr.values[c];
    cs.count = class_counts[c];
    cs.prior = static_cast<double>(cs.count) / static_cast<double>(total);
    for (std::size_t k = 0; k < num_preds; ++k) {
      if (m.predictors[k].kind == arff::AttributeKind::Nominal) {
        CategoricalTable table;
        table.counts = cat_counts[c][k];
        const std::size_t v = table.counts.size();
        std::uint64_t nonmissing = 0;
        for (std::uint64_t n : table.counts) nonmissing += n;
        const double denom =
            static_cast<double>(nonmissing) + alpha * static_cast<double>(v);
        table.probs.resize(v);
        if (denom > 0.0) {
          for (std::size_t i = 0; i < v; ++i)
            table.probs[i] = (static_cast<double>(table.counts[i]) + alpha) /
                             denom;
        } else {
          // alpha = 0 and every cell missing for this class: no evidence,
          // keep the table a distribution by going uniform.
          for (std::size_t i = 0; i < v; ++i)
            table.probs[i] = 1.0 / static_cast<double>(v);
        }
        cs.conditionals.emplace_back(std::move(table));
      } else {
        const RunningStats& st = stats[c][k];
        GaussianParams g;
        g.n = st.n;
        g.mu = st.n > 0 ? st.mean : 0.0;
        const double var = st.sample_variance();
        g.sigma = (st.n < 2 || var < cfg.variance_floor)
                      ? std::sqrt(cfg.variance_floor)
                      : std::sqrt(var);
        cs.conditionals.emplace_back(g);
      }
    }
    m.classes.push_back(std::move(cs));
  }
  return m;
}

double log_joint(const NaiveBayesModel& m, std::string_view cls,
                 const arff::Row& row) {
  const std::size_t c = m.class_index(cls);
  if (c == NaiveBayesModel::npos)
    fail(ErrorKind::UnknownClass, "no class '" + std::string(cls) + "'");
  check_row_arity(m, row);
  return log_joint_at(m, c, row);
}

Posterior predict(const NaiveBayesModel& m, const arff::Row& row) {
  check_row_arity(m, row);
  Posterior p;
  p.log_joints.reserve(m.classes.size());
  for (std::size_t c = 0; c < m.classes.size(); ++c)
    p.log_joints.push_back(log_joint_at(m, c, row));

  const double norm = log_sum_exp(p.log_joints);
  p.posteriors.resize(p.log_joints.size());
  if (std::isfinite(norm)) {
    for (std::size_t i = 0; i < p.log_joints.size(); ++i)
      p.posteriors[i] = std::exp(p.log_joints[i] - norm);
  } else {
    // Every class has zero joint probability; no class is favored.
    const double u = 1.0 / static_cast<double>(p.log_joints.size());
    for (double& x : p.posteriors) x = u;
  }

  p.predicted_index = 0;
  for (std::size_t i = 1; i < p.log_joints.size(); ++i)
    if (p.log_joints[i] > p.log_joints[p.predicted_index]) p.predicted_index = i;
  p.predicted = m.classes[p.predicted_index].label;
  return p;
}

// ---------------------------------------------------------------------------
// nbmodel v1 serialization

namespace {

std::string format_count_list(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string format_prob_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += text::format_double_17g(v[i]);
  }
  return out;
}

// Sequential key=value reader over the model text; every read is strict
// about key order so the format stays bit-exact.
class ModelReader {
 public:
  explicit ModelReader(std::string_view s) : content_(s) {}

  bool next_line(std::string_view& out) {
    if (pos_ > content_.size()) return false;
    if (pos_ == content_.size()) {
      pos_ = content_.size() + 1;
      return false;
    }
    std::size_t eol = content_.find('\n', pos_);
    if (eol == std::string_view::npos) eol = content_.size();
    out = content_.substr(pos_, eol - pos_);
    pos_ = eol + 1;
    ++line_;
    return true;
  }

  std::string_view expect(std::string_view key) {
    std::string_view line;
    if (!next_line(line))
      fail(ErrorKind::ModelParse, "expected " + std::string(key) +
                                      "= but input ended", line_);
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || line.substr(0, eq) != key)
      fail(ErrorKind::ModelParse,
           "expected " + std::string(key) + "=, got '" + std::string(line) +
               "'", line_);
    return line.substr(eq + 1);
  }

  std::uint64_t expect_u64(std::string_view key) {
    const std::string_view v = expect(key);
    if (auto n = text::parse_u64(v)) return *n;
    fail(ErrorKind::ModelParse, std::string(key) + " is not an integer",
         line_);
  }

  double expect_double(std::string_view key) {
    const std::string_view v = expect(key);
    if (auto x = text::parse_double(v)) return *x;
    fail(ErrorKind::ModelParse, std::string(key) + " is not a finite number",
         line_);
  }

  std::string expect_token(std::string_view key) {
    const std::string_view v = expect(key);
    try {
      std::size_t pos = 0;
      text::Token t = text::read_token(v, pos);
      if (!text::trim(v.substr(pos)).empty())
        fail(ErrorKind::ModelParse, "junk after token", line_);
      return t.value;
    } catch (const text::TokenError& e) {
      fail(ErrorKind::ModelParse, e.what(), line_);
    }
  }

  std::size_t line() const { return line_; }

  void expect_end() {
    std::string_view line;
    while (next_line(line))
      if (!text::trim(line).empty())
        fail(ErrorKind::ModelParse, "trailing content", line_);
  }

 private:
  std::string_view content_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::vector<text::Token> split_or_fail(std::string_view s, std::size_t line) {
  try {
    return text::split_list(s);
  } catch (const text::TokenError& e) {
    fail(ErrorKind::ModelParse, e.what(), line);
  }
}

}  // namespace

std::string serialize_model(const NaiveBayesModel& m) {
  std::string out = "nbmodel v1\n";
  out += "target=" + text::quote_token(m.target_attribute) + "\n";
  out += "target_index=" + std::to_string(m.target_index) + "\n";
  out += "alpha=" + text::format_double_17g(m.config.smoothing_alpha) + "\n";
  out += "variance_floor=" +
         text::format_double_17g(m.config.variance_floor) + "\n";
  out += "missing_policy=ignore-cell\n";
  out += "training_total=" + std::to_string(m.training_total) + "\n";
  out += "predictors=" + std::to_string(m.predictors.size()) + "\n";
  for (const arff::AttributeDecl& a : m.predictors) {
    out += "predictor=" + text::quote_token(a.name);
    if (a.kind == arff::AttributeKind::Numeric) {
      out += ",numeric\n";
    } else {
      out += ",nominal";
      for (const std::string& v : a.values) out += "," + text::quote_token(v);
      out += "\n";
    }
  }
  out += "classes=" + std::to_string(m.classes.size()) + "\n";
  for (const ClassSummary& cs : m.classes) {
    out += "class=" + text::quote_token(cs.label) + "\n";
    out += "count=" + std::to_string(cs.count) + "\n";
    out += "prior=" + text::format_double_17g(cs.prior) + "\n";
    for (const Conditional& cond : cs.conditionals) {
      if (const auto* cat = std::get_if<CategoricalTable>(&cond)) {
        out += "nominal=" + format_count_list(cat->counts) + ";" +
               format_prob_list(cat->probs) + "\n";
      } else {
        const auto& g = std::get<GaussianParams>(cond);
        out += "gauss=" + std::to_string(g.n) + ";" +
               text::format_double_17g(g.mu) + ";" +
               text::format_double_17g(g.sigma) + "\n";
      }
    }
  }
  return out;
}

NaiveBayesModel deserialize_model(std::string_view s) {
  ModelReader r(s);
  std::string_view version;
  if (!r.next_line(version))
    fail(ErrorKind::ModelParse, "empty input", 1);
  if (version != "nbmodel v1")
    fail(ErrorKind::UnsupportedVersion,
         "expected 'nbmodel v1', got '" + std::string(version) + "'", 1);

  NaiveBayesModel m;
  m.target_attribute = r.expect_token("target");
  m.target_index = static_cast<std::size_t>(r.expect_u64("target_index"));
  m.config.smoothing_alpha = r.expect_double("alpha");
  if (m.config.smoothing_alpha < 0.0)
    fail(ErrorKind::ModelParse, "alpha must be >= 0", r.line());
  m.config.variance_floor = r.expect_double("variance_floor");
  if (!(m.config.variance_floor > 0.0))
    fail(ErrorKind::ModelParse, "variance_floor must be > 0", r.line());
  if (r.expect("missing_policy") != "ignore-cell")
    fail(ErrorKind::ModelParse, "unknown missing_policy", r.line());
  m.training_total = r.expect_u64("training_total");
  if (m.training_total == 0)
    fail(ErrorKind::ModelParse, "training_total must be >= 1", r.line());

  const std::uint64_t num_preds = r.expect_u64("predictors");
  for (std::uint64_t k = 0; k < num_preds; ++k) {
    const std::string_view line = r.expect("predictor");
    const std::vector<text::Token> tokens = split_or_fail(line, r.line());
    if (tokens.size() < 2)
      fail(ErrorKind::ModelParse, "predictor needs a name and a kind",
           r.line());
    arff::AttributeDecl a;
    a.name = tokens[0].value;
    if (a.name.empty())
      fail(ErrorKind::ModelParse, "empty predictor name", r.line());
    if (!tokens[1].quoted && tokens[1].value == "numeric") {
      if (tokens.size() != 2)
        fail(ErrorKind::ModelParse, "junk after numeric predictor", r.line());
      a.kind = arff::AttributeKind::Numeric;
    } else if (!tokens[1].quoted && tokens[1].value == "nominal") {
      a.kind = arff::AttributeKind::Nominal;
      if (tokens.size() < 3)
        fail(ErrorKind::ModelParse, "nominal predictor without values",
             r.line());
      for (std::size_t i = 2; i < tokens.size(); ++i)
        a.values.push_back(tokens[i].value);
    } else {
      fail(ErrorKind::ModelParse, "predictor kind must be nominal or numeric",
           r.line());
    }
    m.predictors.push_back(std::move(a));
  }
  if (m.target_index > m.predictors.size())
    fail(ErrorKind::ModelParse, "target_index outside the original columns",
         r.line());

  const std::uint64_t num_classes = r.expect_u64("classes");
  if (num_classes == 0)
    fail(ErrorKind::ModelParse, "model must have at least one class",
         r.line());
  double prior_sum = 0.0;
  for (std::uint64_t c = 0; c < num_classes; ++c) {
    ClassSummary cs;
    cs.label = r.expect_token("class");
    cs.count = r.expect_u64("count");
    if (cs.count == 0)
      fail(ErrorKind::ModelParse, "class count must be >= 1", r.line());
    cs.prior = r.expect_double("prior");
    if (!(cs.prior > 0.0) || cs.prior > 1.0)
      fail(ErrorKind::ModelParse, "prior must lie in (0,1]", r.line());
    prior_sum += cs.prior;
    for (const arff::AttributeDecl& a : m.predictors) {
      if (a.kind == arff::AttributeKind::Nominal) {
        const std::string_view line = r.expect("nominal");
        const std::size_t semi = line.find(';');
        if (semi == std::string_view::npos)
          fail(ErrorKind::ModelParse, "nominal line needs counts;probs",
               r.line());
        CategoricalTable table;
        for (const text::Token& t :
             split_or_fail(line.substr(0, semi), r.line())) {
          if (auto n = text::parse_u64(t.value))
            table.counts.push_back(*n);
          else
            fail(ErrorKind::ModelParse, "bad count '" + t.value + "'",
                 r.line());
        }
        double prob_sum = 0.0;
        for (const text::Token& t :
             split_or_fail(line.substr(semi + 1), r.line())) {
          if (auto x = text::parse_double(t.value)) {
            if (*x < 0.0 || *x > 1.0)
              fail(ErrorKind::ModelParse, "probability outside [0,1]",
                   r.line());
            table.probs.push_back(*x);
            prob_sum += *x;
          } else {
            fail(ErrorKind::ModelParse, "bad probability '" + t.value + "'",
                 r.line());
          }
        }
        if (table.counts.size() != a.values.size() ||
            table.probs.size() != a.values.size())
          fail(ErrorKind::ModelParse,
               "table size does not match the value list of '" + a.name + "'",
               r.line());
        if (std::abs(prob_sum - 1.0) > 1e-9)
          fail(ErrorKind::ModelParse,
               "probabilities of '" + a.name + "' do not sum to 1", r.line());
        cs.conditionals.emplace_back(std::move(table));
      } else {
        const std::string_view line = r.expect("gauss");
        const std::vector<text::Token> parts = [&] {
          std::vector<text::Token> out;
          std::size_t start = 0;
          for (;;) {
            const std::size_t semi = line.find(';', start);
            out.push_back(
                {std::string(line.substr(start, semi - start)), false});
            if (semi == std::string_view::npos) return out;
            start = semi + 1;
          }
        }();
        if (parts.size() != 3)
          fail(ErrorKind::ModelParse, "gauss line needs n;mu;sigma",
               r.line());
        GaussianParams g;
        if (auto n = text::parse_u64(parts[0].value))
          g.n = *n;
        else
          fail(ErrorKind::ModelParse, "bad gauss n", r.line());
        auto mu = text::parse_double(parts[1].value);
        auto sigma = text::parse_double(parts[2].value);
        if (!mu || !sigma)
          fail(ErrorKind::ModelParse, "bad gauss parameters", r.line());
        g.mu = *mu;
        g.sigma = *sigma;
        if (!(g.sigma > 0.0))
          fail(ErrorKind::ModelParse, "sigma must be > 0", r.line());
        cs.conditionals.emplace_back(g);
      }
    }
    m.classes.push_back(std::move(cs));
  }
  if (std::abs(prior_sum - 1.0) > 1e-9)
    fail(ErrorKind::ModelParse, "class priors do not sum to 1", r.line());
  r.expect_end();
  return m;
}

}  // namespace dropout::nb
