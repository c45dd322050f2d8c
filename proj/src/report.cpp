#include "dropout/report.hpp"

#include <algorithm>
#include <tuple>

#include "dropout/text.hpp"

namespace dropout::report {

namespace {

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

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

// True when d's attribute list is exactly the model's predictors, either
// bare or with the target column in its training position.
void check_schema(const nb::NaiveBayesModel& m, const arff::Dataset& d) {
  const std::size_t p = m.predictors.size();
  if (d.attributes.size() == p + 1) {
    if (d.attributes[m.target_index].name != m.target_attribute)
      throw SchemaMismatch("expected target '" + m.target_attribute +
                           "' at column " + std::to_string(m.target_index) +
                           ", found '" + d.attributes[m.target_index].name +
                           "'");
    for (std::size_t k = 0; k < p; ++k) {
      const std::size_t col = k < m.target_index ? k : k + 1;
      if (d.attributes[col] != m.predictors[k])
        throw SchemaMismatch("column " + std::to_string(col) +
                             " does not match predictor '" +
                             m.predictors[k].name + "'");
    }
    return;
  }
  if (d.attributes.size() == p) {
    for (std::size_t k = 0; k < p; ++k)
      if (d.attributes[k] != m.predictors[k])
        throw SchemaMismatch("column " + std::to_string(k) +
                             " does not match predictor '" +
                             m.predictors[k].name + "'");
    return;
  }
  throw SchemaMismatch("dataset has " + std::to_string(d.attributes.size()) +
                       " attributes, model expects " + std::to_string(p) +
                       " or " + std::to_string(p + 1));
}

}  // namespace

std::vector<HighPotentialVariable> high_potential(const nb::NaiveBayesModel& m,
                                                  std::string_view cls,
                                                  double threshold) {
  if (!(threshold >= 0.0) || threshold >= 1.0)
    throw std::invalid_argument("threshold must lie in [0,1)");
  const std::size_t c = m.class_index(cls);
  if (c == nb::NaiveBayesModel::npos)
    throw nb::NbError(nb::ErrorKind::UnknownClass,
                      "no class '" + std::string(cls) + "'");

  struct Keyed {
    HighPotentialVariable entry;
    std::size_t attr_order;
    std::size_t value_order;
  };
  std::vector<Keyed> found;
  const nb::ClassSummary& summary = m.classes[c];
  for (std::size_t k = 0; k < m.predictors.size(); ++k) {
    const auto* table =
        std::get_if<nb::CategoricalTable>(&summary.conditionals[k]);
    if (!table) continue;
    for (std::size_t v = 0; v < table->probs.size(); ++v) {
      if (table->probs[v] > threshold)
        found.push_back({{m.predictors[k].name, m.predictors[k].values[v],
                          table->probs[v]},
                         k,
                         v});
    }
  }
  std::sort(found.begin(), found.end(), [](const Keyed& a, const Keyed& b) {
    if (a.entry.probability != b.entry.probability)
      return a.entry.probability > b.entry.probability;
    return std::tie(a.attr_order, a.value_order) <
           std::tie(b.attr_order, b.value_order);
  });

  std::vector<HighPotentialVariable> out;
  out.reserve(found.size());
  for (Keyed& f : found) out.push_back(std::move(f.entry));
  return out;
}

std::vector<RiskEntry> at_risk_list(const nb::NaiveBayesModel& m,
                                    const arff::Dataset& d,
                                    std::string_view risk_class,
                                    std::optional<std::size_t> top_n) {
  check_schema(m, d);
  const std::size_t c = m.class_index(risk_class);
  if (c == nb::NaiveBayesModel::npos)
    throw nb::NbError(nb::ErrorKind::UnknownClass,
                      "no class '" + std::string(risk_class) + "'");

  std::vector<RiskEntry> entries;
  entries.reserve(d.instances.size());
  for (std::size_t r = 0; r < d.instances.size(); ++r) {
    const nb::Posterior p = nb::predict(m, d.instances[r]);
    entries.push_back({r, p.posteriors[c], p.predicted});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const RiskEntry& a, const RiskEntry& b) {
                     return a.risk > b.risk;
                   });
  if (top_n && *top_n < entries.size()) entries.resize(*top_n);
  return entries;
}

std::string format_high_potential_text(
    const std::vector<HighPotentialVariable>& entries) {
  std::size_t attr_width = std::string_view("attribute").size();
  std::size_t value_width = std::string_view("value").size();
  for (const auto& e : entries) {
    attr_width = std::max(attr_width, e.attribute.size());
    value_width = std::max(value_width, e.value.size());
  }
  std::string out = pad_right("attribute", attr_width) + "  " +
                    pad_right("value", value_width) + "  probability\n";
  for (const auto& e : entries)
    out += pad_right(e.attribute, attr_width) + "  " +
           pad_right(e.value, value_width) + "  " +
           text::format_double_fixed(e.probability, 4) + "\n";
  return out;
}

std::string format_high_potential_csv(
    const std::vector<HighPotentialVariable>& entries) {
  std::string out = "attribute,value,probability\n";
  for (const auto& e : entries)
    out += csv_field(e.attribute) + "," + csv_field(e.value) + "," +
           text::format_double_17g(e.probability) + "\n";
  return out;
}

std::string format_risk_text(const std::vector<RiskEntry>& entries) {
  std::size_t row_width = std::string_view("row").size();
  for (const auto& e : entries)
    row_width = std::max(row_width, std::to_string(e.row).size());
  std::string out = pad_right("row", row_width) + "  risk    predicted\n";
  for (const auto& e : entries)
    out += pad_right(std::to_string(e.row), row_width) + "  " +
           text::format_double_fixed(e.risk, 4) + "  " + e.predicted + "\n";
  return out;
}

std::string format_risk_csv(const std::vector<RiskEntry>& entries) {
  std::string out = "row,risk,predicted\n";
  for (const auto& e : entries)
    out += std::to_string(e.row) + "," + text::format_double_17g(e.risk) +
           "," + csv_field(e.predicted) + "\n";
  return out;
}

}  // namespace dropout::report
