#include "dropout/synth.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "dropout/rng.hpp"
#include "dropout/schema.hpp"
#include "dropout/text.hpp"

namespace dropout::synth {

namespace {

const char* kClassKeys[kClassCount] = {"yes", "no"};

std::size_t predictor_count() { return schema::builtin_schema().size() - 1; }

std::vector<double> uniform_dist(std::size_t v) {
  return std::vector<double>(v, 1.0 / static_cast<double>(v));
}

// One pinned value at `p`, the rest of the mass uniform over the others.
std::vector<double> pinned_dist(std::size_t v, std::size_t pinned, double p) {
  std::vector<double> dist(v, (1.0 - p) / static_cast<double>(v - 1));
  dist[pinned] = p;
  return dist;
}

std::size_t value_index(const arff::AttributeDecl& attr,
                        std::string_view value) {
  for (std::size_t i = 0; i < attr.values.size(); ++i)
    if (attr.values[i] == value) return i;
  std::abort();  // builtin schema lookup; callers pass literals
}

std::size_t sample(rng::Xoshiro256& gen, const std::vector<double>& dist) {
  const double u = gen.next_unit();
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
    cum += dist[i];
    if (u < cum) return i;
  }
  return dist.size() - 1;
}

}  // namespace

CohortSpec default_spec(std::size_t n, std::uint64_t seed) {
  const auto& attrs = schema::builtin_schema();
  CohortSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.prior_yes = 131.0 / 165.0;

  struct Pin {
    std::string_view attr;
    std::string_view value;
    double p;
  };
  static constexpr Pin kPins[] = {
      {"Sex", "Male", 0.68},     {"SSG", "E", 0.6623},
      {"Atype", "Direct", 0.6},  {"Med", "Hindi", 0.76},
      {"LLoc", "Village", 0.55}, {"MQual", "elementary", 0.50},
      {"MOcc", "Service", 0.52},
  };

  for (std::size_t k = 0; k < predictor_count(); ++k) {
    const arff::AttributeDecl& attr = attrs[k];
    std::vector<double> yes = uniform_dist(attr.values.size());
    for (const Pin& pin : kPins)
      if (attr.name == pin.attr)
        yes = pinned_dist(attr.values.size(), value_index(attr, pin.value),
                          pin.p);
    spec.conditionals[kYes].push_back(std::move(yes));
    spec.conditionals[kNo].push_back(uniform_dist(attr.values.size()));
  }
  return spec;
}

void check_spec(const CohortSpec& spec) {
  if (spec.n < 1) throw SpecError("n must be >= 1");
  if (!(spec.prior_yes > 0.0) || !(spec.prior_yes < 1.0))
    throw SpecError("prior_yes must lie in (0,1)");
  const auto& attrs = schema::builtin_schema();
  for (std::size_t c = 0; c < kClassCount; ++c) {
    if (spec.conditionals[c].size() != predictor_count())
      throw SpecError("spec must cover all " +
                      std::to_string(predictor_count()) + " predictors");
    for (std::size_t k = 0; k < predictor_count(); ++k) {
      const auto& dist = spec.conditionals[c][k];
      if (dist.size() != attrs[k].values.size())
        throw SpecError("distribution size mismatch for '" + attrs[k].name +
                        "'");
      double sum = 0.0;
      for (double p : dist) {
        if (!(p >= 0.0) || !std::isfinite(p))
          throw SpecError("negative or non-finite probability for '" +
                          attrs[k].name + "'");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw SpecError("distribution for '" + attrs[k].name +
                        "' does not sum to 1");
    }
  }
}

arff::Dataset generate(const CohortSpec& spec) {
  check_spec(spec);
  const auto& attrs = schema::builtin_schema();

  arff::Dataset d;
  d.relation = "synthetic-cohort";
  d.attributes = attrs;
  d.instances.reserve(spec.n);

  rng::Xoshiro256 gen(spec.seed);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t cls = gen.next_unit() < spec.prior_yes ? kYes : kNo;
    arff::Row row;
    row.reserve(attrs.size());
    for (std::size_t k = 0; k < predictor_count(); ++k)
      row.push_back(
          arff::Cell::nominal(sample(gen, spec.conditionals[cls][k])));
    row.push_back(arff::Cell::nominal(cls));  // Dropout: Yes=0, No=1
    d.instances.push_back(std::move(row));
  }
  return d;
}

std::string dump_spec(const CohortSpec& spec) {
  const auto& attrs = schema::builtin_schema();
  std::string out = "cohortspec v1\n";
  out += "n=" + std::to_string(spec.n) + "\n";
  out += "seed=" + std::to_string(spec.seed) + "\n";
  out += "prior_yes=" + text::format_double_17g(spec.prior_yes) + "\n";
  for (std::size_t c = 0; c < kClassCount; ++c) {
    for (std::size_t k = 0; k < predictor_count(); ++k) {
      out += std::string(kClassKeys[c]) + "." + attrs[k].name + "=";
      const auto& dist = spec.conditionals[c][k];
      for (std::size_t v = 0; v < dist.size(); ++v) {
        if (v) out += ",";
        out += text::format_double_17g(dist[v]);
      }
      out += "\n";
    }
  }
  return out;
}

CohortSpec load_spec(std::string_view content) {
  const auto& attrs = schema::builtin_schema();
  CohortSpec spec;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& out) {
    if (pos >= content.size()) return false;
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    out = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    return true;
  };
  auto fail = [&](std::string_view msg) -> void {
    throw SpecError("line " + std::to_string(line_no) + ": " +
                    std::string(msg));
  };

  std::string_view line;
  if (!next_line(line) || line != "cohortspec v1")
    throw SpecError("expected 'cohortspec v1' header");

  auto expect = [&](std::string_view key) -> std::string_view {
    if (!next_line(line)) fail("unexpected end of file");
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || line.substr(0, eq) != key)
      fail("expected " + std::string(key) + "=");
    return line.substr(eq + 1);
  };

  if (auto n = text::parse_u64(expect("n")))
    spec.n = static_cast<std::size_t>(*n);
  else
    fail("n is not an integer");
  if (auto s = text::parse_u64(expect("seed")))
    spec.seed = *s;
  else
    fail("seed is not an integer");
  if (auto p = text::parse_double(expect("prior_yes")))
    spec.prior_yes = *p;
  else
    fail("prior_yes is not a number");

  for (std::size_t c = 0; c < kClassCount; ++c) {
    for (std::size_t k = 0; k < predictor_count(); ++k) {
      const std::string key =
          std::string(kClassKeys[c]) + "." + attrs[k].name;
      const std::string_view value = expect(key);
      std::vector<double> dist;
      std::size_t start = 0;
      for (;;) {
        const std::size_t comma = value.find(',', start);
        const std::string_view field =
            value.substr(start, comma - start);
        if (auto x = text::parse_double(text::trim(field)))
          dist.push_back(*x);
        else
          fail("bad probability '" + std::string(field) + "'");
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      spec.conditionals[c].push_back(std::move(dist));
    }
  }
  while (next_line(line))
    if (!text::trim(line).empty()) fail("trailing content");
  check_spec(spec);
  return spec;
}

}  // namespace dropout::synth
