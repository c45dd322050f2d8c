#pragma once

// Shared test utilities: random data generators driven by the project PRNG,
// an independent no-log Naive Bayes oracle recomputed straight from the
// dataset, and a harness for driving the CLI binary.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dropout/arff.hpp"
#include "dropout/nb.hpp"
#include "dropout/rng.hpp"

namespace testutil {

using dropout::arff::AttributeDecl;
using dropout::arff::AttributeKind;
using dropout::arff::Cell;
using dropout::arff::Dataset;
using dropout::arff::Row;
using dropout::rng::Xoshiro256;

// --- random tokens / datasets ---------------------------------------------

// Alphabet deliberately includes every character the quoting layer treats
// specially.
inline std::string random_token(Xoshiro256& g, std::size_t max_len = 8) {
  static const std::string alphabet =
      "abcdefghijABCDE01234 ,'%{}?\\\t\n-._";
  const std::size_t len = 1 + g.next_below(max_len);
  std::string out;
  for (std::size_t i = 0; i < len; ++i)
    out += alphabet[g.next_below(alphabet.size())];
  return out;
}

inline std::string random_simple_token(Xoshiro256& g, std::size_t max_len = 6) {
  static const std::string alphabet = "abcdefgh";
  const std::size_t len = 1 + g.next_below(max_len);
  std::string out;
  for (std::size_t i = 0; i < len; ++i)
    out += alphabet[g.next_below(alphabet.size())];
  return out;
}

inline std::vector<std::string> distinct_tokens(Xoshiro256& g, std::size_t n,
                                                bool gnarly) {
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string t = gnarly ? random_token(g) : random_simple_token(g);
    bool dup = false;
    for (const auto& s : out) dup |= (s == t);
    if (!dup) out.push_back(std::move(t));
  }
  return out;
}

inline double random_value(Xoshiro256& g) {
  // Mix round values and awkward fractions.
  switch (g.next_below(4)) {
    case 0: return static_cast<double>(g.next_below(100));
    case 1: return g.next_unit() * 2000.0 - 1000.0;
    case 2: return (g.next_unit() - 0.5) * 1e-6;
    default: return g.next_unit() * 1e12;
  }
}

// Random dataset exercising the full ARFF surface: gnarly names/values,
// numeric attributes, missing cells.
inline Dataset random_dataset(Xoshiro256& g) {
  Dataset d;
  d.relation = g.next_below(4) == 0 ? "" : random_token(g);
  const std::size_t num_attrs = 1 + g.next_below(5);
  const auto names = distinct_tokens(g, num_attrs, true);
  for (std::size_t a = 0; a < num_attrs; ++a) {
    AttributeDecl decl;
    decl.name = names[a];
    if (g.next_below(3) == 0) {
      decl.kind = AttributeKind::Numeric;
    } else {
      decl.kind = AttributeKind::Nominal;
      decl.values = distinct_tokens(g, 1 + g.next_below(4), true);
    }
    d.attributes.push_back(std::move(decl));
  }
  const std::size_t rows = g.next_below(8);
  for (std::size_t r = 0; r < rows; ++r) {
    Row row;
    for (const auto& a : d.attributes) {
      if (g.next_below(6) == 0) {
        row.push_back(Cell::missing());
      } else if (a.kind == AttributeKind::Numeric) {
        row.push_back(Cell::numeric(random_value(g)));
      } else {
        row.push_back(Cell::nominal(g.next_below(a.values.size())));
      }
    }
    d.instances.push_back(std::move(row));
  }
  return d;
}

// Small classification dataset: nominal target last, 1-3 predictors of
// either kind, every declared target value used at least once.
inline Dataset random_tiny_classified(Xoshiro256& g, bool allow_missing = true,
                                      bool allow_numeric = true) {
  Dataset d;
  d.relation = "tiny";
  const std::size_t num_preds = 1 + g.next_below(3);
  for (std::size_t a = 0; a < num_preds; ++a) {
    AttributeDecl decl;
    decl.name = "p" + std::to_string(a);
    if (allow_numeric && g.next_below(3) == 0) {
      decl.kind = AttributeKind::Numeric;
    } else {
      decl.kind = AttributeKind::Nominal;
      decl.values.resize(2 + g.next_below(3));
      for (std::size_t v = 0; v < decl.values.size(); ++v)
        decl.values[v] = "v" + std::to_string(v);
    }
    d.attributes.push_back(std::move(decl));
  }
  AttributeDecl target;
  target.name = "class";
  target.kind = AttributeKind::Nominal;
  const std::size_t num_classes = 2 + g.next_below(2);
  for (std::size_t c = 0; c < num_classes; ++c)
    target.values.push_back("c" + std::to_string(c));
  d.attributes.push_back(std::move(target));

  const std::size_t rows = num_classes + g.next_below(20 - num_classes + 1);
  for (std::size_t r = 0; r < rows; ++r) {
    Row row;
    for (std::size_t a = 0; a < num_preds; ++a) {
      if (allow_missing && g.next_below(8) == 0) {
        row.push_back(Cell::missing());
      } else if (d.attributes[a].kind == AttributeKind::Numeric) {
        row.push_back(Cell::numeric(g.next_unit() * 10.0));
      } else {
        row.push_back(
            Cell::nominal(g.next_below(d.attributes[a].values.size())));
      }
    }
    // First rows cycle the classes so each one appears.
    row.push_back(Cell::nominal(r < num_classes ? r : g.next_below(num_classes)));
    d.instances.push_back(std::move(row));
  }
  return d;
}

// Random query row in bare predictor layout.
inline Row random_query(Xoshiro256& g, const Dataset& d, bool allow_missing) {
  Row row;
  for (std::size_t a = 0; a + 1 < d.attributes.size(); ++a) {
    if (allow_missing && g.next_below(8) == 0) {
      row.push_back(Cell::missing());
    } else if (d.attributes[a].kind == AttributeKind::Numeric) {
      row.push_back(Cell::numeric(g.next_unit() * 10.0));
    } else {
      row.push_back(
          Cell::nominal(g.next_below(d.attributes[a].values.size())));
    }
  }
  return row;
}

// --- no-log brute-force oracle ---------------------------------------------

// Recomputed directly from the dataset with raw probability products:
// two-pass variance, std::exp density, no logs anywhere. Kept deliberately
// separate from dropout::nb.
struct OracleResult {
  std::vector<std::string> labels;
  std::vector<double> joints;      // P(C) * prod P(x_k|C)
  std::vector<double> posteriors;  // joints normalized (valid if total > 0)
  double total = 0.0;
  std::size_t argmax = 0;
};

inline OracleResult oracle_predict(const Dataset& d, std::size_t target_index,
                                   const Row& query, double alpha,
                                   double variance_floor) {
  const auto& target = d.attributes[target_index];
  OracleResult res;

  std::vector<std::size_t> class_count(target.values.size(), 0);
  std::size_t total = 0;
  for (const Row& row : d.instances) {
    if (row[target_index].is_missing()) continue;
    ++class_count[row[target_index].index()];
    ++total;
  }

  for (std::size_t c = 0; c < target.values.size(); ++c) {
    if (class_count[c] == 0) continue;
    double joint =
        static_cast<double>(class_count[c]) / static_cast<double>(total);
    std::size_t k = 0;  // predictor position
    for (std::size_t col = 0; col < d.attributes.size(); ++col) {
      if (col == target_index) continue;
      const Cell& q = query.size() == d.attributes.size() ? query[col]
                                                          : query[k];
      ++k;
      if (q.is_missing()) continue;
      const auto& attr = d.attributes[col];
      if (attr.kind == AttributeKind::Nominal) {
        std::size_t count = 0, nonmissing = 0;
        for (const Row& row : d.instances) {
          if (row[target_index].is_missing() ||
              row[target_index].index() != c)
            continue;
          if (row[col].is_missing()) continue;
          ++nonmissing;
          if (row[col].index() == q.index()) ++count;
        }
        const double denom = static_cast<double>(nonmissing) +
                             alpha * static_cast<double>(attr.values.size());
        joint *= denom > 0.0 ? (static_cast<double>(count) + alpha) / denom
                             : 1.0 / static_cast<double>(attr.values.size());
      } else {
        // two-pass mean/variance over the class's non-missing values
        std::vector<double> xs;
        for (const Row& row : d.instances) {
          if (row[target_index].is_missing() ||
              row[target_index].index() != c)
            continue;
          if (!row[col].is_missing()) xs.push_back(row[col].number());
        }
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean = xs.empty() ? 0.0 : mean / static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var = xs.size() >= 2 ? var / static_cast<double>(xs.size() - 1) : 0.0;
        const double sigma = (xs.size() < 2 || var < variance_floor)
                                 ? std::sqrt(variance_floor)
                                 : std::sqrt(var);
        joint *= 1.0 / (std::sqrt(2.0 * M_PI) * sigma) *
                 std::exp(-(q.number() - mean) * (q.number() - mean) /
                          (2.0 * sigma * sigma));
      }
    }
    res.labels.push_back(target.values[c]);
    res.joints.push_back(joint);
    res.total += joint;
  }

  res.argmax = 0;
  for (std::size_t i = 1; i < res.joints.size(); ++i)
    if (res.joints[i] > res.joints[res.argmax]) res.argmax = i;
  res.posteriors.resize(res.joints.size());
  if (res.total > 0.0)
    for (std::size_t i = 0; i < res.joints.size(); ++i)
      res.posteriors[i] = res.joints[i] / res.total;
  return res;
}

// --- CLI harness ------------------------------------------------------------

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("dropout-miner-test-" + tag + "-" + std::to_string(::getpid()) +
             "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline CliResult run_cli(const TempDir& dir, const std::string& args,
                         const std::string& env_prefix = "") {
  const auto out_path = dir.path() / "stdout.txt";
  const auto err_path = dir.path() / "stderr.txt";
  const std::string cmd = env_prefix + "\"" DROPOUT_MINER_BIN "\" " + args +
                          " > \"" + out_path.string() + "\" 2> \"" +
                          err_path.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.out = slurp(out_path);
  res.err = slurp(err_path);
  return res;
}

}  // namespace testutil
