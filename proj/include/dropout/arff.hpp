#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dropout::arff {

// Parser/writer for the ARFF subset this project uses as its data
// interchange format. The accepted grammar, line by line:
//
//   % comment            -- ignored, allowed anywhere
//                        -- blank lines ignored, allowed anywhere
//   @relation <name>
//   @attribute <name> {v1,v2,...}     -- nominal
//   @attribute <name> numeric
//   @data
//   v1,v2,...            -- one instance per line, one cell per attribute
//
// Keywords are case-insensitive; attribute names and nominal values are
// case-sensitive. Tokens are trimmed; a bare `?` in a data row is the
// missing marker; tokens containing specials use the single-quote
// convention of dropout::text. Numeric cells must be finite; `inf`/`nan`
// are rejected. write_arff emits numeric cells in their shortest
// round-tripping decimal form, so parse(write(d)) reproduces d exactly.

enum class AttributeKind { Nominal, Numeric };

struct AttributeDecl {
  std::string name;
  AttributeKind kind = AttributeKind::Nominal;
  std::vector<std::string> values;  // nominal only; ordered, distinct

  bool operator==(const AttributeDecl&) const = default;
};

// One cell of an instance row: a 0-based index into the declaring nominal
// attribute's value list, a finite real, or missing.
class Cell {
 public:
  enum class Kind { Missing, Nominal, Numeric };

  static Cell missing() { return Cell(); }
  static Cell nominal(std::size_t index) {
    Cell c;
    c.kind_ = Kind::Nominal;
    c.index_ = index;
    return c;
  }
  static Cell numeric(double value) {
    Cell c;
    c.kind_ = Kind::Numeric;
    c.number_ = value;
    return c;
  }

  Kind kind() const { return kind_; }
  bool is_missing() const { return kind_ == Kind::Missing; }
  std::size_t index() const { return index_; }
  double number() const { return number_; }

  bool operator==(const Cell&) const = default;

 private:
  Kind kind_ = Kind::Missing;
  std::size_t index_ = 0;
  double number_ = 0.0;
};

using Row = std::vector<Cell>;

struct Dataset {
  std::string relation;
  std::vector<AttributeDecl> attributes;
  std::vector<Row> instances;

  bool operator==(const Dataset&) const = default;
};

enum class ErrorKind {
  MalformedHeader,
  ArityMismatch,
  UndeclaredNominal,
  NonNumericCell,
};

// Located parse error; `line` is 1-based.
class ArffError : public std::runtime_error {
 public:
  ArffError(ErrorKind kind, std::size_t line, std::string message);

  ErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

// One broken Dataset invariant; `row` is absent for header-level problems.
struct Violation {
  std::optional<std::size_t> row;
  std::string attribute;
  std::string rule;
};

std::string describe(const Violation& v);

Dataset parse_arff(std::string_view content);
std::string write_arff(const Dataset& d);

// Empty result iff every Dataset/Cell invariant holds. Never throws;
// violations are data.
std::vector<Violation> validate(const Dataset& d);

}  // namespace dropout::arff
