#include "dropout/arff.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "dropout/text.hpp"

namespace dropout::arff {

namespace {

using text::Token;

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedHeader: return "malformed header";
    case ErrorKind::ArityMismatch: return "arity mismatch";
    case ErrorKind::UndeclaredNominal: return "undeclared nominal";
    case ErrorKind::NonNumericCell: return "non-numeric cell";
  }
  return "error";
}

[[noreturn]] void fail(ErrorKind kind, std::size_t line, std::string msg) {
  throw ArffError(kind, line, std::move(msg));
}

struct Line {
  std::string_view raw;
  std::size_t number;  // 1-based
};

// Splits into lines, dropping blank and %-comment lines.
std::vector<Line> significant_lines(std::string_view content) {
  std::vector<Line> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view raw = content.substr(pos, eol - pos);
    ++line_no;
    std::string_view trimmed = text::trim(raw);
    if (!trimmed.empty() && trimmed[0] != '%') out.push_back({raw, line_no});
    if (eol == content.size()) break;
    pos = eol + 1;
  }
  return out;
}

// `@attribute <name> numeric` or `@attribute <name> {v1,...}`, cursor past
// the keyword.
AttributeDecl parse_attribute_decl(std::string_view rest, std::size_t line) {
  AttributeDecl decl;
  std::size_t pos = 0;
  Token name;
  try {
    name = text::read_token(rest, pos);
  } catch (const text::TokenError& e) {
    fail(ErrorKind::MalformedHeader, line, e.what());
  }
  if (name.value.empty())
    fail(ErrorKind::MalformedHeader, line, "@attribute is missing a name");
  decl.name = name.value;

  std::string_view kind = text::trim(rest.substr(pos));
  if (text::iequals(kind, "numeric")) {
    decl.kind = AttributeKind::Numeric;
    return decl;
  }
  if (kind.size() >= 2 && kind.front() == '{' && kind.back() == '}') {
    decl.kind = AttributeKind::Nominal;
    std::string_view inner = kind.substr(1, kind.size() - 2);
    if (text::trim(inner).empty())
      fail(ErrorKind::MalformedHeader, line,
           "attribute '" + decl.name + "' declares no values");
    std::vector<Token> tokens;
    try {
      tokens = text::split_list(inner);
    } catch (const text::TokenError& e) {
      fail(ErrorKind::MalformedHeader, line, e.what());
    }
    std::unordered_set<std::string_view> seen;
    for (const Token& t : tokens) {
      // a bare brace would make the list boundary ambiguous
      if (!t.quoted && t.value.find_first_of("{}") != std::string::npos)
        fail(ErrorKind::MalformedHeader, line,
             "unquoted brace in value '" + t.value + "'");
      if (!seen.insert(t.value).second)
        fail(ErrorKind::MalformedHeader, line,
             "duplicate nominal value '" + t.value + "' in attribute '" +
                 decl.name + "'");
      decl.values.push_back(t.value);
    }
    if (decl.values.empty())
      fail(ErrorKind::MalformedHeader, line,
           "attribute '" + decl.name + "' declares no values");
    return decl;
  }
  fail(ErrorKind::MalformedHeader, line,
       "attribute '" + decl.name + "' must be numeric or {v1,v2,...}");
}

Cell parse_cell(const Token& token, const AttributeDecl& attr,
                std::size_t line) {
  if (!token.quoted && token.value == "?") return Cell::missing();
  if (attr.kind == AttributeKind::Numeric) {
    if (auto v = text::parse_double(token.value)) return Cell::numeric(*v);
    fail(ErrorKind::NonNumericCell, line,
         "'" + token.value + "' is not a finite number for attribute '" +
             attr.name + "'");
  }
  for (std::size_t i = 0; i < attr.values.size(); ++i)
    if (attr.values[i] == token.value) return Cell::nominal(i);
  fail(ErrorKind::UndeclaredNominal, line,
       "'" + token.value + "' is not declared for attribute '" + attr.name +
           "'");
}

std::string write_cell(const Cell& cell, const AttributeDecl& attr) {
  switch (cell.kind()) {
    case Cell::Kind::Missing: return "?";
    case Cell::Kind::Numeric: return text::format_double_shortest(cell.number());
    case Cell::Kind::Nominal:
      return text::quote_token(attr.values.at(cell.index()));
  }
  return "?";
}

}  // namespace

ArffError::ArffError(ErrorKind kind, std::size_t line, std::string message)
    : std::runtime_error("line " + std::to_string(line) + ": " +
                         kind_name(kind) + ": " + message),
      kind_(kind),
      line_(line) {}

Dataset parse_arff(std::string_view content) {
  const std::vector<Line> lines = significant_lines(content);
  Dataset d;
  std::size_t i = 0;

  // @relation
  if (i >= lines.size())
    fail(ErrorKind::MalformedHeader, lines.empty() ? 1 : lines.back().number,
         "missing @relation");
  {
    std::string_view raw = lines[i].raw;
    std::size_t pos = 0;
    Token kw;
    try {
      kw = text::read_token(raw, pos);
    } catch (const text::TokenError& e) {
      fail(ErrorKind::MalformedHeader, lines[i].number, e.what());
    }
    if (kw.quoted || !text::iequals(kw.value, "@relation"))
      fail(ErrorKind::MalformedHeader, lines[i].number, "expected @relation");
    std::string_view rest = text::trim(raw.substr(pos));
    if (rest.empty())
      fail(ErrorKind::MalformedHeader, lines[i].number,
           "@relation is missing a name");
    if (rest.front() == '\'') {
      std::size_t rpos = 0;
      try {
        Token name = text::read_token(rest, rpos);
        if (!text::trim(rest.substr(rpos)).empty())
          fail(ErrorKind::MalformedHeader, lines[i].number,
               "junk after relation name");
        d.relation = name.value;
      } catch (const text::TokenError& e) {
        fail(ErrorKind::MalformedHeader, lines[i].number, e.what());
      }
    } else {
      d.relation = std::string(rest);
    }
    ++i;
  }

  // @attribute block, then @data
  std::unordered_set<std::string_view> names;
  bool saw_data = false;
  for (; i < lines.size(); ++i) {
    std::string_view raw = lines[i].raw;
    std::size_t pos = 0;
    Token kw;
    try {
      kw = text::read_token(raw, pos);
    } catch (const text::TokenError& e) {
      fail(ErrorKind::MalformedHeader, lines[i].number, e.what());
    }
    if (!kw.quoted && text::iequals(kw.value, "@data")) {
      if (!text::trim(raw.substr(pos)).empty())
        fail(ErrorKind::MalformedHeader, lines[i].number, "junk after @data");
      saw_data = true;
      ++i;
      break;
    }
    if (kw.quoted || !text::iequals(kw.value, "@attribute"))
      fail(ErrorKind::MalformedHeader, lines[i].number,
           "expected @attribute or @data");
    AttributeDecl decl = parse_attribute_decl(raw.substr(pos), lines[i].number);
    d.attributes.push_back(std::move(decl));
    if (!names.insert(d.attributes.back().name).second)
      fail(ErrorKind::MalformedHeader, lines[i].number,
           "duplicate attribute name '" + d.attributes.back().name + "'");
  }
  if (!saw_data)
    fail(ErrorKind::MalformedHeader,
         lines.empty() ? 1 : lines.back().number, "missing @data");
  if (d.attributes.empty())
    fail(ErrorKind::MalformedHeader, lines[i - 1].number,
         "no attributes declared");

  // data rows
  for (; i < lines.size(); ++i) {
    std::vector<Token> tokens;
    try {
      tokens = text::split_list(lines[i].raw);
    } catch (const text::TokenError& e) {
      fail(ErrorKind::ArityMismatch, lines[i].number, e.what());
    }
    if (tokens.size() != d.attributes.size())
      fail(ErrorKind::ArityMismatch, lines[i].number,
           "row has " + std::to_string(tokens.size()) + " cells, expected " +
               std::to_string(d.attributes.size()));
    Row row;
    row.reserve(tokens.size());
    for (std::size_t c = 0; c < tokens.size(); ++c)
      row.push_back(parse_cell(tokens[c], d.attributes[c], lines[i].number));
    d.instances.push_back(std::move(row));
  }
  return d;
}

std::string write_arff(const Dataset& d) {
  std::string out = "@relation " + text::quote_token(d.relation) + "\n";
  for (const AttributeDecl& a : d.attributes) {
    out += "@attribute " + text::quote_token(a.name) + " ";
    if (a.kind == AttributeKind::Numeric) {
      out += "numeric\n";
    } else {
      out += "{";
      for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (i) out += ",";
        out += text::quote_token(a.values[i]);
      }
      out += "}\n";
    }
  }
  out += "@data\n";
  for (const Row& row : d.instances) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += write_cell(row[c], d.attributes[c]);
    }
    out += "\n";
  }
  return out;
}

std::string describe(const Violation& v) {
  std::string out;
  if (v.row)
    out += "row " + std::to_string(*v.row) + ": ";
  else
    out += "header: ";
  if (!v.attribute.empty()) out += "attribute '" + v.attribute + "': ";
  out += v.rule;
  return out;
}

std::vector<Violation> validate(const Dataset& d) {
  std::vector<Violation> out;
  std::unordered_set<std::string_view> names;
  for (const AttributeDecl& a : d.attributes) {
    if (a.name.empty()) out.push_back({std::nullopt, a.name, "empty attribute name"});
    if (!names.insert(a.name).second)
      out.push_back({std::nullopt, a.name, "duplicate attribute name"});
    if (a.kind == AttributeKind::Nominal) {
      if (a.values.empty())
        out.push_back({std::nullopt, a.name, "nominal attribute with no values"});
      std::unordered_set<std::string_view> vals;
      for (const std::string& v : a.values)
        if (!vals.insert(v).second)
          out.push_back({std::nullopt, a.name, "duplicate nominal value '" + v + "'"});
    }
  }
  for (std::size_t r = 0; r < d.instances.size(); ++r) {
    const Row& row = d.instances[r];
    if (row.size() != d.attributes.size()) {
      out.push_back({r, "",
                     "row has " + std::to_string(row.size()) +
                         " cells, expected " +
                         std::to_string(d.attributes.size())});
      continue;
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Cell& cell = row[c];
      const AttributeDecl& a = d.attributes[c];
      switch (cell.kind()) {
        case Cell::Kind::Missing: break;
        case Cell::Kind::Nominal:
          if (a.kind != AttributeKind::Nominal)
            out.push_back({r, a.name, "nominal cell under numeric attribute"});
          else if (cell.index() >= a.values.size())
            out.push_back({r, a.name,
                           "nominal index " + std::to_string(cell.index()) +
                               " outside value list of size " +
                               std::to_string(a.values.size())});
          break;
        case Cell::Kind::Numeric:
          if (a.kind != AttributeKind::Numeric)
            out.push_back({r, a.name, "numeric cell under nominal attribute"});
          else if (!std::isfinite(cell.number()))
            out.push_back({r, a.name, "non-finite numeric cell"});
          break;
      }
    }
  }
  return out;
}

}  // namespace dropout::arff
