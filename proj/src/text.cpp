#include "dropout/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <system_error>

namespace dropout::text {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

char unescape(char c) {
  switch (c) {
    case 'n': return '\n';
    case 'r': return '\r';
    case 't': return '\t';
    case '\'': return '\'';
    case '\\': return '\\';
    default: throw TokenError(std::string("unknown escape \\") + c);
  }
}

void append_escaped(std::string& out, char c) {
  switch (c) {
    case '\n': out += "\\n"; break;
    case '\r': out += "\\r"; break;
    case '\t': out += "\\t"; break;
    case '\'': out += "\\'"; break;
    case '\\': out += "\\\\"; break;
    default: out += c;
  }
}

// Parses a quoted token whose opening quote sits at s[pos]; leaves pos just
// past the closing quote.
std::string read_quoted(std::string_view s, std::size_t& pos) {
  std::string out;
  ++pos;  // opening quote
  while (pos < s.size()) {
    const char c = s[pos];
    if (c == '\'') {
      ++pos;
      return out;
    }
    if (c == '\\') {
      if (pos + 1 >= s.size()) throw TokenError("dangling escape");
      out += unescape(s[pos + 1]);
      pos += 2;
      continue;
    }
    out += c;
    ++pos;
  }
  throw TokenError("unterminated quoted token");
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

bool needs_quoting(std::string_view s) {
  if (s.empty() || s == "?") return true;
  for (char c : s) {
    if (is_space(c) || c == ',' || c == '\'' || c == '\\' || c == '%' ||
        c == '{' || c == '}')
      return true;
  }
  return false;
}

std::string quote_token(std::string_view s) {
  if (!needs_quoting(s)) return std::string(s);
  std::string out = "'";
  for (char c : s) append_escaped(out, c);
  out += '\'';
  return out;
}

std::vector<Token> split_list(std::string_view s) {
  std::vector<Token> out;
  std::size_t pos = 0;
  for (;;) {
    while (pos < s.size() && is_space(s[pos])) ++pos;
    if (pos < s.size() && s[pos] == '\'') {
      Token t;
      t.value = read_quoted(s, pos);
      t.quoted = true;
      while (pos < s.size() && is_space(s[pos])) ++pos;
      if (pos < s.size() && s[pos] != ',')
        throw TokenError("junk after quoted token");
      out.push_back(std::move(t));
    } else {
      const std::size_t start = pos;
      while (pos < s.size() && s[pos] != ',') {
        if (s[pos] == '\'') throw TokenError("quote inside bare token");
        ++pos;
      }
      out.push_back({std::string(trim(s.substr(start, pos - start))), false});
    }
    if (pos >= s.size()) return out;
    ++pos;  // comma
  }
}

Token read_token(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && is_space(s[pos])) ++pos;
  if (pos < s.size() && s[pos] == '\'') {
    return {read_quoted(s, pos), true};
  }
  const std::size_t start = pos;
  while (pos < s.size() && !is_space(s[pos])) {
    if (s[pos] == '\'') throw TokenError("quote inside bare token");
    ++pos;
  }
  return {std::string(s.substr(start, pos - start)), false};
}

std::string format_double_shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_double_17g(double v) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string format_double_fixed(double v, int precision) {
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::fixed, precision);
  if (ec != std::errc()) return "?";
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

}  // namespace dropout::text
