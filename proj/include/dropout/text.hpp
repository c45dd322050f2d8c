#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dropout::text {

// Token conventions shared by the ARFF, nbmodel and cohortspec text formats.
//
// A token is written bare when that is unambiguous; otherwise it is wrapped
// in single quotes. Inside quotes the escapes \' \\ \n \r \t are recognized,
// so any string (including the empty string) has exactly one written form
// and every written form parses back to the original string.
//
// When reading, a bare token is taken literally after trimming surrounding
// whitespace; a bare `?` is the missing-value marker in ARFF data rows,
// which is why a literal "?" must be quoted.

// Raised on malformed quoting/escapes; callers wrap it into their own
// located error type.
struct TokenError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Token {
  std::string value;
  bool quoted = false;
};

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

bool needs_quoting(std::string_view s);
std::string quote_token(std::string_view s);

// Splits a comma-separated list into tokens, honoring quotes and escapes.
// An empty input yields one empty bare token (a list always has >= 1 entry).
std::vector<Token> split_list(std::string_view s);

// Reads one token starting at pos (after any whitespace); for bare tokens
// stops at whitespace. Advances pos past the token.
Token read_token(std::string_view s, std::size_t& pos);

// Locale-independent number formatting.
std::string format_double_shortest(double v);   // shortest round-tripping
std::string format_double_17g(double v);        // 17 significant digits
std::string format_double_fixed(double v, int precision);

// Strict parses: whole string must be consumed; doubles must be finite.
std::optional<double> parse_double(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);

}  // namespace dropout::text
