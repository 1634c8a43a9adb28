#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "causeplan/causal_model.hpp"

namespace causeplan {

/// Syntax or structural error in model source. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  /// Message without the position prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

// Grammar, one statement per line, `#` starts a comment:
//
//   goal: <label>
//   intermediate: <label> ("," <label>)*
//   <label> (AND <label>)* CAUSES <label>
//
// A label is a bare word or a double-quoted string (\" and \\ escapes).
// Keywords are case-insensitive.
CausalModel parse_model(std::string_view source);

/// Canonical source text. parse_model(serialize_model(m)) == m.
std::string serialize_model(const CausalModel& model);

}  // namespace causeplan
