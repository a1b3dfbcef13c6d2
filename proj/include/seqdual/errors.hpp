#pragma once

#include <stdexcept>
#include <string>

namespace seqdual {

// A requested operation's hypothesis flags are not satisfied by the classes
// involved. The message names the missing flag.
struct HypothesisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed textual input (JSON, class syntax). Carries a position when the
// source text offers one.
struct ParseError : std::invalid_argument {
  ParseError(const std::string& msg, int line = 0, int column = 0)
      : std::invalid_argument(msg), line(line), column(column) {}
  int line;
  int column;
};

}  // namespace seqdual
