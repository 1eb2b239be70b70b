// Concrete-syntax parsers. Precedence, loosest first: -> | & with ! and the
// modalities <r> [r] binding tightest; in paths + then ; with postfix *
// tightest. Tests are an LDLf formula followed by ?. Path letters are an
// atom, a negated letter, or a parenthesized propositional expression. LTLf
// adds the contextual unary keywords X N F G and infix U.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ldlfmon/formula.hpp"

namespace ldlfmon {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col,
             std::vector<std::string> expected)
      : std::runtime_error(msg), line_(line), col_(col),
        expected_(std::move(expected)) {}

  int line() const { return line_; }
  int col() const { return col_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int col_;
  std::vector<std::string> expected_;
};

Formula parse_ldlf(std::string_view text);
Ltlf parse_ltlf(std::string_view text);
Path parse_path(std::string_view text);
Prop parse_prop(std::string_view text);

}  // namespace ldlfmon
