// Text form of base-system coefficients. Grammar:
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := power (('*'|'/') power)*
//   power  := atom ['^' ['-'] integer]
//   atom   := number | 'q' | parameter | fn '(' 'q' ')' | '(' expr ')'
//   fn     := sin | cos | sinh | cosh
//
// Numbers are integers or decimals and are read exactly. Parameters are the
// expr-core parameter names (c1, c2, L0, omega, A, a1, a2, b, alpha1, ...).
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "hamext/expr.hpp"
#include "hamext/phase_space.hpp"

namespace hamext {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& msg, std::size_t column)
      : std::invalid_argument(msg + " at column " + std::to_string(column + 1)), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

struct ParsedCoeff {
  Coeff value;
  GeneratorKind kind = GeneratorKind::linear;  // circular if sin/cos occur, hyperbolic for sinh/cosh
};

ParsedCoeff parse_coeff(std::string_view text);

// Kind needed by several expressions together; throws std::invalid_argument
// when circular and hyperbolic functions are mixed.
GeneratorKind combined_kind(GeneratorKind a, GeneratorKind b);

}  // namespace hamext
