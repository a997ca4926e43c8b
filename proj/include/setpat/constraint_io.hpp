#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "setpat/expr.hpp"

namespace setpat {

/// Error raised for malformed input text; carries a 1-based source position.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, int line, int column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

  private:
    int line_;
    int column_;
};

struct ConstraintProblem {
    Signature signature;
    Formula formula = Formula::truth();
};

/// Parses the s-expression constraint format:
///
///   file := decl* assertion+
///   decl := "(declare-fun" NAME NAT ")"
///   assertion := "(assert" c ")"
///   c := (subset e e) | (and c c+) | (or c c+) | (not c) | (=> c c) | (iff c c) | true | false
///   e := top | bot | (var NAME) | (union e e+) | (inter e e+) | (neg e) | (NAME e*) | NAME | (proj NAME NAT e)
///
/// Multiple assertions are conjoined. Names beginning with '$' are reserved
/// for generated variables and rejected.
ConstraintProblem parse_constraint_file(std::string_view text);

/// Inverse of parse_constraint_file up to structural equality.
std::string print_constraint_file(const Signature& sig, const Formula& f);

}  // namespace setpat
