#pragma once

// Parser for the surface language.
//
//   program  := datadecl* topdef+
//   datadecl := 'data' D '=' ctor ('|' ctor)*
//   ctor     := K | K '(' type (',' type)* ')'
//   type     := D | type '->' type | '(' type ')'
//   topdef   := x '=' term
//   term     := '\' x+ '.' term | 'let' x '=' term 'in' term
//             | 'match' term 'with' '{' (pat '->' term ';')+ '}' | appterm
//
// Top-level definitions become nested lets whose body is the last name.

#include <string_view>

#include "setpat/lang/ast.hpp"

namespace setpat::lang {

/// Throws SyntaxError.
Program parse_program(std::string_view text);

/// Parses a single term against an existing datatype environment.
TermPtr parse_term(std::string_view text, const DataEnv& data);

}  // namespace setpat::lang
