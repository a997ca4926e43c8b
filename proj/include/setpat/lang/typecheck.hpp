#pragma once

// Hindley-Milner inference for the underlying types. Annotates the term in
// place: every node gets its zonked type, variables record how the
// generalized type variables of their binder were instantiated, lets record
// what they generalized, and matches get a source-order id.

#include <map>
#include <string>
#include <vector>

#include "setpat/lang/ast.hpp"

namespace setpat::lang {

struct TypeScheme {
    std::vector<int> vars;
    UTypePtr type;
};

std::string to_string(const TypeScheme& s);

struct TypeInfo {
    /// Top-level definitions in source order.
    std::vector<std::pair<std::string, TypeScheme>> definitions;
    int match_count = 0;
};

/// Throws TypeError.
TypeInfo typecheck(Program& program);

/// Free type variables of a zonked type.
std::vector<int> type_vars(const UTypePtr& t);

}  // namespace setpat::lang
