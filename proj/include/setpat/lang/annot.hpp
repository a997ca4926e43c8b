#pragma once

// Annotated types and the metafunctions of the match analysis: type
// equating, freshening, pattern sets, not-yet-covered sets, pattern
// environments, and the syntactic exhaustiveness check.

#include <string>
#include <utility>
#include <vector>

#include "setpat/expr.hpp"
#include "setpat/lang/ast.hpp"

namespace setpat::lang {

struct AnnType;
using AnnTypePtr = std::shared_ptr<const AnnType>;

enum class AnnKind { TVar, Data, Arrow };

/// An underlying type with a set annotation at every node.
struct AnnType {
    AnnKind kind = AnnKind::Data;
    int var = -1;
    std::string name;
    /// Int and Double: values carry no set-level content.
    bool opaque = false;
    SetExpr ann = SetExpr::top();
    AnnTypePtr from, to;

    static AnnTypePtr tvar(int id, SetExpr ann);
    static AnnTypePtr data(std::string name, bool opaque, SetExpr ann);
    static AnnTypePtr arrow(AnnTypePtr from, AnnTypePtr to, SetExpr ann);
};

/// Same shape, top annotation replaced.
AnnTypePtr with_top(const AnnTypePtr& t, SetExpr ann);
UTypePtr erase(const AnnTypePtr& t);
std::string to_string(const AnnTypePtr& t);
void collect_set_vars(const AnnTypePtr& t, std::vector<std::string>& out);

/// E1 = E2 at every aligned annotation; false on a shape mismatch. Opaque
/// positions contribute nothing.
Formula equate(const AnnTypePtr& a, const AnnTypePtr& b);

/// Every annotation replaced by a distinct fresh variable.
AnnTypePtr freshen(const UTypePtr& t, const DataEnv& data, FreshNames& names);
AnnTypePtr freshen(const AnnTypePtr& t, FreshNames& names);

SetExpr pattern_set(const Pattern& p);
/// ⊤ for i = 0, else ¬P̄(P_0) ∩ ... ∩ ¬P̄(P_{i-1}).
SetExpr not_yet_covered(const std::vector<Pattern>& patterns, std::size_t i);

using AnnBindings = std::vector<std::pair<std::string, AnnTypePtr>>;

/// Bindings introduced by matching `p` against `t`, in pattern order.
/// Sub-pattern i of K(...) is matched at annotation Proj(K, i, E).
void bind_pattern(const Pattern& p, const AnnTypePtr& t, const DataEnv& data, FreshNames& names, AnnBindings& out);

/// True when the patterns cover every value of `scrutinee` (matrix
/// specialization; opaque and function columns are covered only by
/// variables).
bool is_exhaustive(const std::vector<Pattern>& patterns, const UTypePtr& scrutinee, const DataEnv& data);

}  // namespace setpat::lang
