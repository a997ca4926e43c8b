#pragma once

#include <map>
#include <string>
#include <utility>

#include "setpat/expr.hpp"

namespace setpat {

/// Union-find over set-variable names. The representative of a class is its
/// lexicographically least member.
class VarUnionFind {
  public:
    const std::string& find(const std::string& name);
    /// Returns true when the two names were in different classes.
    bool unite(const std::string& a, const std::string& b);
    [[nodiscard]] bool contains(const std::string& name) const { return parent_.contains(name); }
    /// Every name seen so far mapped to its representative.
    std::map<std::string, std::string> classes();

  private:
    std::map<std::string, std::string> parent_;
};

/// Local rewrites to fixpoint: E∩⊤→E, E∩⊥→⊥, E∪⊥→E, E∪⊤→⊤, ¬¬E→E, ¬⊤→⊥,
/// ¬⊥→⊤, E∩E→E, E∪E→E, f(…,⊥,…)→⊥. Each rewrite shrinks the tree.
SetExpr simplify_expr(const SetExpr& e);

/// simplify_expr on both sides of every atom.
Formula simplify_exprs(const Formula& f);

/// Replaces E⊆⊤, ⊥⊆E and E⊆E by true and folds boolean constants. Folding
/// treats ⊤⊆⊥ as false, which holds whenever the universe is nonempty.
Formula remove_trivial(const Formula& f);

/// Unites X and Y whenever the top-level conjunction contains both X⊆Y and
/// Y⊆X, substitutes representatives, and inlines a variable X defined by a
/// top-level X = E (E variable-free or a variable) that occurs at most once
/// elsewhere. Disjunctions and negations are left alone.
std::pair<Formula, VarUnionFind> merge_variables(const Formula& f);

/// The full pre-solver pass: expression simplification, trivial-constraint
/// removal, and variable merging, repeated until nothing changes.
Formula simplify_formula(const Formula& f);

}  // namespace setpat
