#pragma once

// Translation of set-constraint literals into monadic first-order logic: one
// unary predicate P_E per subexpression E, defining axioms for each P_E, and
// one goal per literal.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "setpat/expr.hpp"

namespace setpat::monadic {

struct Term {
    std::string name;         // variable name or function symbol
    std::vector<Term> args;   // empty for variables
    bool is_var = true;

    static Term variable(std::string n) { return Term{std::move(n), {}, true}; }
    static Term apply(std::string f, std::vector<Term> args) { return Term{std::move(f), std::move(args), false}; }
    friend bool operator==(const Term&, const Term&) = default;
};

enum class MKind { Pred, ForAll, Exists, And, Or, Not, Implies, Iff, True, False };

struct MFormula {
    MKind kind = MKind::True;
    SetExpr pred = SetExpr::top();  // Pred: the subexpression E of P_E
    Term term;                      // Pred: the argument
    std::vector<std::string> vars;  // ForAll / Exists binders
    std::vector<MFormula> kids;

    static MFormula predicate(SetExpr e, Term t);
    static MFormula forall(std::vector<std::string> vars, MFormula body);
    static MFormula exists(std::vector<std::string> vars, MFormula body);
    static MFormula conj(std::vector<MFormula> parts);
    static MFormula disj(std::vector<MFormula> parts);
    static MFormula negate(MFormula f);
    static MFormula implies(MFormula a, MFormula b);
    static MFormula iff(MFormula a, MFormula b);
    static MFormula truth();
    static MFormula falsity();
};

struct MonadicTheory {
    /// One predicate per distinct subexpression, first-occurrence order.
    std::vector<SetExpr> predicates;
    std::vector<MFormula> axioms;
    std::vector<MFormula> goals;
};

/// The defining axiom for P_E, by the head of E. Throws std::invalid_argument
/// on a projection.
MFormula expr_predicate_axiom(const SetExpr& e, const Signature& sig);

/// Axioms for every distinct subexpression; goals ∀x. P_E1(x) ⇒ P_E2(x) for
/// positive literals and ∃y. P_E1(y) ∧ ¬P_E2(y) for negative ones.
MonadicTheory conjunction_to_monadic(const std::vector<Literal>& literals, const Signature& sig);

/// Arbitrary boolean combinations: literals translate as above and the
/// boolean structure is kept. Conjunctions of literals give one goal per
/// literal; anything else gives a single goal.
MonadicTheory formula_to_monadic(const Formula& f, const Signature& sig);

/// 2^N for N predicates: a satisfiable theory has a model of at most this
/// size. Throws std::overflow_error for N > 62.
std::uint64_t model_bound(std::size_t predicate_count);
std::uint64_t model_bound(const MonadicTheory& theory);

/// Readable prefix notation, one axiom or goal per line.
std::string to_string(const MFormula& f);
std::string to_string(const MonadicTheory& theory);

}  // namespace setpat::monadic
