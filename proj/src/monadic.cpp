#include "setpat/monadic.hpp"

#include <stdexcept>
#include <unordered_set>

namespace setpat::monadic {

MFormula MFormula::predicate(SetExpr e, Term t) {
    MFormula f;
    f.kind = MKind::Pred;
    f.pred = std::move(e);
    f.term = std::move(t);
    return f;
}

MFormula MFormula::forall(std::vector<std::string> vars, MFormula body) {
    if (vars.empty()) {
        return body;
    }
    MFormula f;
    f.kind = MKind::ForAll;
    f.vars = std::move(vars);
    f.kids.push_back(std::move(body));
    return f;
}

MFormula MFormula::exists(std::vector<std::string> vars, MFormula body) {
    if (vars.empty()) {
        return body;
    }
    MFormula f;
    f.kind = MKind::Exists;
    f.vars = std::move(vars);
    f.kids.push_back(std::move(body));
    return f;
}

namespace {

MFormula nary(MKind kind, std::vector<MFormula> parts) {
    MFormula f;
    f.kind = kind;
    f.kids = std::move(parts);
    return f;
}

}  // namespace

MFormula MFormula::conj(std::vector<MFormula> parts) {
    if (parts.empty()) {
        return truth();
    }
    if (parts.size() == 1) {
        return std::move(parts.front());
    }
    return nary(MKind::And, std::move(parts));
}

MFormula MFormula::disj(std::vector<MFormula> parts) {
    if (parts.empty()) {
        return falsity();
    }
    if (parts.size() == 1) {
        return std::move(parts.front());
    }
    return nary(MKind::Or, std::move(parts));
}

MFormula MFormula::negate(MFormula f) { return nary(MKind::Not, {std::move(f)}); }

MFormula MFormula::implies(MFormula a, MFormula b) { return nary(MKind::Implies, {std::move(a), std::move(b)}); }

MFormula MFormula::iff(MFormula a, MFormula b) { return nary(MKind::Iff, {std::move(a), std::move(b)}); }

MFormula MFormula::truth() { return nary(MKind::True, {}); }

MFormula MFormula::falsity() { return nary(MKind::False, {}); }

// ============================================================================
// Translation
// ============================================================================

namespace {

std::vector<std::string> bound_names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back("x" + std::to_string(i));
    }
    return out;
}

std::vector<Term> as_terms(const std::vector<std::string>& names) {
    std::vector<Term> out;
    for (const auto& n : names) {
        out.push_back(Term::variable(n));
    }
    return out;
}

MFormula at_x(const SetExpr& e) { return MFormula::predicate(e, Term::variable("x")); }

void collect_subexprs(const SetExpr& e, std::vector<SetExpr>& out, std::unordered_set<SetExpr, SetExprHash>& seen) {
    if (!seen.insert(e).second) {
        return;
    }
    out.push_back(e);
    for (const auto& a : e.args()) {
        collect_subexprs(a, out, seen);
    }
}

MFormula literal_goal(const Atom& a, bool positive) {
    if (positive) {
        return MFormula::forall({"x"}, MFormula::implies(at_x(a.lhs), at_x(a.rhs)));
    }
    const Term y = Term::variable("y");
    return MFormula::exists({"y"}, MFormula::conj({MFormula::predicate(a.lhs, y),
                                                   MFormula::negate(MFormula::predicate(a.rhs, y))}));
}

MFormula structure_goal(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        return literal_goal(f.as_atom(), true);
    case FormulaKind::Not:
        if (f.child(0).kind() == FormulaKind::Atom) {
            return literal_goal(f.child(0).as_atom(), false);
        }
        return MFormula::negate(structure_goal(f.child(0)));
    case FormulaKind::And:
    case FormulaKind::Or: {
        std::vector<MFormula> parts;
        for (const auto& c : f.children()) {
            parts.push_back(structure_goal(c));
        }
        // ¬A ∨ B reads back as A ⇒ B, matching how implications are written.
        if (f.kind() == FormulaKind::Or && parts.size() == 2 && parts[0].kind == MKind::Not) {
            return MFormula::implies(std::move(parts[0].kids[0]), std::move(parts[1]));
        }
        if (f.kind() == FormulaKind::Or && parts.size() == 2 && f.child(0).kind() == FormulaKind::Not &&
            f.child(0).child(0).kind() == FormulaKind::Atom) {
            // ¬(E1 ⊆ E2) ∨ B came from (E1 ⊆ E2) ⇒ B.
            return MFormula::implies(literal_goal(f.child(0).child(0).as_atom(), true), std::move(parts[1]));
        }
        return f.kind() == FormulaKind::And ? MFormula::conj(std::move(parts)) : MFormula::disj(std::move(parts));
    }
    }
    return MFormula::truth();
}

MonadicTheory theory_skeleton(const std::vector<Atom>& atoms, const Signature& sig) {
    MonadicTheory th;
    std::unordered_set<SetExpr, SetExprHash> seen;
    for (const auto& a : atoms) {
        collect_subexprs(a.lhs, th.predicates, seen);
        collect_subexprs(a.rhs, th.predicates, seen);
    }
    for (const auto& e : th.predicates) {
        th.axioms.push_back(expr_predicate_axiom(e, sig));
    }
    return th;
}

}  // namespace

MFormula expr_predicate_axiom(const SetExpr& e, const Signature& sig) {
    switch (e.kind()) {
    case ExprKind::Top:
        return MFormula::forall({"x"}, at_x(e));
    case ExprKind::Bot:
        return MFormula::forall({"x"}, MFormula::negate(at_x(e)));
    case ExprKind::Var:
        return MFormula::truth();
    case ExprKind::Inter:
        return MFormula::forall({"x"}, MFormula::iff(at_x(e), MFormula::conj({at_x(e.arg(0)), at_x(e.arg(1))})));
    case ExprKind::Union:
        return MFormula::forall({"x"}, MFormula::iff(at_x(e), MFormula::disj({at_x(e.arg(0)), at_x(e.arg(1))})));
    case ExprKind::Neg:
        return MFormula::forall({"x"}, MFormula::iff(at_x(e), MFormula::negate(at_x(e.arg(0)))));
    case ExprKind::App: {
        const auto xs = bound_names(e.args().size());
        std::vector<MFormula> args_hold;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            args_hold.push_back(MFormula::predicate(e.arg(i), Term::variable(xs[i])));
        }
        std::vector<MFormula> clauses;
        clauses.push_back(MFormula::forall(
            xs, MFormula::iff(MFormula::predicate(e, Term::apply(e.name(), as_terms(xs))),
                              MFormula::conj(std::move(args_hold)))));
        for (const auto& g : sig.symbols()) {
            if (g.name == e.name()) {
                continue;
            }
            const auto gs = bound_names(g.arity);
            clauses.push_back(MFormula::forall(
                gs, MFormula::iff(MFormula::predicate(e, Term::apply(g.name, as_terms(gs))), MFormula::falsity())));
        }
        return MFormula::conj(std::move(clauses));
    }
    case ExprKind::Proj:
        throw std::invalid_argument("projection " + to_pretty(e) + " has no monadic axiom; eliminate it first");
    }
    return MFormula::truth();
}

MonadicTheory conjunction_to_monadic(const std::vector<Literal>& literals, const Signature& sig) {
    std::vector<Atom> atoms;
    for (const auto& l : literals) {
        atoms.push_back(l.atom);
    }
    MonadicTheory th = theory_skeleton(atoms, sig);
    for (const auto& l : literals) {
        th.goals.push_back(literal_goal(l.atom, l.positive));
    }
    return th;
}

MonadicTheory formula_to_monadic(const Formula& f, const Signature& sig) {
    if (auto lits = as_literal_conjunction(f)) {
        return conjunction_to_monadic(*lits, sig);
    }
    MonadicTheory th = theory_skeleton(collect_atoms(f), sig);
    th.goals.push_back(structure_goal(f));
    return th;
}

std::uint64_t model_bound(std::size_t predicate_count) {
    if (predicate_count > 62) {
        throw std::overflow_error("model bound 2^" + std::to_string(predicate_count) + " does not fit in 63 bits");
    }
    return std::uint64_t{1} << predicate_count;
}

std::uint64_t model_bound(const MonadicTheory& theory) { return model_bound(theory.predicates.size()); }

// ============================================================================
// Printing
// ============================================================================

namespace {

void print_term(const Term& t, std::string& out) {
    if (t.is_var) {
        out += t.name;
        return;
    }
    if (t.args.empty()) {
        out += t.name;
        return;
    }
    out += '(' + t.name;
    for (const auto& a : t.args) {
        out += ' ';
        print_term(a, out);
    }
    out += ')';
}

void print(const MFormula& f, std::string& out) {
    auto list = [&](const char* op) {
        out += '(';
        out += op;
        for (const auto& k : f.kids) {
            out += ' ';
            print(k, out);
        }
        out += ')';
    };
    switch (f.kind) {
    case MKind::Pred:
        out += "(P[" + setpat::to_string(f.pred) + "] ";
        print_term(f.term, out);
        out += ')';
        return;
    case MKind::ForAll:
    case MKind::Exists: {
        out += f.kind == MKind::ForAll ? "(forall (" : "(exists (";
        for (std::size_t i = 0; i < f.vars.size(); ++i) {
            out += (i ? " " : "") + f.vars[i];
        }
        out += ") ";
        print(f.kids[0], out);
        out += ')';
        return;
    }
    case MKind::And:
        list("and");
        return;
    case MKind::Or:
        list("or");
        return;
    case MKind::Not:
        list("not");
        return;
    case MKind::Implies:
        list("=>");
        return;
    case MKind::Iff:
        list("iff");
        return;
    case MKind::True:
        out += "true";
        return;
    case MKind::False:
        out += "false";
        return;
    }
}

}  // namespace

std::string to_string(const MFormula& f) {
    std::string out;
    print(f, out);
    return out;
}

std::string to_string(const MonadicTheory& theory) {
    std::string out;
    out += "; predicates: " + std::to_string(theory.predicates.size()) + "\n";
    for (std::size_t i = 0; i < theory.predicates.size(); ++i) {
        out += ";   P[" + setpat::to_string(theory.predicates[i]) + "]\n";
    }
    for (const auto& a : theory.axioms) {
        if (a.kind == MKind::True) {
            continue;
        }
        out += "(axiom " + to_string(a) + ")\n";
    }
    for (const auto& g : theory.goals) {
        out += "(goal " + to_string(g) + ")\n";
    }
    return out;
}

}  // namespace setpat::monadic
