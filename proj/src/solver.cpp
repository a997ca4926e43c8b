#include "setpat/solver.hpp"

#include <set>
#include <stdexcept>

#include "setpat/predicate_index.hpp"
#include "setpat/reduce.hpp"
#include "setpat/simplify.hpp"
#include "setpat/smt.hpp"

namespace setpat {

namespace {

// With no bases every expression denotes either ∅ or the whole (nonempty)
// universe; true stands for the universe.
bool ground_value(const SetExpr& e) {
    switch (e.kind()) {
    case ExprKind::Top:
        return true;
    case ExprKind::Bot:
        return false;
    case ExprKind::Union:
        return ground_value(e.arg(0)) || ground_value(e.arg(1));
    case ExprKind::Inter:
        return ground_value(e.arg(0)) && ground_value(e.arg(1));
    case ExprKind::Neg:
        return !ground_value(e.arg(0));
    default:
        break;
    }
    throw std::logic_error("ground_value on a formula with bases");
}

bool eval_with(const Formula& f, const std::function<bool(const Atom&)>& atom) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        return atom(f.as_atom());
    case FormulaKind::Not:
        return !eval_with(f.child(0), atom);
    case FormulaKind::And:
        for (const auto& c : f.children()) {
            if (!eval_with(c, atom)) {
                return false;
            }
        }
        return true;
    case FormulaKind::Or:
        for (const auto& c : f.children()) {
            if (eval_with(c, atom)) {
                return true;
            }
        }
        return false;
    }
    return false;
}

Verdict from_bool(bool sat) { return sat ? Verdict::sat() : Verdict::unsat(); }

void mentioned_symbols(const SetExpr& e, std::set<std::string>& out) {
    if (e.kind() == ExprKind::App || e.kind() == ExprKind::Proj) {
        out.insert(e.name());
    }
    for (const auto& a : e.args()) {
        mentioned_symbols(a, out);
    }
}

}  // namespace

Signature reduce_signature(const Formula& f, const Signature& sig) {
    std::set<std::string> used;
    for (const auto& a : collect_atoms(f)) {
        mentioned_symbols(a.lhs, used);
        mentioned_symbols(a.rhs, used);
    }
    Signature out;
    std::vector<FuncSym> constants;
    bool nonconstant = false;
    bool has_constant = false;
    for (const auto& s : sig.symbols()) {
        if (used.contains(s.name)) {
            out.add(s);
            has_constant = has_constant || s.arity == 0;
        } else if (s.arity == 0) {
            constants.push_back(s);
        } else {
            nonconstant = true;
        }
    }
    if (!nonconstant || !sig.has_ground_term()) {
        for (const auto& c : constants) {
            out.add(c);
        }
        return out;
    }
    if (!has_constant) {
        out.add(constants.front());
    }
    std::string name = "other";
    while (sig.find(name)) {
        name += "_";
    }
    out.add({name, 1});
    return out;
}

Formula approximate_projections(const Formula& f) {
    return map_exprs(f, [](const SetExpr& e) {
        return rewrite(e, [](const SetExpr& n) -> std::optional<SetExpr> {
            if (n.kind() == ExprKind::Proj) {
                return SetExpr::top();
            }
            return std::nullopt;
        });
    });
}

namespace {

struct Prepared {
    Formula formula = Formula::truth();
    std::optional<Signature> signature;
    std::optional<PredicateIndex> index;
    std::optional<Verdict> decided;
};

Prepared prepare(const Formula& f, const Signature& sig, const SolverConfig& cfg, SolveTrace& trace) {
    check_well_formed(f, sig);
    Prepared p;

    // Over an empty universe every expression is ∅ and every inclusion holds.
    if (!sig.has_ground_term()) {
        trace.short_circuit = "empty-universe";
        p.formula = f;
        p.decided = from_bool(eval_with(f, [](const Atom&) { return true; }));
        return p;
    }

    // trivial atoms go first so their projections are never eliminated
    Formula g = cfg.simplify ? simplify_formula(f) : f;
    g = cfg.approximate_projections ? approximate_projections(g) : eliminate_projections(g, sig, cfg.projection_rule);
    trace.after_projections = g;
    if (cfg.simplify) {
        g = simplify_formula(g);
    }
    trace.simplified = g;
    if (cfg.simplify && cfg.reduce) {
        g = reduce_formula(g, sig);
        trace.reduced = g;
    }
    p.formula = g;

    if (g.is_true_const() || g.is_false_const()) {
        trace.short_circuit = "constant";
        p.decided = from_bool(g.is_true_const());
        return p;
    }
    p.signature = reduce_signature(g, sig);
    trace.reduced_signature = p.signature;
    p.index = index_base_predicates(g);
    trace.width = p.index->size();
    if (p.index->size() == 0) {
        trace.short_circuit = "no-bases";
        p.decided = from_bool(eval_with(g, [](const Atom& a) { return !ground_value(a.lhs) || ground_value(a.rhs); }));
    }
    return p;
}

std::string emit(const Prepared& p, const SolverConfig& cfg, const SolveTrace& trace) {
    const std::string logic = cfg.logic_all ? "ALL" : "UFBV";
    if (p.decided) {
        // nothing left to encode; keep the file a valid script with the same answer
        return "; decided before encoding (" + trace.short_circuit + ")\n(set-logic " + logic + ")\n(assert " +
               (p.decided->is_sat() ? "true" : "false") + ")\n(check-sat)\n";
    }
    smt::EncodeOptions eo;
    eo.logic = logic;
    eo.image_axiom = cfg.image_axiom;
    eo.get_model = cfg.backend.get_model;
    eo.solver_hints = cfg.solver_hints;
    return smt::to_smtlib(smt::encode_formula(p.formula, *p.signature, *p.index, eo));
}

}  // namespace

std::string smtlib_for(const Formula& f, const Signature& sig, const SolverConfig& cfg) {
    SolveTrace trace;
    return emit(prepare(f, sig, cfg, trace), cfg, trace);
}

SolveOutcome solve(const Formula& f, const Signature& sig, const SolverConfig& cfg) {
    SolveOutcome out;
    auto& trace = out.trace;
    Prepared p = prepare(f, sig, cfg, trace);
    if (p.decided) {
        out.verdict = *p.decided;
        return out;
    }

    if (cfg.mode == SolverMode::Oracle) {
        oracle::Options opts;
        opts.budget = cfg.budget;
        opts.image_axiom = cfg.image_axiom;
        auto r = oracle::solve(p.formula, *p.signature, opts);
        trace.oracle_checks = r.checks;
        out.verdict = std::move(r.verdict);
        return out;
    }

    trace.smtlib = emit(p, cfg, trace);
    trace.backend_called = true;
    out.verdict = run_backend_text(trace.smtlib, cfg.backend);
    return out;
}

}  // namespace setpat
