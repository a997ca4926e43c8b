#include "setpat/lang/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "setpat/lang/typecheck.hpp"
#include "setpat/simplify.hpp"

namespace setpat::lang {

const char* to_string(Safety s) {
    switch (s) {
    case Safety::Safe:
        return "Safe";
    case Safety::Unsafe:
        return "Unsafe";
    case Safety::Unknown:
        return "Unknown";
    }
    return "Unknown";
}

bool AnalysisReport::all_safe() const {
    return std::all_of(definitions.begin(), definitions.end(), [](const auto& d) { return d.safety == Safety::Safe; });
}

bool AnalysisReport::any_unsafe() const {
    return std::any_of(definitions.begin(), definitions.end(), [](const auto& d) { return d.safety == Safety::Unsafe; });
}

bool AnalysisReport::any_unknown() const {
    return std::any_of(definitions.begin(), definitions.end(), [](const auto& d) { return d.safety == Safety::Unknown; });
}

Signature program_signature(const DataEnv& data) {
    Signature sig;
    for (const auto& d : data.decls()) {
        for (const auto& k : d.ctors) {
            sig.add({k.name, k.args.size()});
        }
    }
    sig.add({"opaque", 0});
    return sig;
}

namespace {

struct Annotated {
    AnnTypePtr type;
    Formula constraint;
};

Formula guard(const Formula& cp, Formula c) {
    if (c.is_true_const()) {
        return c;
    }
    return cp.is_true_const() ? c : Formula::implies(cp, std::move(c));
}

std::set<int> tags_of(const Formula& f) {
    std::set<int> out;
    for (const auto& a : collect_atoms(f)) {
        if (a.tag >= 0) {
            out.insert(a.tag);
        }
    }
    return out;
}

class Analyzer {
  public:
    Analyzer(const DataEnv& data, const SolverConfig& cfg) : data_(data), cfg_(cfg), sig_(program_signature(data)) {}

    AnalysisReport run(const TermPtr& t) {
        analyze(t, Formula::truth());
        std::stable_sort(report_.definitions.begin(), report_.definitions.end(),
                         [](const auto& a, const auto& b) { return a.span < b.span; });
        report_.signature = sig_;
        return std::move(report_);
    }

  private:
    AnnTypePtr instantiate(const AnnTypePtr& t, const std::map<std::string, SetExpr>& sets,
                           const std::unordered_map<int, UTypePtr>& types) {
        auto lookup = [&](const std::string& v) -> std::optional<SetExpr> {
            auto it = sets.find(v);
            return it == sets.end() ? std::nullopt : std::optional<SetExpr>(it->second);
        };
        const SetExpr ann = substitute(t->ann, lookup);
        switch (t->kind) {
        case AnnKind::TVar: {
            auto it = types.find(t->var);
            if (it == types.end()) {
                return AnnType::tvar(t->var, ann);
            }
            return with_top(freshen(it->second, data_, names_), ann);
        }
        case AnnKind::Data:
            return AnnType::data(t->name, t->opaque, ann);
        case AnnKind::Arrow:
            return AnnType::arrow(instantiate(t->from, sets, types), instantiate(t->to, sets, types), ann);
        }
        return t;
    }

    const AnnScheme& lookup(const std::string& x, Span where) const {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
            if (it->first == x) {
                return it->second;
            }
        }
        throw TypeError("unbound variable '" + x + "'", where);
    }

    std::set<std::string> env_vars() const {
        std::set<std::string> out;
        for (const auto& [x, s] : env_) {
            std::vector<std::string> vs;
            collect_set_vars(s.body, vs);
            collect_set_vars(s.constraint, vs);
            for (const auto& v : vs) {
                if (std::find(s.set_vars.begin(), s.set_vars.end(), v) == s.set_vars.end()) {
                    out.insert(v);
                }
            }
        }
        return out;
    }

    static AnnScheme mono(AnnTypePtr t) {
        AnnScheme s;
        s.body = std::move(t);
        return s;
    }

    Annotated analyze(const TermPtr& t, const Formula& cp) {
        switch (t->kind) {
        case TermKind::Var:
            return analyze_var(t, cp);
        case TermKind::Lit:
            return {AnnType::data(t->data, true, SetExpr::top()), Formula::truth()};
        case TermKind::Lam: {
            AnnTypePtr param = freshen(t->type->from, data_, names_);
            env_.emplace_back(t->name, mono(param));
            Annotated body = analyze(t->body(), cp);
            env_.pop_back();
            return {AnnType::arrow(param, body.type, SetExpr::top()), body.constraint};
        }
        case TermKind::App: {
            Annotated fn = analyze(t->fn(), cp);
            Annotated arg = analyze(t->arg(), cp);
            if (fn.type->kind != AnnKind::Arrow) {
                throw TypeError("applying a non-function", t->span);
            }
            Formula c = Formula::conj({fn.constraint, arg.constraint, guard(cp, equate(fn.type->from, arg.type))});
            return {fn.type->to, c};
        }
        case TermKind::Ctor: {
            std::vector<SetExpr> anns;
            std::vector<Formula> cs;
            for (const auto& k : t->kids) {
                Annotated a = analyze(k, cp);
                anns.push_back(a.type->opaque ? SetExpr::top() : a.type->ann);
                cs.push_back(a.constraint);
            }
            return {AnnType::data(t->data, false, SetExpr::app(t->name, std::move(anns))), Formula::conj(cs)};
        }
        case TermKind::Match:
            return analyze_match(t, cp);
        case TermKind::Let:
            return analyze_let(t, cp);
        }
        throw std::logic_error("unknown term kind");
    }

    Annotated analyze_var(const TermPtr& t, const Formula& cp) {
        const AnnScheme& s = lookup(t->name, t->span);
        if (s.set_vars.empty() && s.type_vars.empty()) {
            return {s.body, guard(cp, s.constraint)};
        }
        std::map<std::string, SetExpr> sets;
        for (const auto& v : s.set_vars) {
            sets.emplace(v, SetExpr::var(names_.next()));
        }
        std::unordered_map<int, UTypePtr> types;
        for (const auto& [x, ty] : t->inst) {
            types.emplace(x, ty);
        }
        AnnTypePtr ty = instantiate(s.body, sets, types);
        Formula c = substitute(s.constraint, [&](const std::string& v) -> std::optional<SetExpr> {
            auto it = sets.find(v);
            return it == sets.end() ? std::nullopt : std::optional<SetExpr>(it->second);
        });
        return {ty, guard(cp, c)};
    }

    Annotated analyze_match(const TermPtr& t, const Formula& cp) {
        match_spans_[t->match_id] = t->span;
        Annotated dsc = analyze(t->discriminee(), cp);
        const SetExpr e = dsc.type->ann;
        AnnTypePtr result = freshen(t->type, data_, names_);
        std::vector<Formula> parts{dsc.constraint};
        std::vector<Formula> res;
        for (std::size_t i = 0; i < t->branch_count(); ++i) {
            const Pattern& p = t->patterns[i];
            const SetExpr covered = not_yet_covered(t->patterns, i);
            const SetExpr reach = SetExpr::inter(SetExpr::inter(e, pattern_set(p)), covered);
            const Formula ci = Formula::not_subset(reach, SetExpr::bot());

            AnnBindings binds;
            bind_pattern(p, with_top(dsc.type, SetExpr::inter(e, covered)), data_, names_, binds);
            const std::size_t mark = env_.size();
            for (auto& [x, ty] : binds) {
                env_.emplace_back(x, mono(ty));
            }
            Annotated branch = analyze(t->branch(i), Formula::conj(ci, cp));
            env_.resize(mark);
            parts.push_back(branch.constraint);

            // the inner annotations of function-typed results are tied to
            // the result type as well
            Formula flows = Formula::conj(Formula::atom(branch.type->ann, result->ann),
                                          equate(with_top(result, branch.type->ann), branch.type));
            res.push_back(Formula::implies(ci, flows));
        }
        parts.push_back(Formula::conj(res));
        if (!is_exhaustive(t->patterns, t->discriminee()->type, data_)) {
            SetExpr all = pattern_set(t->patterns[0]);
            for (std::size_t i = 1; i < t->branch_count(); ++i) {
                all = SetExpr::union_of(all, pattern_set(t->patterns[i]));
            }
            parts.push_back(guard(cp, Formula::atom(e, all, t->match_id)));
        }
        return {result, Formula::conj(parts)};
    }

    Annotated analyze_let(const TermPtr& t, const Formula& cp) {
        const TermPtr& def = t->kids[0];
        AnnTypePtr self = freshen(def->type, data_, names_);
        env_.emplace_back(t->name, mono(self));
        Annotated d = analyze(def, cp);
        env_.pop_back();

        const Formula own = Formula::conj(equate(self, d.type), d.constraint);
        check(t, Formula::conj(cp, own));

        std::vector<std::string> vs;
        collect_set_vars(d.type, vs);
        collect_set_vars(self, vs);
        collect_set_vars(own, vs);
        std::set<std::string> fixed = env_vars();
        for (const auto& v : free_set_vars(cp)) {
            fixed.insert(v);
        }
        AnnScheme scheme;
        scheme.type_vars = t->generalized;
        for (const auto& v : vs) {
            if (!fixed.contains(v) && std::find(scheme.set_vars.begin(), scheme.set_vars.end(), v) == scheme.set_vars.end()) {
                scheme.set_vars.push_back(v);
            }
        }
        // copied at every use, so keep it small; variable merging would have
        // to be mirrored in the body type and is left to the solver
        scheme.constraint = remove_trivial(simplify_exprs(own));
        scheme.body = d.type;

        env_.emplace_back(t->name, std::move(scheme));
        Annotated body = analyze(t->body(), cp);
        env_.pop_back();
        return body;
    }

    Verdict run_solver(const Formula& f, DefinitionReport& rep) {
        ++report_.solver_calls;
        rep.solver_called = true;
        try {
            SolveOutcome out = solve(f, sig_, cfg_);
            if (out.trace.backend_called) {
                ++report_.backend_calls;
            }
            if (rep.smtlib.empty()) {
                rep.smtlib = out.trace.smtlib;
            }
            return out.verdict;
        } catch (const std::exception& e) {
            return Verdict::unknown(UnknownReason::BackendError, e.what());
        }
    }

    void check(const TermPtr& t, const Formula& f) {
        DefinitionReport rep;
        rep.name = t->name;
        rep.span = t->span;
        rep.constraint = f;

        const Formula reduced = simplify_formula(f);
        const std::set<int> tags = tags_of(reduced);
        if (tags.empty()) {
            ++report_.elided;
            rep.safety = Safety::Safe;
            rep.verdict = Verdict::sat();
            rep.detail = "no safety constraints";
            report_.definitions.push_back(std::move(rep));
            return;
        }

        rep.verdict = run_solver(f, rep);
        switch (rep.verdict.kind) {
        case VerdictKind::Sat:
            rep.safety = Safety::Safe;
            break;
        case VerdictKind::Unknown:
            rep.safety = Safety::Unknown;
            rep.detail = std::string(to_string(rep.verdict.reason)) +
                         (rep.verdict.detail.empty() ? "" : ": " + rep.verdict.detail);
            break;
        case VerdictKind::Unsat:
            rep.safety = Safety::Unsafe;
            blame(f, tags, rep);
            break;
        }
        report_.definitions.push_back(std::move(rep));
    }

    // A match participates when dropping its safety constraints alone makes
    // the check satisfiable.
    void blame(const Formula& f, const std::set<int>& tags, DefinitionReport& rep) {
        std::set<Span> spans;
        for (int k : tags) {
            Formula relaxed = map_atoms(f, [&](const Atom& a) { return a.tag == k ? Formula::truth() : Formula::atom(a); });
            if (run_solver(relaxed, rep).is_sat()) {
                spans.insert(match_spans_.at(k));
            }
        }
        if (spans.empty()) {
            for (int k : tags) {
                spans.insert(match_spans_.at(k));
            }
            rep.detail = "conflict involves all listed matches together";
        }
        rep.offending.assign(spans.begin(), spans.end());
    }

    const DataEnv& data_;
    const SolverConfig& cfg_;
    Signature sig_;
    FreshNames names_{"V"};
    std::vector<std::pair<std::string, AnnScheme>> env_;
    std::map<int, Span> match_spans_;
    AnalysisReport report_;
};

}  // namespace

AnalysisReport analyze_program(Program& program, const SolverConfig& cfg) {
    typecheck(program);
    Analyzer a(program.data, cfg);
    return a.run(program.term);
}

}  // namespace setpat::lang
