#include "setpat/simplify.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace setpat {

// ============================================================================
// VarUnionFind
// ============================================================================

const std::string& VarUnionFind::find(const std::string& name) {
    auto it = parent_.find(name);
    if (it == parent_.end()) {
        it = parent_.emplace(name, name).first;
    }
    if (it->second == name) {
        return it->first;
    }
    const std::string root = find(it->second);
    it->second = root;
    return parent_.find(root)->first;
}

bool VarUnionFind::unite(const std::string& a, const std::string& b) {
    const std::string ra = find(a);
    const std::string rb = find(b);
    if (ra == rb) {
        return false;
    }
    if (ra < rb) {
        parent_[rb] = ra;
    } else {
        parent_[ra] = rb;
    }
    return true;
}

std::map<std::string, std::string> VarUnionFind::classes() {
    std::map<std::string, std::string> out;
    std::vector<std::string> names;
    names.reserve(parent_.size());
    for (const auto& [k, _] : parent_) {
        names.push_back(k);
    }
    for (const auto& n : names) {
        out[n] = find(n);
    }
    return out;
}

// ============================================================================
// Expression simplification
// ============================================================================

namespace {

std::optional<SetExpr> simplify_step(const SetExpr& e) {
    switch (e.kind()) {
    case ExprKind::Inter: {
        const SetExpr& a = e.arg(0);
        const SetExpr& b = e.arg(1);
        if (a.is_bot() || b.is_bot()) {
            return SetExpr::bot();
        }
        if (a.is_top()) {
            return b;
        }
        if (b.is_top() || a == b) {
            return a;
        }
        return std::nullopt;
    }
    case ExprKind::Union: {
        const SetExpr& a = e.arg(0);
        const SetExpr& b = e.arg(1);
        if (a.is_top() || b.is_top()) {
            return SetExpr::top();
        }
        if (a.is_bot()) {
            return b;
        }
        if (b.is_bot() || a == b) {
            return a;
        }
        return std::nullopt;
    }
    case ExprKind::Neg: {
        const SetExpr& a = e.arg(0);
        if (a.kind() == ExprKind::Neg) {
            return a.arg(0);
        }
        if (a.is_top()) {
            return SetExpr::bot();
        }
        if (a.is_bot()) {
            return SetExpr::top();
        }
        return std::nullopt;
    }
    case ExprKind::App:
        if (std::any_of(e.args().begin(), e.args().end(), [](const SetExpr& a) { return a.is_bot(); })) {
            return SetExpr::bot();
        }
        return std::nullopt;
    default:
        return std::nullopt;
    }
}

bool is_trivial(const Atom& a) { return a.rhs.is_top() || a.lhs.is_bot() || a.lhs == a.rhs; }

void flatten_into(const Formula& f, FormulaKind kind, std::vector<Formula>& out) {
    if (f.kind() == kind) {
        for (const auto& c : f.children()) {
            flatten_into(c, kind, out);
        }
    } else {
        out.push_back(f);
    }
}

std::vector<Formula> top_conjuncts(const Formula& f) {
    std::vector<Formula> out;
    flatten_into(f, FormulaKind::And, out);
    return out;
}

bool is_var_atom(const Formula& f) {
    return f.kind() == FormulaKind::Atom && f.as_atom().lhs.is_var() && f.as_atom().rhs.is_var();
}

bool is_ground(const SetExpr& e) {
    if (e.is_var()) {
        return false;
    }
    return std::all_of(e.args().begin(), e.args().end(), [](const SetExpr& a) { return is_ground(a); });
}

void count_vars(const SetExpr& e, std::unordered_map<std::string, std::size_t>& counts) {
    if (e.is_var()) {
        ++counts[e.name()];
    }
    for (const auto& a : e.args()) {
        count_vars(a, counts);
    }
}

std::unordered_map<std::string, std::size_t> var_occurrences(const Formula& f) {
    std::unordered_map<std::string, std::size_t> counts;
    // Counts every syntactic occurrence, including repeated atoms.
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.kind() == FormulaKind::Atom) {
            count_vars(g.as_atom().lhs, counts);
            count_vars(g.as_atom().rhs, counts);
            return;
        }
        for (const auto& c : g.children()) {
            walk(c);
        }
    };
    walk(f);
    return counts;
}

/// One inlining of an intermediate variable, if any qualifies.
std::optional<Formula> inline_one(const Formula& f) {
    const auto conjuncts = top_conjuncts(f);
    std::vector<Atom> atoms;
    for (const auto& c : conjuncts) {
        if (c.kind() == FormulaKind::Atom) {
            atoms.push_back(c.as_atom());
        }
    }
    const auto counts = var_occurrences(f);
    for (const auto& a : atoms) {
        if (!a.lhs.is_var() || !is_ground(a.rhs)) {
            continue;
        }
        const Atom mirrored{a.rhs, a.lhs};
        if (std::find(atoms.begin(), atoms.end(), mirrored) == atoms.end()) {
            continue;
        }
        const std::string& x = a.lhs.name();
        if (counts.at(x) > 3) {
            continue;
        }
        const SetExpr def = a.rhs;
        return substitute(f, [&](const std::string& n) -> std::optional<SetExpr> {
            if (n == x) {
                return def;
            }
            return std::nullopt;
        });
    }
    return std::nullopt;
}

}  // namespace

SetExpr simplify_expr(const SetExpr& e) {
    SetExpr cur = e;
    for (;;) {
        SetExpr next = rewrite(cur, simplify_step);
        if (next == cur) {
            return next;
        }
        cur = std::move(next);
    }
}

Formula simplify_exprs(const Formula& f) { return map_exprs(f, simplify_expr); }

// ============================================================================
// Trivial-constraint removal
// ============================================================================

Formula remove_trivial(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        if (f.is_false_const()) {
            return f;
        }
        return is_trivial(f.as_atom()) ? Formula::truth() : f;
    case FormulaKind::Not: {
        Formula inner = remove_trivial(f.child(0));
        if (inner.is_true_const()) {
            return Formula::falsity();
        }
        if (inner.is_false_const()) {
            return Formula::truth();
        }
        if (inner.kind() == FormulaKind::Not) {
            return inner.child(0);
        }
        return Formula::negate(std::move(inner));
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
        const bool is_and = f.kind() == FormulaKind::And;
        std::vector<Formula> kept;
        for (const auto& c : f.children()) {
            Formula r = remove_trivial(c);
            if (is_and ? r.is_true_const() : r.is_false_const()) {
                continue;
            }
            if (is_and ? r.is_false_const() : r.is_true_const()) {
                return r;
            }
            std::vector<Formula> flat;
            flatten_into(r, f.kind(), flat);
            for (auto& g : flat) {
                if (std::find(kept.begin(), kept.end(), g) == kept.end()) {
                    kept.push_back(std::move(g));
                }
            }
        }
        if (kept.empty()) {
            return is_and ? Formula::truth() : Formula::falsity();
        }
        return is_and ? Formula::conj(std::move(kept)) : Formula::disj(std::move(kept));
    }
    }
    return f;
}

// ============================================================================
// Variable merging
// ============================================================================

std::pair<Formula, VarUnionFind> merge_variables(const Formula& f) {
    VarUnionFind uf;
    std::set<std::pair<std::string, std::string>> inclusions;
    for (const auto& c : top_conjuncts(f)) {
        if (is_var_atom(c)) {
            inclusions.emplace(c.as_atom().lhs.name(), c.as_atom().rhs.name());
        }
    }
    bool merged = false;
    for (const auto& [x, y] : inclusions) {
        if (x != y && inclusions.contains({y, x})) {
            merged = uf.unite(x, y) || merged;
        }
    }
    Formula out = f;
    if (merged) {
        out = substitute(f, [&](const std::string& n) -> std::optional<SetExpr> {
            if (!uf.contains(n)) {
                return std::nullopt;
            }
            const std::string& r = uf.find(n);
            if (r == n) {
                return std::nullopt;
            }
            return SetExpr::var(r);
        });
    }
    out = remove_trivial(out);
    while (auto inlined = inline_one(out)) {
        out = remove_trivial(*inlined);
    }
    return {out, std::move(uf)};
}

Formula simplify_formula(const Formula& f) {
    Formula cur = remove_trivial(simplify_exprs(f));
    for (;;) {
        Formula next = remove_trivial(simplify_exprs(merge_variables(cur).first));
        if (next == cur) {
            return next;
        }
        cur = std::move(next);
    }
}

}  // namespace setpat
