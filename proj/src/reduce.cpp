#include "setpat/reduce.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "setpat/simplify.hpp"

namespace setpat {

namespace {

// ---------------------------------------------------------------------------
// Ground emptiness
// ---------------------------------------------------------------------------

struct GiveUp {};

constexpr std::size_t kMaxCubes = 4096;
constexpr std::size_t kMaxSplits = 1u << 14;

struct Lit {
    bool positive;
    SetExpr app;
};
using Cube = std::vector<Lit>;

std::vector<Cube> dnf(const SetExpr& e, bool negated) {
    auto product = [](const std::vector<Cube>& a, const std::vector<Cube>& b) {
        if (a.size() * b.size() > kMaxCubes) {
            throw GiveUp{};
        }
        std::vector<Cube> out;
        for (const auto& x : a) {
            for (const auto& y : b) {
                Cube c = x;
                c.insert(c.end(), y.begin(), y.end());
                out.push_back(std::move(c));
            }
        }
        return out;
    };
    auto sum = [](std::vector<Cube> a, const std::vector<Cube>& b) {
        a.insert(a.end(), b.begin(), b.end());
        if (a.size() > kMaxCubes) {
            throw GiveUp{};
        }
        return a;
    };
    switch (e.kind()) {
    case ExprKind::Top:
        return negated ? std::vector<Cube>{} : std::vector<Cube>{Cube{}};
    case ExprKind::Bot:
        return negated ? std::vector<Cube>{Cube{}} : std::vector<Cube>{};
    case ExprKind::Union:
        return negated ? product(dnf(e.arg(0), true), dnf(e.arg(1), true))
                       : sum(dnf(e.arg(0), false), dnf(e.arg(1), false));
    case ExprKind::Inter:
        return negated ? sum(dnf(e.arg(0), true), dnf(e.arg(1), true))
                       : product(dnf(e.arg(0), false), dnf(e.arg(1), false));
    case ExprKind::Neg:
        return dnf(e.arg(0), !negated);
    case ExprKind::App:
        return {Cube{Lit{!negated, e}}};
    default:
        break;
    }
    throw std::invalid_argument("ground_nonempty on a non-ground expression");
}

SetExpr meet(const std::vector<SetExpr>& pos, const std::vector<SetExpr>& neg) {
    SetExpr acc = SetExpr::top();
    for (const auto& p : pos) {
        acc = acc.is_top() ? p : SetExpr::inter(acc, p);
    }
    for (const auto& n : neg) {
        acc = acc.is_top() ? SetExpr::neg(n) : SetExpr::inter(acc, SetExpr::neg(n));
    }
    return acc;
}

bool nonempty(const SetExpr& e, const Signature& sig, std::size_t& budget);

// Terms headed by `k` satisfying every literal of the cube that mentions k.
bool head_nonempty(const FuncSym& k, const Cube& cube, const Signature& sig, std::size_t& budget) {
    std::vector<const SetExpr*> pos, neg;
    for (const auto& l : cube) {
        if (l.app.name() != k.name) {
            continue;
        }
        (l.positive ? pos : neg).push_back(&l.app);
    }
    if (k.arity == 0) {
        return neg.empty();
    }
    if (pos.empty() && neg.empty()) {
        return true;  // K(⊤, ...) is inhabited whenever the universe is
    }
    // a tuple avoids K(A) when one coordinate avoids the matching A_i; try
    // every assignment of negative literals to coordinates
    std::vector<std::size_t> choice(neg.size(), 0);
    while (true) {
        if (budget-- == 0) {
            throw GiveUp{};
        }
        bool ok = true;
        for (std::size_t i = 0; i < k.arity && ok; ++i) {
            std::vector<SetExpr> ps, ns;
            for (const auto* p : pos) {
                ps.push_back(p->arg(i));
            }
            for (std::size_t j = 0; j < neg.size(); ++j) {
                if (choice[j] == i) {
                    ns.push_back(neg[j]->arg(i));
                }
            }
            ok = nonempty(meet(ps, ns), sig, budget);
        }
        if (ok) {
            return true;
        }
        std::size_t j = 0;
        while (j < choice.size() && ++choice[j] == k.arity) {
            choice[j++] = 0;
        }
        if (j == choice.size()) {
            return false;
        }
    }
}

bool cube_nonempty(const Cube& cube, const Signature& sig, std::size_t& budget) {
    std::optional<std::string> head;
    for (const auto& l : cube) {
        if (l.positive) {
            if (head && *head != l.app.name()) {
                return false;
            }
            head = l.app.name();
        }
    }
    for (const auto& k : sig.symbols()) {
        if ((!head || *head == k.name) && head_nonempty(k, cube, sig, budget)) {
            return true;
        }
    }
    return false;
}

bool nonempty(const SetExpr& e, const Signature& sig, std::size_t& budget) {
    if (!sig.has_ground_term()) {
        return false;
    }
    for (const auto& c : dnf(e, false)) {
        if (cube_nonempty(c, sig, budget)) {
            return true;
        }
    }
    return false;
}

bool is_ground(const SetExpr& e) {
    if (e.kind() == ExprKind::Var || e.kind() == ExprKind::Proj) {
        return false;
    }
    return std::all_of(e.args().begin(), e.args().end(), [](const SetExpr& a) { return is_ground(a); });
}

// ---------------------------------------------------------------------------
// Variable elimination helpers
// ---------------------------------------------------------------------------

enum : unsigned { kUp = 1, kDown = 2 };

// kUp: growing the variable can only help the formula.
void expr_polarity(const SetExpr& e, bool up, std::map<std::string, unsigned>& out) {
    switch (e.kind()) {
    case ExprKind::Var:
        out[e.name()] |= up ? kUp : kDown;
        return;
    case ExprKind::Neg:
        expr_polarity(e.arg(0), !up, out);
        return;
    default:
        for (const auto& a : e.args()) {
            expr_polarity(a, up, out);
        }
    }
}

void formula_polarity(const Formula& f, bool positive, std::map<std::string, unsigned>& out) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        expr_polarity(f.as_atom().lhs, !positive, out);
        expr_polarity(f.as_atom().rhs, positive, out);
        return;
    case FormulaKind::Not:
        formula_polarity(f.child(0), !positive, out);
        return;
    default:
        for (const auto& c : f.children()) {
            formula_polarity(c, positive, out);
        }
    }
}

void count_vars(const SetExpr& e, std::map<std::string, std::size_t>& out) {
    if (e.kind() == ExprKind::Var) {
        ++out[e.name()];
    }
    for (const auto& a : e.args()) {
        count_vars(a, out);
    }
}

void count_vars(const Formula& f, std::map<std::string, std::size_t>& out) {
    if (f.kind() == FormulaKind::Atom) {
        count_vars(f.as_atom().lhs, out);
        count_vars(f.as_atom().rhs, out);
        return;
    }
    for (const auto& c : f.children()) {
        count_vars(c, out);
    }
}

bool mentions(const SetExpr& e, const std::string& x) {
    if (e.kind() == ExprKind::Var) {
        return e.name() == x;
    }
    return std::any_of(e.args().begin(), e.args().end(), [&](const SetExpr& a) { return mentions(a, x); });
}

bool mentions(const Formula& f, const std::string& x) {
    if (f.kind() == FormulaKind::Atom) {
        return mentions(f.as_atom().lhs, x) || mentions(f.as_atom().rhs, x);
    }
    return std::any_of(f.children().begin(), f.children().end(), [&](const Formula& c) { return mentions(c, x); });
}

std::vector<Formula> conjuncts(const Formula& f) {
    if (f.kind() == FormulaKind::And) {
        return {f.children().begin(), f.children().end()};
    }
    return {f};
}

std::vector<Formula> disjuncts(const Formula& f) {
    if (f.kind() == FormulaKind::Or) {
        return {f.children().begin(), f.children().end()};
    }
    return {f};
}

struct Definition {
    std::string var;
    SetExpr value;
};

// X = E among the atoms of a conjunction, with X not in E.
std::optional<Definition> find_equation(const std::vector<Formula>& parts,
                                        const std::function<bool(const std::string&)>& allowed) {
    std::vector<Atom> atoms;
    for (const auto& p : parts) {
        if (p.kind() == FormulaKind::Atom) {
            atoms.push_back(p.as_atom());
        }
    }
    for (const auto& a : atoms) {
        if (a.lhs.is_var() && allowed(a.lhs.name()) && !mentions(a.rhs, a.lhs.name())) {
            const Atom back{a.rhs, a.lhs};
            if (std::find(atoms.begin(), atoms.end(), back) != atoms.end()) {
                return Definition{a.lhs.name(), a.rhs};
            }
        }
    }
    return std::nullopt;
}

Formula substitute_var(const Formula& f, const Definition& d) {
    return substitute(f, [&](const std::string& v) -> std::optional<SetExpr> {
        return v == d.var ? std::optional<SetExpr>(d.value) : std::nullopt;
    });
}

std::optional<Formula> top_level_definition(const Formula& f) {
    const auto parts = conjuncts(f);
    for (const auto& p : parts) {
        if (p.kind() != FormulaKind::Atom) {
            continue;
        }
        const Atom& a = p.as_atom();
        if (a.lhs.is_top() && a.rhs.is_var()) {
            return substitute_var(f, {a.rhs.name(), SetExpr::top()});
        }
        if (a.lhs.is_var() && a.rhs.is_bot()) {
            return substitute_var(f, {a.lhs.name(), SetExpr::bot()});
        }
    }
    if (auto d = find_equation(parts, [](const std::string&) { return true; })) {
        return substitute_var(f, *d);
    }
    return std::nullopt;
}

std::optional<Formula> monotone_variables(const Formula& f) {
    std::map<std::string, unsigned> pol;
    formula_polarity(f, true, pol);
    std::map<std::string, SetExpr> fixed;
    for (const auto& [v, mask] : pol) {
        if (mask == kUp) {
            fixed.emplace(v, SetExpr::top());
        } else if (mask == kDown) {
            fixed.emplace(v, SetExpr::bot());
        }
    }
    if (fixed.empty()) {
        return std::nullopt;
    }
    return substitute(f, [&](const std::string& v) -> std::optional<SetExpr> {
        auto it = fixed.find(v);
        return it == fixed.end() ? std::nullopt : std::optional<SetExpr>(it->second);
    });
}

// Rewrites the first positive conjunction that owns every occurrence of one
// of its defined variables.
std::optional<Formula> local_definition(const Formula& f, bool positive,
                                        const std::map<std::string, std::size_t>& total) {
    if (f.kind() == FormulaKind::Atom) {
        return std::nullopt;
    }
    if (f.kind() == FormulaKind::And && positive) {
        std::map<std::string, std::size_t> here;
        count_vars(f, here);
        const auto parts = conjuncts(f);
        auto owned = [&](const std::string& v) { return here.at(v) == total.at(v); };
        if (auto d = find_equation(parts, owned)) {
            return substitute_var(f, *d);
        }
    }
    const bool child_positive = f.kind() == FormulaKind::Not ? !positive : positive;
    std::vector<Formula> kids(f.children().begin(), f.children().end());
    for (auto& k : kids) {
        if (auto r = local_definition(k, child_positive, total)) {
            k = *r;
            switch (f.kind()) {
            case FormulaKind::And:
                return Formula::conj(kids);
            case FormulaKind::Or:
                return Formula::disj(kids);
            case FormulaKind::Not:
                return Formula::negate(kids[0]);
            default:
                break;
            }
        }
    }
    return std::nullopt;
}

std::optional<Formula> guarded_definition(const Formula& f) {
    const auto parts = conjuncts(f);
    for (std::size_t c = 0; c < parts.size(); ++c) {
        if (parts[c].kind() != FormulaKind::Or) {
            continue;
        }
        const auto ds = disjuncts(parts[c]);
        for (std::size_t m = 0; m < ds.size(); ++m) {
            std::vector<Formula> guard;
            for (std::size_t o = 0; o < ds.size(); ++o) {
                if (o != m) {
                    guard.push_back(ds[o]);
                }
            }
            auto allowed = [&](const std::string& x) {
                if (std::any_of(guard.begin(), guard.end(), [&](const Formula& g) { return mentions(g, x); })) {
                    return false;
                }
                for (std::size_t o = 0; o < parts.size(); ++o) {
                    if (o == c || !mentions(parts[o], x)) {
                        continue;
                    }
                    const auto other = disjuncts(parts[o]);
                    for (const auto& g : guard) {
                        if (std::find(other.begin(), other.end(), g) == other.end()) {
                            return false;
                        }
                    }
                }
                return true;
            };
            if (auto d = find_equation(conjuncts(ds[m]), allowed)) {
                return substitute_var(f, *d);
            }
        }
    }
    return std::nullopt;
}

void operands(const SetExpr& e, ExprKind op, std::vector<SetExpr>& out) {
    if (e.kind() == op) {
        operands(e.arg(0), op, out);
        operands(e.arg(1), op, out);
    } else {
        out.push_back(e);
    }
}

std::optional<SetExpr> fold(const std::vector<SetExpr>& xs, bool as_union) {
    std::optional<SetExpr> acc;
    for (const auto& x : xs) {
        acc = acc ? (as_union ? SetExpr::union_of(*acc, x) : SetExpr::inter(*acc, x)) : x;
    }
    return acc;
}

constexpr std::size_t kMaxResolvents = 16;

// X ∩ A ⊆ R and L ⊆ X ∪ B bound X from above by ¬A ∪ R and from below by
// L ∩ ¬B. When a variable only occurs once in such top-level atoms, some X
// exists iff every lower bound is below every upper bound.
std::optional<Formula> bounds_elimination(const Formula& f, const std::map<std::string, std::size_t>& total) {
    const auto parts = conjuncts(f);
    for (const auto& [x, count] : total) {
        std::vector<SetExpr> lower, upper;
        std::vector<bool> used(parts.size(), false);
        std::size_t seen = 0;
        bool ok = true;
        for (std::size_t i = 0; i < parts.size() && ok; ++i) {
            if (!mentions(parts[i], x)) {
                continue;
            }
            std::map<std::string, std::size_t> here;
            count_vars(parts[i], here);
            if (parts[i].kind() != FormulaKind::Atom || here[x] != 1) {
                ok = false;
                break;
            }
            const Atom& a = parts[i].as_atom();
            const SetExpr var = SetExpr::var(x);
            std::vector<SetExpr> ops;
            if (mentions(a.lhs, x)) {
                operands(a.lhs, ExprKind::Inter, ops);
                auto it = std::find(ops.begin(), ops.end(), var);
                if (it == ops.end()) {
                    ok = false;
                    break;
                }
                ops.erase(it);
                auto rest = fold(ops, false);
                upper.push_back(rest ? SetExpr::union_of(SetExpr::neg(*rest), a.rhs) : a.rhs);
            } else {
                operands(a.rhs, ExprKind::Union, ops);
                auto it = std::find(ops.begin(), ops.end(), var);
                if (it == ops.end()) {
                    ok = false;
                    break;
                }
                ops.erase(it);
                auto rest = fold(ops, true);
                lower.push_back(rest ? SetExpr::inter(a.lhs, SetExpr::neg(*rest)) : a.lhs);
            }
            used[i] = true;
            ++seen;
        }
        if (!ok || seen != count || lower.empty() || upper.empty() ||
            lower.size() * upper.size() > kMaxResolvents) {
            continue;
        }
        std::vector<Formula> out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (!used[i]) {
                out.push_back(parts[i]);
            }
        }
        for (const auto& l : lower) {
            for (const auto& u : upper) {
                out.push_back(Formula::atom(l, u));
            }
        }
        return Formula::conj(out);
    }
    return std::nullopt;
}

}  // namespace

std::optional<bool> ground_nonempty(const SetExpr& e, const Signature& sig) {
    try {
        std::size_t budget = kMaxSplits;
        return nonempty(e, sig, budget);
    } catch (const GiveUp&) {
        return std::nullopt;
    }
}

Formula decide_ground(const Formula& f, const Signature& sig) {
    Formula g = map_atoms(f, [&](const Atom& a) {
        if (!is_ground(a.lhs) || !is_ground(a.rhs)) {
            return Formula::atom(a);
        }
        auto ne = ground_nonempty(SetExpr::inter(a.lhs, SetExpr::neg(a.rhs)), sig);
        if (!ne) {
            return Formula::atom(a);
        }
        return *ne ? Formula::falsity() : Formula::truth();
    });
    return remove_trivial(g);
}

Formula eliminate_variables(const Formula& f) {
    if (auto r = top_level_definition(f)) {
        return *r;
    }
    if (auto r = monotone_variables(f)) {
        return *r;
    }
    std::map<std::string, std::size_t> total;
    count_vars(f, total);
    if (auto r = local_definition(f, true, total)) {
        return *r;
    }
    if (auto r = guarded_definition(f)) {
        return *r;
    }
    if (auto r = bounds_elimination(f, total)) {
        return *r;
    }
    return f;
}

Formula reduce_formula(const Formula& f, const Signature& sig) {
    Formula cur = simplify_formula(f);
    while (true) {
        Formula next = simplify_formula(eliminate_variables(decide_ground(cur, sig)));
        if (next == cur) {
            return cur;
        }
        cur = next;
    }
}

}  // namespace setpat
