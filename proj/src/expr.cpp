#include "setpat/expr.hpp"

#include <algorithm>
#include <unordered_set>

namespace setpat {

// ============================================================================
// Signature
// ============================================================================

Signature::Signature(std::vector<FuncSym> symbols) {
    for (auto& s : symbols) {
        add(std::move(s));
    }
}

void Signature::add(FuncSym sym) {
    if (find(sym.name)) {
        throw std::invalid_argument("duplicate function symbol '" + sym.name + "'");
    }
    symbols_.push_back(std::move(sym));
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

bool Signature::has_ground_term() const {
    return std::any_of(symbols_.begin(), symbols_.end(), [](const FuncSym& s) { return s.arity == 0; });
}

// ============================================================================
// SetExpr
// ============================================================================

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

SetExpr SetExpr::make(ExprKind kind, std::string name, std::size_t index, std::vector<SetExpr> args) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    std::size_t h = mix(static_cast<std::size_t>(kind) + 1, std::hash<std::string>{}(name));
    h = mix(h, index);
    std::size_t size = 1;
    for (const auto& a : args) {
        h = mix(h, a.hash());
        size += a.node_count();
    }
    node->name = std::move(name);
    node->index = index;
    node->args = std::move(args);
    node->hash = h;
    node->size = size;
    return SetExpr(std::move(node));
}

SetExpr SetExpr::var(std::string name) { return make(ExprKind::Var, std::move(name), 0, {}); }

SetExpr SetExpr::top() {
    static const SetExpr t = make(ExprKind::Top, "", 0, {});
    return t;
}

SetExpr SetExpr::bot() {
    static const SetExpr b = make(ExprKind::Bot, "", 0, {});
    return b;
}

SetExpr SetExpr::union_of(SetExpr lhs, SetExpr rhs) {
    return make(ExprKind::Union, "", 0, {std::move(lhs), std::move(rhs)});
}

SetExpr SetExpr::inter(SetExpr lhs, SetExpr rhs) {
    return make(ExprKind::Inter, "", 0, {std::move(lhs), std::move(rhs)});
}

SetExpr SetExpr::neg(SetExpr arg) { return make(ExprKind::Neg, "", 0, {std::move(arg)}); }

SetExpr SetExpr::app(std::string symbol, std::vector<SetExpr> args) {
    return make(ExprKind::App, std::move(symbol), 0, std::move(args));
}

SetExpr SetExpr::proj(std::string symbol, std::size_t index, SetExpr arg) {
    return make(ExprKind::Proj, std::move(symbol), index, {std::move(arg)});
}

bool operator==(const SetExpr& a, const SetExpr& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name() || a.proj_index() != b.proj_index() ||
        a.args().size() != b.args().size()) {
        return false;
    }
    return std::equal(a.args().begin(), a.args().end(), b.args().begin());
}

std::strong_ordering operator<=>(const SetExpr& a, const SetExpr& b) {
    if (a.node_ == b.node_) {
        return std::strong_ordering::equal;
    }
    if (auto c = a.kind() <=> b.kind(); c != 0) {
        return c;
    }
    if (auto c = a.name() <=> b.name(); c != 0) {
        return c;
    }
    if (auto c = a.proj_index() <=> b.proj_index(); c != 0) {
        return c;
    }
    if (auto c = a.args().size() <=> b.args().size(); c != 0) {
        return c;
    }
    for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (auto c = a.arg(i) <=> b.arg(i); c != 0) {
            return c;
        }
    }
    return std::strong_ordering::equal;
}

// ============================================================================
// Formula
// ============================================================================

Formula Formula::atom(SetExpr lhs, SetExpr rhs, int tag) {
    auto node = std::make_shared<Node>(Node{FormulaKind::Atom, Atom{std::move(lhs), std::move(rhs), tag}, {}});
    return Formula(std::move(node));
}

Formula Formula::atom(const Atom& a) { return atom(a.lhs, a.rhs, a.tag); }

Formula Formula::truth() { return atom(SetExpr::bot(), SetExpr::top()); }

Formula Formula::falsity() { return atom(SetExpr::top(), SetExpr::bot()); }

Formula Formula::conj(std::vector<Formula> parts) {
    if (parts.empty()) {
        return truth();
    }
    if (parts.size() == 1) {
        return std::move(parts.front());
    }
    auto node = std::make_shared<Node>(Node{FormulaKind::And, Atom{SetExpr::bot(), SetExpr::top()}, std::move(parts)});
    return Formula(std::move(node));
}

Formula Formula::disj(std::vector<Formula> parts) {
    if (parts.empty()) {
        return falsity();
    }
    if (parts.size() == 1) {
        return std::move(parts.front());
    }
    auto node = std::make_shared<Node>(Node{FormulaKind::Or, Atom{SetExpr::bot(), SetExpr::top()}, std::move(parts)});
    return Formula(std::move(node));
}

Formula Formula::negate(Formula f) {
    auto node = std::make_shared<Node>(Node{FormulaKind::Not, Atom{SetExpr::bot(), SetExpr::top()}, {std::move(f)}});
    return Formula(std::move(node));
}

Formula Formula::implies(Formula a, Formula b) { return disj({negate(std::move(a)), std::move(b)}); }

Formula Formula::iff(Formula a, Formula b) { return conj({implies(a, b), implies(b, a)}); }

Formula Formula::equal(SetExpr a, SetExpr b) { return conj({atom(a, b), atom(b, a)}); }

Formula Formula::not_subset(SetExpr lhs, SetExpr rhs) { return negate(atom(std::move(lhs), std::move(rhs))); }

const Atom& Formula::as_atom() const {
    if (kind() != FormulaKind::Atom) {
        throw std::logic_error("formula is not an atom");
    }
    return node_->atom;
}

bool Formula::is_true_const() const {
    return kind() == FormulaKind::Atom && node_->atom.lhs.is_bot() && node_->atom.rhs.is_top();
}

bool Formula::is_false_const() const {
    return kind() == FormulaKind::Atom && node_->atom.lhs.is_top() && node_->atom.rhs.is_bot();
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind()) {
        return false;
    }
    if (a.kind() == FormulaKind::Atom) {
        return a.node_->atom == b.node_->atom;
    }
    return std::equal(a.children().begin(), a.children().end(), b.children().begin(), b.children().end());
}

// ============================================================================
// Traversals
// ============================================================================

void collect_set_vars(const SetExpr& e, std::vector<std::string>& out) {
    if (e.is_var()) {
        if (std::find(out.begin(), out.end(), e.name()) == out.end()) {
            out.push_back(e.name());
        }
        return;
    }
    for (const auto& a : e.args()) {
        collect_set_vars(a, out);
    }
}

void collect_set_vars(const Formula& f, std::vector<std::string>& out) {
    if (f.kind() == FormulaKind::Atom) {
        collect_set_vars(f.as_atom().lhs, out);
        collect_set_vars(f.as_atom().rhs, out);
        return;
    }
    for (const auto& c : f.children()) {
        collect_set_vars(c, out);
    }
}

std::vector<std::string> free_set_vars(const SetExpr& e) {
    std::vector<std::string> out;
    collect_set_vars(e, out);
    return out;
}

std::vector<std::string> free_set_vars(const Formula& f) {
    std::vector<std::string> out;
    collect_set_vars(f, out);
    return out;
}

namespace {

void collect_atoms_into(const Formula& f, std::vector<Atom>& out, std::unordered_set<Atom, AtomHash>& seen) {
    if (f.kind() == FormulaKind::Atom) {
        if (seen.insert(f.as_atom()).second) {
            out.push_back(f.as_atom());
        }
        return;
    }
    for (const auto& c : f.children()) {
        collect_atoms_into(c, out, seen);
    }
}

bool literals_into(const Formula& f, std::vector<Literal>& out) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        out.push_back({f.as_atom(), true});
        return true;
    case FormulaKind::Not:
        if (f.child(0).kind() != FormulaKind::Atom) {
            return false;
        }
        out.push_back({f.child(0).as_atom(), false});
        return true;
    case FormulaKind::And:
        for (const auto& c : f.children()) {
            if (!literals_into(c, out)) {
                return false;
            }
        }
        return true;
    case FormulaKind::Or:
        return false;
    }
    return false;
}

}  // namespace

std::vector<Atom> collect_atoms(const Formula& f) {
    std::vector<Atom> out;
    std::unordered_set<Atom, AtomHash> seen;
    collect_atoms_into(f, out, seen);
    return out;
}

std::optional<std::vector<Literal>> as_literal_conjunction(const Formula& f) {
    std::vector<Literal> out;
    if (!literals_into(f, out)) {
        return std::nullopt;
    }
    return out;
}

bool contains_proj(const SetExpr& e) {
    if (e.kind() == ExprKind::Proj) {
        return true;
    }
    return std::any_of(e.args().begin(), e.args().end(), [](const SetExpr& a) { return contains_proj(a); });
}

bool contains_proj(const Formula& f) {
    if (f.kind() == FormulaKind::Atom) {
        return contains_proj(f.as_atom().lhs) || contains_proj(f.as_atom().rhs);
    }
    return std::any_of(f.children().begin(), f.children().end(), [](const Formula& c) { return contains_proj(c); });
}

SetExpr rewrite(const SetExpr& e, const std::function<std::optional<SetExpr>(const SetExpr&)>& fn) {
    SetExpr rebuilt = e;
    if (!e.args().empty()) {
        std::vector<SetExpr> args;
        args.reserve(e.args().size());
        bool changed = false;
        for (const auto& a : e.args()) {
            args.push_back(rewrite(a, fn));
            changed = changed || !args.back().same_node(a);
        }
        if (changed) {
            switch (e.kind()) {
            case ExprKind::Union:
                rebuilt = SetExpr::union_of(args[0], args[1]);
                break;
            case ExprKind::Inter:
                rebuilt = SetExpr::inter(args[0], args[1]);
                break;
            case ExprKind::Neg:
                rebuilt = SetExpr::neg(args[0]);
                break;
            case ExprKind::App:
                rebuilt = SetExpr::app(e.name(), std::move(args));
                break;
            case ExprKind::Proj:
                rebuilt = SetExpr::proj(e.name(), e.proj_index(), args[0]);
                break;
            default:
                break;
            }
        }
    }
    if (auto r = fn(rebuilt)) {
        return *r;
    }
    return rebuilt;
}

Formula map_atoms(const Formula& f, const std::function<Formula(const Atom&)>& fn) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        return fn(f.as_atom());
    case FormulaKind::Not:
        return Formula::negate(map_atoms(f.child(0), fn));
    case FormulaKind::And:
    case FormulaKind::Or: {
        std::vector<Formula> kids;
        kids.reserve(f.children().size());
        for (const auto& c : f.children()) {
            kids.push_back(map_atoms(c, fn));
        }
        return f.kind() == FormulaKind::And ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    }
    return f;
}

Formula map_exprs(const Formula& f, const std::function<SetExpr(const SetExpr&)>& fn) {
    return map_atoms(f, [&](const Atom& a) { return Formula::atom(fn(a.lhs), fn(a.rhs), a.tag); });
}

SetExpr substitute(const SetExpr& e, const std::function<std::optional<SetExpr>(const std::string&)>& lookup) {
    return rewrite(e, [&](const SetExpr& n) -> std::optional<SetExpr> {
        if (n.is_var()) {
            return lookup(n.name());
        }
        return std::nullopt;
    });
}

Formula substitute(const Formula& f, const std::function<std::optional<SetExpr>(const std::string&)>& lookup) {
    return map_exprs(f, [&](const SetExpr& e) { return substitute(e, lookup); });
}

void check_well_formed(const SetExpr& e, const Signature& sig) {
    if (e.kind() == ExprKind::App || e.kind() == ExprKind::Proj) {
        auto idx = sig.find(e.name());
        if (!idx) {
            throw std::invalid_argument("undeclared function symbol '" + e.name() + "'");
        }
        const auto arity = sig.symbols()[*idx].arity;
        if (e.kind() == ExprKind::App && e.args().size() != arity) {
            throw std::invalid_argument("symbol '" + e.name() + "' has arity " + std::to_string(arity) +
                                        " but is applied to " + std::to_string(e.args().size()) + " arguments");
        }
        if (e.kind() == ExprKind::Proj && (e.proj_index() < 1 || e.proj_index() > arity)) {
            throw std::invalid_argument("projection index " + std::to_string(e.proj_index()) + " out of range for '" +
                                        e.name() + "' of arity " + std::to_string(arity));
        }
    }
    for (const auto& a : e.args()) {
        check_well_formed(a, sig);
    }
}

void check_well_formed(const Formula& f, const Signature& sig) {
    if (f.kind() == FormulaKind::Atom) {
        check_well_formed(f.as_atom().lhs, sig);
        check_well_formed(f.as_atom().rhs, sig);
        return;
    }
    for (const auto& c : f.children()) {
        check_well_formed(c, sig);
    }
}

// ============================================================================
// Printing
// ============================================================================

namespace {

bool is_reserved_word(const std::string& s) {
    static const char* const words[] = {"top",  "bot", "var", "union",  "inter", "neg", "proj", "subset", "and",
                                        "or",   "not", "=>",  "iff",    "true",  "false", "assert", "declare-fun"};
    return std::any_of(std::begin(words), std::end(words), [&](const char* w) { return s == w; });
}

void print_expr(const SetExpr& e, std::string& out) {
    switch (e.kind()) {
    case ExprKind::Var:
        out += "(var " + e.name() + ")";
        return;
    case ExprKind::Top:
        out += "top";
        return;
    case ExprKind::Bot:
        out += "bot";
        return;
    case ExprKind::Union:
    case ExprKind::Inter:
        out += e.kind() == ExprKind::Union ? "(union " : "(inter ";
        print_expr(e.arg(0), out);
        out += ' ';
        print_expr(e.arg(1), out);
        out += ')';
        return;
    case ExprKind::Neg:
        out += "(neg ";
        print_expr(e.arg(0), out);
        out += ')';
        return;
    case ExprKind::App:
        if (e.args().empty() && !is_reserved_word(e.name())) {
            out += e.name();
            return;
        }
        out += '(' + e.name();
        for (const auto& a : e.args()) {
            out += ' ';
            print_expr(a, out);
        }
        out += ')';
        return;
    case ExprKind::Proj:
        out += "(proj " + e.name() + ' ' + std::to_string(e.proj_index()) + ' ';
        print_expr(e.arg(0), out);
        out += ')';
        return;
    }
}

void print_formula(const Formula& f, std::string& out) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        if (f.is_true_const()) {
            out += "true";
        } else if (f.is_false_const()) {
            out += "false";
        } else {
            out += to_string(f.as_atom());
        }
        return;
    case FormulaKind::Not:
        out += "(not ";
        print_formula(f.child(0), out);
        out += ')';
        return;
    case FormulaKind::And:
    case FormulaKind::Or:
        out += f.kind() == FormulaKind::And ? "(and" : "(or";
        for (const auto& c : f.children()) {
            out += ' ';
            print_formula(c, out);
        }
        out += ')';
        return;
    }
}

int precedence(ExprKind k) {
    switch (k) {
    case ExprKind::Union:
        return 1;
    case ExprKind::Inter:
        return 2;
    default:
        return 3;
    }
}

void pretty_expr(const SetExpr& e, std::string& out, int ctx) {
    const bool paren = precedence(e.kind()) < ctx;
    if (paren) {
        out += '(';
    }
    switch (e.kind()) {
    case ExprKind::Var:
        out += e.name();
        break;
    case ExprKind::Top:
        out += "⊤";
        break;
    case ExprKind::Bot:
        out += "⊥";
        break;
    case ExprKind::Union:
        pretty_expr(e.arg(0), out, 1);
        out += " ∪ ";
        pretty_expr(e.arg(1), out, 2);
        break;
    case ExprKind::Inter:
        pretty_expr(e.arg(0), out, 2);
        out += " ∩ ";
        pretty_expr(e.arg(1), out, 3);
        break;
    case ExprKind::Neg:
        out += "¬";
        pretty_expr(e.arg(0), out, 3);
        break;
    case ExprKind::App:
        out += e.name() + '(';
        for (std::size_t i = 0; i < e.args().size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            pretty_expr(e.arg(i), out, 0);
        }
        out += ')';
        break;
    case ExprKind::Proj:
        out += e.name() + "^-" + std::to_string(e.proj_index()) + '(';
        pretty_expr(e.arg(0), out, 0);
        out += ')';
        break;
    }
    if (paren) {
        out += ')';
    }
}

void pretty_formula(const Formula& f, std::string& out, bool nested) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        if (f.is_true_const()) {
            out += "true";
        } else if (f.is_false_const()) {
            out += "false";
        } else {
            out += to_pretty(f.as_atom().lhs) + " ⊆ " + to_pretty(f.as_atom().rhs);
        }
        return;
    case FormulaKind::Not:
        if (f.child(0).kind() == FormulaKind::Atom && !f.child(0).is_true_const() && !f.child(0).is_false_const()) {
            out += to_pretty(f.child(0).as_atom().lhs) + " ⊄ " + to_pretty(f.child(0).as_atom().rhs);
            return;
        }
        out += "¬";
        pretty_formula(f.child(0), out, true);
        return;
    case FormulaKind::And:
    case FormulaKind::Or: {
        if (nested) {
            out += '(';
        }
        const char* sep = f.kind() == FormulaKind::And ? " ∧ " : " ∨ ";
        for (std::size_t i = 0; i < f.children().size(); ++i) {
            if (i > 0) {
                out += sep;
            }
            pretty_formula(f.child(i), out, true);
        }
        if (nested) {
            out += ')';
        }
        return;
    }
    }
}

}  // namespace

std::string to_string(const SetExpr& e) {
    std::string out;
    print_expr(e, out);
    return out;
}

std::string to_string(const Atom& a) { return "(subset " + to_string(a.lhs) + ' ' + to_string(a.rhs) + ')'; }

std::string to_string(const Formula& f) {
    std::string out;
    print_formula(f, out);
    return out;
}

std::string to_pretty(const SetExpr& e) {
    std::string out;
    pretty_expr(e, out, 0);
    return out;
}

std::string to_pretty(const Formula& f) {
    std::string out;
    pretty_formula(f, out, false);
    return out;
}

}  // namespace setpat
