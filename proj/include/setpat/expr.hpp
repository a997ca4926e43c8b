#pragma once

// Set expressions, inclusion atoms, and boolean constraint formulas over a
// signature of function symbols.

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace setpat {

struct FuncSym {
    std::string name;
    std::size_t arity = 0;

    friend bool operator==(const FuncSym&, const FuncSym&) = default;
};

/// Function symbols in declaration order. The Herbrand universe they generate
/// is nonempty exactly when some symbol is a constant.
class Signature {
  public:
    Signature() = default;
    explicit Signature(std::vector<FuncSym> symbols);

    /// Throws std::invalid_argument on a duplicate name.
    void add(FuncSym sym);

    [[nodiscard]] const std::vector<FuncSym>& symbols() const { return symbols_; }
    [[nodiscard]] std::size_t size() const { return symbols_.size(); }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
    [[nodiscard]] bool has_ground_term() const;

    friend bool operator==(const Signature&, const Signature&) = default;

  private:
    std::vector<FuncSym> symbols_;
};

enum class ExprKind { Var, Top, Bot, Union, Inter, Neg, App, Proj };

/// Immutable, structurally compared set expression. Copies share nodes.
class SetExpr {
  public:
    static SetExpr var(std::string name);
    static SetExpr top();
    static SetExpr bot();
    static SetExpr union_of(SetExpr lhs, SetExpr rhs);
    static SetExpr inter(SetExpr lhs, SetExpr rhs);
    static SetExpr neg(SetExpr arg);
    static SetExpr app(std::string symbol, std::vector<SetExpr> args = {});
    /// The `index`-th projection (1-based) of `symbol` applied to `arg`.
    static SetExpr proj(std::string symbol, std::size_t index, SetExpr arg);

    [[nodiscard]] ExprKind kind() const { return node_->kind; }
    /// Variable name or function symbol name; empty otherwise.
    [[nodiscard]] const std::string& name() const { return node_->name; }
    [[nodiscard]] std::size_t proj_index() const { return node_->index; }
    [[nodiscard]] std::span<const SetExpr> args() const { return node_->args; }
    [[nodiscard]] const SetExpr& arg(std::size_t i) const { return node_->args.at(i); }
    [[nodiscard]] std::size_t hash() const { return node_->hash; }
    [[nodiscard]] std::size_t node_count() const { return node_->size; }

    [[nodiscard]] bool is_var() const { return kind() == ExprKind::Var; }
    [[nodiscard]] bool is_top() const { return kind() == ExprKind::Top; }
    [[nodiscard]] bool is_bot() const { return kind() == ExprKind::Bot; }
    [[nodiscard]] bool is_app() const { return kind() == ExprKind::App; }
    [[nodiscard]] bool is_base() const { return is_var() || is_app(); }

    /// True when the two handles refer to the same node.
    [[nodiscard]] bool same_node(const SetExpr& other) const { return node_ == other.node_; }

    friend bool operator==(const SetExpr& a, const SetExpr& b);
    friend std::strong_ordering operator<=>(const SetExpr& a, const SetExpr& b);

  private:
    struct Node {
        ExprKind kind;
        std::string name;
        std::size_t index = 0;
        std::vector<SetExpr> args;
        std::size_t hash = 0;
        std::size_t size = 1;
    };
    explicit SetExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static SetExpr make(ExprKind kind, std::string name, std::size_t index, std::vector<SetExpr> args);

    std::shared_ptr<const Node> node_;
};

struct SetExprHash {
    std::size_t operator()(const SetExpr& e) const noexcept { return e.hash(); }
};

/// E1 ⊆ E2. `tag` is bookkeeping (for example the source match a safety
/// constraint came from) and does not take part in equality.
struct Atom {
    SetExpr lhs;
    SetExpr rhs;
    int tag = -1;

    friend bool operator==(const Atom& a, const Atom& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
};

struct AtomHash {
    std::size_t operator()(const Atom& a) const noexcept { return a.lhs.hash() * 31u + a.rhs.hash(); }
};

enum class FormulaKind { Atom, And, Or, Not };

/// Boolean combination of inclusion atoms. `true` is ⊥ ⊆ ⊤ and `false` is
/// ⊤ ⊆ ⊥; all other connectives are desugared at construction time.
class Formula {
  public:
    static Formula atom(SetExpr lhs, SetExpr rhs, int tag = -1);
    static Formula atom(const Atom& a);
    static Formula conj(std::vector<Formula> parts);
    static Formula disj(std::vector<Formula> parts);
    static Formula negate(Formula f);
    static Formula truth();
    static Formula falsity();

    // Sugar. None of these introduce new node kinds.
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula equal(SetExpr a, SetExpr b);
    static Formula not_subset(SetExpr lhs, SetExpr rhs);
    static Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{std::move(a), std::move(b)}); }

    [[nodiscard]] FormulaKind kind() const { return node_->kind; }
    [[nodiscard]] const Atom& as_atom() const;
    [[nodiscard]] std::span<const Formula> children() const { return node_->kids; }
    [[nodiscard]] const Formula& child(std::size_t i) const { return node_->kids.at(i); }

    [[nodiscard]] bool is_true_const() const;
    [[nodiscard]] bool is_false_const() const;

    friend bool operator==(const Formula& a, const Formula& b);

  private:
    struct Node {
        FormulaKind kind;
        Atom atom;
        std::vector<Formula> kids;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// A literal of a conjunctive problem: E1 ⊆ E2 or E1 ⊄ E2.
struct Literal {
    Atom atom;
    bool positive = true;
};

// ---------------------------------------------------------------------------
// Traversals and rewriting helpers
// ---------------------------------------------------------------------------

/// Free set variables in first-occurrence order.
std::vector<std::string> free_set_vars(const SetExpr& e);
std::vector<std::string> free_set_vars(const Formula& f);
void collect_set_vars(const SetExpr& e, std::vector<std::string>& out);
void collect_set_vars(const Formula& f, std::vector<std::string>& out);

/// Distinct atoms in first-occurrence (left-to-right) order.
std::vector<Atom> collect_atoms(const Formula& f);

/// When `f` is a conjunction of literals (nested And of atoms and negated
/// atoms), returns the literals in order; otherwise nullopt.
std::optional<std::vector<Literal>> as_literal_conjunction(const Formula& f);

bool contains_proj(const SetExpr& e);
bool contains_proj(const Formula& f);

/// Bottom-up rewrite; `fn` sees nodes whose children were already rewritten
/// and returns nullopt to keep the node.
SetExpr rewrite(const SetExpr& e, const std::function<std::optional<SetExpr>(const SetExpr&)>& fn);

/// Applies `fn` to both sides of every atom.
Formula map_exprs(const Formula& f, const std::function<SetExpr(const SetExpr&)>& fn);

/// Rebuilds `f` with each atom replaced by `fn(atom)`.
Formula map_atoms(const Formula& f, const std::function<Formula(const Atom&)>& fn);

SetExpr substitute(const SetExpr& e, const std::function<std::optional<SetExpr>(const std::string&)>& lookup);
Formula substitute(const Formula& f, const std::function<std::optional<SetExpr>(const std::string&)>& lookup);

/// Checks symbol declarations, arities, and projection indices against `sig`.
/// Throws std::invalid_argument describing the first problem found.
void check_well_formed(const SetExpr& e, const Signature& sig);
void check_well_formed(const Formula& f, const Signature& sig);

// ---------------------------------------------------------------------------
// Printing (constraint-file s-expression syntax)
// ---------------------------------------------------------------------------

std::string to_string(const SetExpr& e);
std::string to_string(const Atom& a);
std::string to_string(const Formula& f);

/// Compact mathematical notation, used in reports and diagnostics.
std::string to_pretty(const SetExpr& e);
std::string to_pretty(const Formula& f);

/// Monotone counter handing out names in a namespace the parsers reject.
class FreshNames {
  public:
    explicit FreshNames(std::string prefix = "$") : prefix_(std::move(prefix)) {}
    std::string next() { return prefix_ + std::to_string(++counter_); }
    [[nodiscard]] std::size_t issued() const { return counter_; }

  private:
    std::string prefix_;
    std::size_t counter_ = 0;
};

}  // namespace setpat

template <>
struct std::hash<setpat::SetExpr> {
    std::size_t operator()(const setpat::SetExpr& e) const noexcept { return e.hash(); }
};
