#pragma once

// Reduced translation of set constraints to SMT over fixed-width bit vectors
// with uninterpreted functions. Elements of the model's domain are N-bit
// sequences, one bit per base predicate; composite predicates are computed
// from those bits.

#include <cstddef>
#include <string>
#include <vector>

#include "setpat/expr.hpp"
#include "setpat/predicate_index.hpp"

namespace setpat::smt {

/// A bit-vector valued term: a bound variable, a declared constant, or a call
/// of a defined assembler.
struct SeqTerm {
    std::string name;
    std::vector<SeqTerm> args;

    static SeqTerm ref(std::string n) { return SeqTerm{std::move(n), {}}; }
    static SeqTerm call(std::string f, std::vector<SeqTerm> args) { return SeqTerm{std::move(f), std::move(args)}; }
    friend bool operator==(const SeqTerm&, const SeqTerm&) = default;
};

enum class BKind { Lit, Bit, Not, And, Or, Implies, Iff, Call, SeqEq, ForAll, Exists };

struct BoolTerm {
    BKind kind = BKind::Lit;
    bool value = false;               // Lit
    std::size_t position = 0;         // Bit
    std::string name;                 // Call: boolean function or constant
    std::vector<SeqTerm> seqs;        // Bit: [b]; Call: args; SeqEq: [lhs, rhs]
    std::vector<std::string> bound;   // ForAll / Exists
    std::vector<BoolTerm> kids;

    static BoolTerm lit(bool v);
    static BoolTerm bit(SeqTerm seq, std::size_t position);
    static BoolTerm negate(BoolTerm t);
    static BoolTerm conj(std::vector<BoolTerm> parts);
    static BoolTerm disj(std::vector<BoolTerm> parts);
    static BoolTerm implies(BoolTerm a, BoolTerm b);
    static BoolTerm iff(BoolTerm a, BoolTerm b);
    static BoolTerm call(std::string name, std::vector<SeqTerm> args = {});
    static BoolTerm seq_eq(SeqTerm a, SeqTerm b);
    static BoolTerm forall(std::vector<std::string> vars, BoolTerm body);
    static BoolTerm exists(std::vector<std::string> vars, BoolTerm body);

    friend bool operator==(const BoolTerm&, const BoolTerm&) = default;
};

/// P_E(b): ⊤ and ⊥ are literals, bases read their bit of `b`, and ¬ ∩ ∪ map
/// to the boolean connectives. Throws std::logic_error for a base missing
/// from `idx` and std::invalid_argument for a projection.
BoolTerm compile_predicate(const SetExpr& e, const PredicateIndex& idx, const SeqTerm& b);

enum class DeclRole {
    InDomain,       // B^N -> Bool
    SymbolConst,    // a nullary symbol's element
    VarBit,         // f_X : (B^N)^a -> Bool, the X bit of f's result
    Witness,        // existential witness for a failed / negative atom
    Guard,          // ℓ_i: whether atom i holds
};

struct Declaration {
    std::string name;
    DeclRole role = DeclRole::InDomain;
    std::size_t arity = 0;        // number of B^N arguments
    bool returns_seq = false;     // B^N result instead of Bool
    std::size_t symbol = 0;       // SymbolConst / VarBit: index into the signature
    std::size_t position = 0;     // VarBit: bit position of the variable
    std::size_t atom = 0;         // Witness / Guard: index into SmtScript::atoms
};

/// define-fun returning B^N; bits[j] is the value of bit j.
struct Assembler {
    std::string name;
    std::size_t symbol = 0;
    std::vector<std::string> params;
    std::vector<BoolTerm> bits;
};

struct SmtScript {
    std::string logic = "UFBV";
    /// (set-option KEY VALUE) lines emitted before set-logic.
    std::vector<std::pair<std::string, std::string>> options;
    std::size_t width = 0;
    std::vector<SetExpr> bases;
    /// Distinct atoms of the source formula, first-occurrence order.
    std::vector<Atom> atoms;
    std::vector<Declaration> declarations;
    std::vector<Assembler> assemblers;
    std::vector<BoolTerm> assertions;
    bool get_model = false;

    [[nodiscard]] const Declaration* find_declaration(const std::string& name) const;
    [[nodiscard]] const Assembler* find_assembler(const std::string& name) const;
};

struct EncodeOptions {
    std::string logic = "UFBV";
    /// Also require every domain element to be the image of some symbol.
    bool image_axiom = false;
    bool get_model = false;
    /// Emit (set-option :smt.ematching false). The closure axioms otherwise
    /// send z3's pattern-based instantiation into a matching loop; its
    /// model-based instantiation alone is complete over bit-vector domains.
    /// Solvers that do not know the option answer "unsupported", which the
    /// backend skips.
    bool solver_hints = true;
};

/// Translation of a conjunction of literals. Requires idx.size() ≥ 1 and a
/// projection-free input; throws std::invalid_argument otherwise.
SmtScript encode_conjunction(const std::vector<Literal>& literals, const Signature& sig, const PredicateIndex& idx,
                             const EncodeOptions& opts = {});

/// Arbitrary boolean combinations. A pure conjunction of literals delegates
/// to encode_conjunction; otherwise each distinct atom gets a guard ℓ_i with
/// ℓ_i ⇒ (inclusion holds) and ¬ℓ_i ⇒ (a witness violates it), and the
/// formula is asserted over the guards.
SmtScript encode_formula(const Formula& f, const Signature& sig, const PredicateIndex& idx,
                         const EncodeOptions& opts = {});

/// SMT-LIB 2.6 text.
std::string to_smtlib(const SmtScript& script);

}  // namespace setpat::smt
