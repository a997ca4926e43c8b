#include "setpat/smt.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <string_view>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace setpat::smt {

// ============================================================================
// BoolTerm constructors
// ============================================================================

BoolTerm BoolTerm::lit(bool v) {
    BoolTerm t;
    t.kind = BKind::Lit;
    t.value = v;
    return t;
}

BoolTerm BoolTerm::bit(SeqTerm seq, std::size_t position) {
    BoolTerm t;
    t.kind = BKind::Bit;
    t.position = position;
    t.seqs.push_back(std::move(seq));
    return t;
}

BoolTerm BoolTerm::negate(BoolTerm inner) {
    BoolTerm t;
    t.kind = BKind::Not;
    t.kids.push_back(std::move(inner));
    return t;
}

BoolTerm BoolTerm::conj(std::vector<BoolTerm> parts) {
    if (parts.empty()) {
        return lit(true);
    }
    if (parts.size() == 1) {
        return std::move(parts.front());
    }
    BoolTerm t;
    t.kind = BKind::And;
    t.kids = std::move(parts);
    return t;
}

BoolTerm BoolTerm::disj(std::vector<BoolTerm> parts) {
    if (parts.empty()) {
        return lit(false);
    }
    if (parts.size() == 1) {
        return std::move(parts.front());
    }
    BoolTerm t;
    t.kind = BKind::Or;
    t.kids = std::move(parts);
    return t;
}

BoolTerm BoolTerm::implies(BoolTerm a, BoolTerm b) {
    BoolTerm t;
    t.kind = BKind::Implies;
    t.kids.push_back(std::move(a));
    t.kids.push_back(std::move(b));
    return t;
}

BoolTerm BoolTerm::iff(BoolTerm a, BoolTerm b) {
    BoolTerm t;
    t.kind = BKind::Iff;
    t.kids.push_back(std::move(a));
    t.kids.push_back(std::move(b));
    return t;
}

BoolTerm BoolTerm::call(std::string name, std::vector<SeqTerm> args) {
    BoolTerm t;
    t.kind = BKind::Call;
    t.name = std::move(name);
    t.seqs = std::move(args);
    return t;
}

BoolTerm BoolTerm::seq_eq(SeqTerm a, SeqTerm b) {
    BoolTerm t;
    t.kind = BKind::SeqEq;
    t.seqs.push_back(std::move(a));
    t.seqs.push_back(std::move(b));
    return t;
}

BoolTerm BoolTerm::forall(std::vector<std::string> vars, BoolTerm body) {
    if (vars.empty()) {
        return body;
    }
    BoolTerm t;
    t.kind = BKind::ForAll;
    t.bound = std::move(vars);
    t.kids.push_back(std::move(body));
    return t;
}

BoolTerm BoolTerm::exists(std::vector<std::string> vars, BoolTerm body) {
    if (vars.empty()) {
        return body;
    }
    BoolTerm t;
    t.kind = BKind::Exists;
    t.bound = std::move(vars);
    t.kids.push_back(std::move(body));
    return t;
}

const Declaration* SmtScript::find_declaration(const std::string& name) const {
    for (const auto& d : declarations) {
        if (d.name == name) {
            return &d;
        }
    }
    return nullptr;
}

const Assembler* SmtScript::find_assembler(const std::string& name) const {
    for (const auto& a : assemblers) {
        if (a.name == name) {
            return &a;
        }
    }
    return nullptr;
}

// ============================================================================
// Predicate compilation
// ============================================================================

BoolTerm compile_predicate(const SetExpr& e, const PredicateIndex& idx, const SeqTerm& b) {
    switch (e.kind()) {
    case ExprKind::Top:
        return BoolTerm::lit(true);
    case ExprKind::Bot:
        return BoolTerm::lit(false);
    case ExprKind::Var:
    case ExprKind::App:
        return BoolTerm::bit(b, idx.position(e));
    case ExprKind::Neg:
        return BoolTerm::negate(compile_predicate(e.arg(0), idx, b));
    case ExprKind::Inter:
        return BoolTerm::conj({compile_predicate(e.arg(0), idx, b), compile_predicate(e.arg(1), idx, b)});
    case ExprKind::Union:
        return BoolTerm::disj({compile_predicate(e.arg(0), idx, b), compile_predicate(e.arg(1), idx, b)});
    case ExprKind::Proj:
        throw std::invalid_argument("cannot compile projection " + to_pretty(e));
    }
    return BoolTerm::lit(false);
}

// ============================================================================
// Encoding
// ============================================================================

namespace {

bool is_simple_symbol_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("~!@$%^&*_-+=<>.?/").find(c) !=
                                                             std::string_view::npos;
}

class NameTable {
  public:
    NameTable() {
        for (const char* w : {"assert", "true", "false", "and", "or", "not", "ite", "concat", "extract", "forall",
                              "exists", "let", "par", "as", "match", "BitVec", "Bool", "_", "!", "=", "=>", "xor",
                              "distinct", "check-sat", "define-fun", "declare-fun", "declare-const", "set-logic",
                              "get-model", "inDomain"}) {
            used_.insert(w);
        }
    }

    std::string claim(const std::string& wanted) {
        std::string base;
        for (char c : wanted) {
            base += is_simple_symbol_char(c) ? c : '_';
        }
        if (base.empty() || std::isdigit(static_cast<unsigned char>(base.front()))) {
            base = "s" + base;
        }
        std::string name = base;
        for (std::size_t k = 1; used_.contains(name); ++k) {
            name = base + "!" + std::to_string(k);
        }
        used_.insert(name);
        return name;
    }

  private:
    std::set<std::string> used_;
};

std::vector<SeqTerm> refs(const std::vector<std::string>& names) {
    std::vector<SeqTerm> out;
    for (const auto& n : names) {
        out.push_back(SeqTerm::ref(n));
    }
    return out;
}

/// Declarations, assemblers, and the domain-closure facts shared by both
/// encodings.
class Encoder {
  public:
    Encoder(const Signature& sig, const PredicateIndex& idx, const EncodeOptions& opts) : sig_(sig), idx_(idx) {
        if (idx.size() == 0) {
            throw std::invalid_argument("cannot encode a formula without base predicates (N = 0)");
        }
        script_.logic = opts.logic;
        script_.width = idx.size();
        script_.bases = idx.bases;
        script_.get_model = opts.get_model;
        if (opts.solver_hints) {
            script_.options.emplace_back(":smt.ematching", "false");
        }
        image_axiom_ = opts.image_axiom;
    }

    void declare_signature() {
        in_domain_ = "inDomain";
        std::size_t max_arity = 0;
        for (const auto& s : sig_.symbols()) {
            max_arity = std::max(max_arity, s.arity);
        }
        names_.claim("x");
        for (std::size_t j = 1; j <= max_arity; ++j) {
            for (const char* stem : {"x", "z", "b"}) {
                names_.claim(stem + std::to_string(j));
            }
        }
        script_.declarations.push_back(Declaration{in_domain_, DeclRole::InDomain, 1, false});
        const auto& syms = sig_.symbols();
        sym_term_.resize(syms.size());
        for (std::size_t s = 0; s < syms.size(); ++s) {
            if (syms[s].arity == 0) {
                Declaration d{names_.claim(syms[s].name), DeclRole::SymbolConst, 0, true};
                d.symbol = s;
                sym_term_[s] = d.name;
                script_.declarations.push_back(d);
            }
        }
        for (std::size_t s = 0; s < syms.size(); ++s) {
            if (syms[s].arity == 0) {
                continue;
            }
            for (std::size_t p = 0; p < idx_.size(); ++p) {
                if (!idx_.bases[p].is_var()) {
                    continue;
                }
                Declaration d{names_.claim(syms[s].name + "_" + idx_.bases[p].name()), DeclRole::VarBit,
                              syms[s].arity, false};
                d.symbol = s;
                d.position = p;
                var_bit_[{s, p}] = d.name;
                script_.declarations.push_back(d);
            }
        }
        for (std::size_t s = 0; s < syms.size(); ++s) {
            if (syms[s].arity == 0) {
                continue;
            }
            Assembler a;
            a.name = names_.claim(syms[s].name + "_SMT");
            a.symbol = s;
            for (std::size_t j = 1; j <= syms[s].arity; ++j) {
                a.params.push_back("b" + std::to_string(j));
            }
            a.bits = forced_bits(s, refs(a.params));
            sym_term_[s] = a.name;
            script_.assemblers.push_back(std::move(a));
        }
    }

    void assert_closure() {
        const auto& syms = sig_.symbols();
        for (std::size_t s = 0; s < syms.size(); ++s) {
            if (syms[s].arity != 0) {
                continue;
            }
            const SeqTerm c = SeqTerm::ref(sym_term_[s]);
            std::vector<BoolTerm> facts{BoolTerm::call(in_domain_, {c})};
            for (std::size_t p = 0; p < idx_.size(); ++p) {
                const SetExpr& base = idx_.bases[p];
                if (base.is_app()) {
                    const bool forced = base.name() == syms[s].name;
                    facts.push_back(forced ? BoolTerm::bit(c, p) : BoolTerm::negate(BoolTerm::bit(c, p)));
                }
            }
            script_.assertions.push_back(BoolTerm::conj(std::move(facts)));
        }
        for (std::size_t s = 0; s < syms.size(); ++s) {
            if (syms[s].arity == 0) {
                continue;
            }
            const auto xs = bound_vars(syms[s].arity);
            std::vector<BoolTerm> in;
            for (const auto& x : xs) {
                in.push_back(BoolTerm::call(in_domain_, {SeqTerm::ref(x)}));
            }
            script_.assertions.push_back(BoolTerm::forall(
                xs, BoolTerm::implies(BoolTerm::conj(std::move(in)),
                                      BoolTerm::call(in_domain_, {SeqTerm::call(sym_term_[s], refs(xs))}))));
        }
        if (image_axiom_) {
            std::vector<BoolTerm> images;
            const SeqTerm x = SeqTerm::ref("x");
            for (std::size_t s = 0; s < syms.size(); ++s) {
                if (syms[s].arity == 0) {
                    images.push_back(BoolTerm::seq_eq(x, SeqTerm::ref(sym_term_[s])));
                    continue;
                }
                const auto ys = bound_vars(syms[s].arity, "z");
                std::vector<BoolTerm> body;
                for (const auto& y : ys) {
                    body.push_back(BoolTerm::call(in_domain_, {SeqTerm::ref(y)}));
                }
                body.push_back(BoolTerm::seq_eq(x, SeqTerm::call(sym_term_[s], refs(ys))));
                images.push_back(BoolTerm::exists(ys, BoolTerm::conj(std::move(body))));
            }
            script_.assertions.push_back(BoolTerm::forall(
                {"x"}, BoolTerm::implies(BoolTerm::call(in_domain_, {x}), BoolTerm::disj(std::move(images)))));
        }
    }

    BoolTerm holds_everywhere(const Atom& a) const {
        const SeqTerm x = SeqTerm::ref("x");
        return BoolTerm::forall(
            {"x"}, BoolTerm::implies(BoolTerm::conj({BoolTerm::call(in_domain_, {x}), compile_predicate(a.lhs, idx_, x)}),
                                     compile_predicate(a.rhs, idx_, x)));
    }

    BoolTerm violated_at(const Atom& a, const std::string& witness) const {
        const SeqTerm y = SeqTerm::ref(witness);
        return BoolTerm::conj({BoolTerm::call(in_domain_, {y}), compile_predicate(a.lhs, idx_, y),
                               BoolTerm::negate(compile_predicate(a.rhs, idx_, y))});
    }

    std::string declare_witness(const std::string& stem, std::size_t atom) {
        Declaration d{names_.claim(stem), DeclRole::Witness, 0, true};
        d.atom = atom;
        script_.declarations.push_back(d);
        return d.name;
    }

    std::string declare_guard(const std::string& stem, std::size_t atom) {
        Declaration d{names_.claim(stem), DeclRole::Guard, 0, false};
        d.atom = atom;
        script_.declarations.push_back(d);
        return d.name;
    }

    SmtScript& script() { return script_; }

  private:
    /// Bits of f(b_1..b_a): variable bits come from the unknowns f_X, the bit
    /// of an application g(E..) is ∧_j P_Ej(b_j) when g = f and false otherwise.
    std::vector<BoolTerm> forced_bits(std::size_t s, const std::vector<SeqTerm>& args) const {
        const auto& sym = sig_.symbols()[s];
        std::vector<BoolTerm> bits;
        for (std::size_t p = 0; p < idx_.size(); ++p) {
            const SetExpr& base = idx_.bases[p];
            if (base.is_var()) {
                bits.push_back(BoolTerm::call(var_bit_.at({s, p}), args));
            } else if (base.name() != sym.name) {
                bits.push_back(BoolTerm::lit(false));
            } else {
                std::vector<BoolTerm> parts;
                for (std::size_t j = 0; j < sym.arity; ++j) {
                    parts.push_back(compile_predicate(base.arg(j), idx_, args[j]));
                }
                bits.push_back(BoolTerm::conj(std::move(parts)));
            }
        }
        return bits;
    }

    static std::vector<std::string> bound_vars(std::size_t n, const std::string& stem = "x") {
        std::vector<std::string> out;
        for (std::size_t i = 1; i <= n; ++i) {
            out.push_back(stem + std::to_string(i));
        }
        return out;
    }

    const Signature& sig_;
    const PredicateIndex& idx_;
    SmtScript script_;
    NameTable names_;
    bool image_axiom_ = false;
    std::string in_domain_;
    std::vector<std::string> sym_term_;
    std::map<std::pair<std::size_t, std::size_t>, std::string> var_bit_;
};

void require_projection_free(const std::vector<Atom>& atoms) {
    for (const auto& a : atoms) {
        if (contains_proj(a.lhs) || contains_proj(a.rhs)) {
            throw std::invalid_argument("projections must be eliminated before encoding");
        }
    }
}

std::size_t atom_index(const std::vector<Atom>& atoms, const Atom& a) {
    return static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), a) - atoms.begin());
}

BoolTerm over_guards(const Formula& f, const std::vector<Atom>& atoms, const std::vector<std::string>& guards) {
    switch (f.kind()) {
    case FormulaKind::Atom:
        return BoolTerm::call(guards[atom_index(atoms, f.as_atom())]);
    case FormulaKind::Not:
        return BoolTerm::negate(over_guards(f.child(0), atoms, guards));
    case FormulaKind::And:
    case FormulaKind::Or: {
        std::vector<BoolTerm> parts;
        for (const auto& c : f.children()) {
            parts.push_back(over_guards(c, atoms, guards));
        }
        return f.kind() == FormulaKind::And ? BoolTerm::conj(std::move(parts)) : BoolTerm::disj(std::move(parts));
    }
    }
    return BoolTerm::lit(true);
}

}  // namespace

SmtScript encode_conjunction(const std::vector<Literal>& literals, const Signature& sig, const PredicateIndex& idx,
                             const EncodeOptions& opts) {
    Encoder enc(sig, idx, opts);
    auto& script = enc.script();
    for (const auto& l : literals) {
        if (std::find(script.atoms.begin(), script.atoms.end(), l.atom) == script.atoms.end()) {
            script.atoms.push_back(l.atom);
        }
    }
    require_projection_free(script.atoms);
    enc.declare_signature();
    std::vector<std::string> witnesses;
    std::size_t negatives = 0;
    for (const auto& l : literals) {
        if (!l.positive) {
            witnesses.push_back(enc.declare_witness("y" + std::to_string(++negatives), atom_index(script.atoms, l.atom)));
        }
    }
    enc.assert_closure();
    std::size_t w = 0;
    for (const auto& l : literals) {
        script.assertions.push_back(l.positive ? enc.holds_everywhere(l.atom) : enc.violated_at(l.atom, witnesses[w++]));
    }
    return std::move(script);
}

SmtScript encode_formula(const Formula& f, const Signature& sig, const PredicateIndex& idx, const EncodeOptions& opts) {
    if (auto lits = as_literal_conjunction(f)) {
        return encode_conjunction(*lits, sig, idx, opts);
    }
    Encoder enc(sig, idx, opts);
    auto& script = enc.script();
    script.atoms = collect_atoms(f);
    require_projection_free(script.atoms);
    enc.declare_signature();
    std::vector<std::string> guards;
    std::vector<std::string> witnesses;
    for (std::size_t i = 0; i < script.atoms.size(); ++i) {
        guards.push_back(enc.declare_guard("l" + std::to_string(i + 1), i));
    }
    for (std::size_t i = 0; i < script.atoms.size(); ++i) {
        witnesses.push_back(enc.declare_witness("w" + std::to_string(i + 1), i));
    }
    enc.assert_closure();
    for (std::size_t i = 0; i < script.atoms.size(); ++i) {
        const BoolTerm guard = BoolTerm::call(guards[i]);
        script.assertions.push_back(BoolTerm::implies(guard, enc.holds_everywhere(script.atoms[i])));
        script.assertions.push_back(
            BoolTerm::implies(BoolTerm::negate(guard), enc.violated_at(script.atoms[i], witnesses[i])));
    }
    script.assertions.push_back(over_guards(f, script.atoms, guards));
    return std::move(script);
}

// ============================================================================
// SMT-LIB output
// ============================================================================

namespace {

std::string sort_of(std::size_t width) { return "(_ BitVec " + std::to_string(width) + ")"; }

void emit_seq(const SeqTerm& t, std::string& out) {
    if (t.args.empty()) {
        out += t.name;
        return;
    }
    out += '(' + t.name;
    for (const auto& a : t.args) {
        out += ' ';
        emit_seq(a, out);
    }
    out += ')';
}

void emit_bool(const BoolTerm& t, std::size_t width, std::string& out) {
    auto nary = [&](const char* op) {
        out += '(';
        out += op;
        for (const auto& k : t.kids) {
            out += ' ';
            emit_bool(k, width, out);
        }
        out += ')';
    };
    switch (t.kind) {
    case BKind::Lit:
        out += t.value ? "true" : "false";
        return;
    case BKind::Bit:
        out += "(= ((_ extract " + std::to_string(t.position) + ' ' + std::to_string(t.position) + ") ";
        emit_seq(t.seqs[0], out);
        out += ") #b1)";
        return;
    case BKind::Not:
        nary("not");
        return;
    case BKind::And:
        nary("and");
        return;
    case BKind::Or:
        nary("or");
        return;
    case BKind::Implies:
        nary("=>");
        return;
    case BKind::Iff:
        nary("=");
        return;
    case BKind::Call:
        if (t.seqs.empty()) {
            out += t.name;
            return;
        }
        out += '(' + t.name;
        for (const auto& s : t.seqs) {
            out += ' ';
            emit_seq(s, out);
        }
        out += ')';
        return;
    case BKind::SeqEq:
        out += "(= ";
        emit_seq(t.seqs[0], out);
        out += ' ';
        emit_seq(t.seqs[1], out);
        out += ')';
        return;
    case BKind::ForAll:
    case BKind::Exists:
        out += t.kind == BKind::ForAll ? "(forall (" : "(exists (";
        for (std::size_t i = 0; i < t.bound.size(); ++i) {
            out += (i ? " (" : "(") + t.bound[i] + ' ' + sort_of(width) + ')';
        }
        out += ") ";
        emit_bool(t.kids[0], width, out);
        out += ')';
        return;
    }
}

void emit_bit_value(const BoolTerm& b, std::size_t width, std::string& out) {
    if (b.kind == BKind::Lit) {
        out += b.value ? "#b1" : "#b0";
        return;
    }
    out += "(ite ";
    emit_bool(b, width, out);
    out += " #b1 #b0)";
}

}  // namespace

std::string to_smtlib(const SmtScript& script) {
    const std::size_t n = script.width;
    const std::string bv = sort_of(n);
    std::string out;
    out += "; set-constraint translation, " + std::to_string(n) + " base predicates\n";
    for (std::size_t p = 0; p < script.bases.size(); ++p) {
        out += ";   bit " + std::to_string(p) + ": " + setpat::to_string(script.bases[p]) + "\n";
    }
    for (const auto& [key, value] : script.options) {
        out += "(set-option " + key + " " + value + ")\n";
    }
    out += "(set-logic " + script.logic + ")\n";
    for (const auto& d : script.declarations) {
        const std::string result = d.returns_seq ? bv : "Bool";
        if (d.arity == 0) {
            out += "(declare-const " + d.name + ' ' + result + ")\n";
            continue;
        }
        out += "(declare-fun " + d.name + " (";
        for (std::size_t i = 0; i < d.arity; ++i) {
            out += (i ? " " : "") + bv;
        }
        out += ") " + result + ")\n";
    }
    for (const auto& a : script.assemblers) {
        out += "(define-fun " + a.name + " (";
        for (std::size_t i = 0; i < a.params.size(); ++i) {
            out += (i ? " (" : "(") + a.params[i] + ' ' + bv + ')';
        }
        out += ") " + bv + ' ';
        if (n == 1) {
            emit_bit_value(a.bits[0], n, out);
        } else {
            out += "(concat";
            for (std::size_t j = n; j-- > 0;) {
                out += ' ';
                emit_bit_value(a.bits[j], n, out);
            }
            out += ')';
        }
        out += ")\n";
    }
    for (const auto& t : script.assertions) {
        out += "(assert ";
        emit_bool(t, n, out);
        out += ")\n";
    }
    out += "(check-sat)\n";
    if (script.get_model) {
        out += "(get-model)\n";
    }
    return out;
}

}  // namespace setpat::smt
