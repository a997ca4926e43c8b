#include "setpat/constraint_io.hpp"

#include <cctype>
#include <charconv>
#include <memory>
#include <vector>

namespace setpat {

namespace {

struct SNode {
    bool is_list = false;
    std::string atom;
    std::vector<SNode> items;
    int line = 1;
    int column = 1;
};

class SReader {
  public:
    explicit SReader(std::string_view text) : text_(text) {}

    std::vector<SNode> read_all() {
        std::vector<SNode> out;
        skip_space();
        while (pos_ < text_.size()) {
            out.push_back(read());
            skip_space();
        }
        return out;
    }

  private:
    SNode read() {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of input", line_, col_);
        }
        SNode node;
        node.line = line_;
        node.column = col_;
        char c = text_[pos_];
        if (c == '(') {
            advance();
            node.is_list = true;
            skip_space();
            while (pos_ < text_.size() && text_[pos_] != ')') {
                node.items.push_back(read());
                skip_space();
            }
            if (pos_ >= text_.size()) {
                throw ParseError("unclosed '('", node.line, node.column);
            }
            advance();
            return node;
        }
        if (c == ')') {
            throw ParseError("unexpected ')'", line_, col_);
        }
        while (pos_ < text_.size()) {
            c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') {
                break;
            }
            node.atom += c;
            advance();
        }
        return node;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

[[noreturn]] void fail(const SNode& at, const std::string& message) { throw ParseError(message, at.line, at.column); }

bool is_keyword(const std::string& s) {
    static const char* const words[] = {"top",    "bot",    "var", "union", "inter", "neg",  "proj",  "subset", "and",
                                        "or",     "not",    "=>",  "iff",   "true",  "false", "assert", "declare-fun"};
    for (const char* w : words) {
        if (s == w) {
            return true;
        }
    }
    return false;
}

std::string expect_name(const SNode& n, const char* what) {
    if (n.is_list || n.atom.empty()) {
        fail(n, std::string("expected ") + what);
    }
    if (n.atom.front() == '$') {
        fail(n, "names starting with '$' are reserved: " + n.atom);
    }
    return n.atom;
}

std::size_t expect_nat(const SNode& n) {
    std::size_t v = 0;
    if (n.is_list || n.atom.empty()) {
        fail(n, "expected a natural number");
    }
    auto [ptr, ec] = std::from_chars(n.atom.data(), n.atom.data() + n.atom.size(), v);
    if (ec != std::errc() || ptr != n.atom.data() + n.atom.size()) {
        fail(n, "expected a natural number, got '" + n.atom + "'");
    }
    return v;
}

class Interpreter {
  public:
    explicit Interpreter(const Signature& sig) : sig_(sig) {}

    SetExpr expr(const SNode& n) const {
        if (!n.is_list) {
            if (n.atom == "top") {
                return SetExpr::top();
            }
            if (n.atom == "bot") {
                return SetExpr::bot();
            }
            const auto name = expect_name(n, "a set expression");
            return application(n, name, {});
        }
        if (n.items.empty()) {
            fail(n, "empty set expression");
        }
        const SNode& head = n.items.front();
        if (head.is_list) {
            fail(head, "expected an operator name");
        }
        const std::string& op = head.atom;
        const std::size_t nargs = n.items.size() - 1;
        if (op == "var") {
            if (nargs != 1) {
                fail(n, "(var NAME) takes exactly one name");
            }
            return SetExpr::var(expect_name(n.items[1], "a variable name"));
        }
        if (op == "union" || op == "inter") {
            if (nargs < 2) {
                fail(n, "(" + op + " ...) needs at least two operands");
            }
            SetExpr acc = expr(n.items[1]);
            for (std::size_t i = 2; i < n.items.size(); ++i) {
                acc = op == "union" ? SetExpr::union_of(acc, expr(n.items[i])) : SetExpr::inter(acc, expr(n.items[i]));
            }
            return acc;
        }
        if (op == "neg") {
            if (nargs != 1) {
                fail(n, "(neg e) takes exactly one operand");
            }
            return SetExpr::neg(expr(n.items[1]));
        }
        if (op == "proj") {
            if (nargs != 3) {
                fail(n, "(proj NAME NAT e) takes a symbol, an index and an expression");
            }
            const auto name = expect_name(n.items[1], "a function symbol");
            const auto idx = expect_nat(n.items[2]);
            auto sym = sig_.find(name);
            if (!sym) {
                fail(n.items[1], "undeclared function symbol '" + name + "'");
            }
            const auto arity = sig_.symbols()[*sym].arity;
            if (idx < 1 || idx > arity) {
                fail(n.items[2], "projection index " + std::to_string(idx) + " out of range for '" + name +
                                     "' of arity " + std::to_string(arity));
            }
            return SetExpr::proj(name, idx, expr(n.items[3]));
        }
        if (is_keyword(op)) {
            fail(head, "'" + op + "' is not a set expression operator");
        }
        const auto name = expect_name(head, "a function symbol");
        std::vector<SetExpr> args;
        for (std::size_t i = 1; i < n.items.size(); ++i) {
            args.push_back(expr(n.items[i]));
        }
        return application(head, name, std::move(args));
    }

    Formula constraint(const SNode& n) const {
        if (!n.is_list) {
            if (n.atom == "true") {
                return Formula::truth();
            }
            if (n.atom == "false") {
                return Formula::falsity();
            }
            fail(n, "expected a constraint, got '" + n.atom + "'");
        }
        if (n.items.empty() || n.items.front().is_list) {
            fail(n, "expected a constraint operator");
        }
        const std::string& op = n.items.front().atom;
        const std::size_t nargs = n.items.size() - 1;
        auto sub = [&](std::size_t i) { return constraint(n.items[i]); };
        if (op == "subset") {
            if (nargs != 2) {
                fail(n, "(subset e e) takes two expressions");
            }
            return Formula::atom(expr(n.items[1]), expr(n.items[2]));
        }
        if (op == "and" || op == "or") {
            if (nargs < 2) {
                fail(n, "(" + op + " ...) needs at least two operands");
            }
            std::vector<Formula> parts;
            for (std::size_t i = 1; i < n.items.size(); ++i) {
                parts.push_back(sub(i));
            }
            return op == "and" ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
        }
        if (op == "not") {
            if (nargs != 1) {
                fail(n, "(not c) takes one operand");
            }
            return Formula::negate(sub(1));
        }
        if (op == "=>" || op == "iff") {
            if (nargs != 2) {
                fail(n, "(" + op + " c c) takes two operands");
            }
            return op == "=>" ? Formula::implies(sub(1), sub(2)) : Formula::iff(sub(1), sub(2));
        }
        fail(n.items.front(), "unknown constraint operator '" + op + "'");
    }

  private:
    SetExpr application(const SNode& at, const std::string& name, std::vector<SetExpr> args) const {
        auto sym = sig_.find(name);
        if (!sym) {
            fail(at, "undeclared function symbol '" + name + "'");
        }
        const auto arity = sig_.symbols()[*sym].arity;
        if (arity != args.size()) {
            fail(at, "arity mismatch: '" + name + "' has arity " + std::to_string(arity) + " but got " +
                         std::to_string(args.size()) + " arguments");
        }
        return SetExpr::app(name, std::move(args));
    }

    const Signature& sig_;
};

}  // namespace

ConstraintProblem parse_constraint_file(std::string_view text) {
    const auto forms = SReader(text).read_all();
    ConstraintProblem problem;
    std::vector<Formula> assertions;
    for (const auto& form : forms) {
        if (!form.is_list || form.items.empty() || form.items.front().is_list) {
            fail(form, "expected (declare-fun ...) or (assert ...)");
        }
        const std::string& head = form.items.front().atom;
        if (head == "declare-fun") {
            if (!assertions.empty()) {
                fail(form, "declarations must precede assertions");
            }
            if (form.items.size() != 3) {
                fail(form, "(declare-fun NAME NAT) expected");
            }
            auto name = expect_name(form.items[1], "a function symbol name");
            if (is_keyword(name)) {
                fail(form.items[1], "'" + name + "' is a reserved word");
            }
            if (problem.signature.find(name)) {
                fail(form.items[1], "duplicate declaration of '" + name + "'");
            }
            problem.signature.add({std::move(name), expect_nat(form.items[2])});
        } else if (head == "assert") {
            if (form.items.size() != 2) {
                fail(form, "(assert c) takes one constraint");
            }
            assertions.push_back(Interpreter(problem.signature).constraint(form.items[1]));
        } else {
            fail(form.items.front(), "unknown top-level form '" + head + "'");
        }
    }
    if (assertions.empty()) {
        throw ParseError("no assertions in constraint file", 1, 1);
    }
    problem.formula = Formula::conj(std::move(assertions));
    return problem;
}

std::string print_constraint_file(const Signature& sig, const Formula& f) {
    std::string out;
    for (const auto& s : sig.symbols()) {
        out += "(declare-fun " + s.name + ' ' + std::to_string(s.arity) + ")\n";
    }
    out += "(assert " + to_string(f) + ")\n";
    return out;
}

}  // namespace setpat
