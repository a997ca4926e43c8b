#include "setpat/lang/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace setpat::lang {

namespace {

enum class Tok { Lower, Upper, Int, Double, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Span span;
};

bool is_keyword(const std::string& s) {
    // "case" and "of" are reserved so the older case-of spelling fails early
    return s == "data" || s == "let" || s == "in" || s == "match" || s == "with" || s == "case" || s == "of";
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "--") {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token t;
        t.span = {line, col};
        std::size_t j = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) {
                ++j;
            }
            t.kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::Upper : Tok::Lower;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            t.kind = Tok::Int;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    ++j;
                }
                t.kind = Tok::Double;
            }
        } else {
            t.kind = Tok::Sym;
            j = i + (src.substr(i, 2) == "->" ? 2 : 1);
            if (std::string_view("\\.=|(),{};->").find(c) == std::string_view::npos) {
                throw SyntaxError(std::string("unexpected character '") + c + "'", t.span);
            }
        }
        t.text = std::string(src.substr(i, j - i));
        advance(j - i);
        out.push_back(std::move(t));
    }
    Token end;
    end.span = {line, col};
    out.push_back(end);
    return out;
}

class Parser {
  public:
    Parser(std::vector<Token> toks, DataEnv& data) : toks_(std::move(toks)), data_(data) {}

    Program program() {
        Program p;
        while (at_word("data")) {
            datadecl();
        }
        struct Def {
            std::string name;
            TermPtr term;
            Span span;
        };
        std::vector<Def> defs;
        while (peek().kind != Tok::End) {
            const Token name = expect_lower("definition name");
            expect_sym("=");
            defs.push_back({name.text, term(), name.span});
        }
        if (defs.empty()) {
            throw SyntaxError("program has no definitions", peek().span);
        }
        TermPtr body = Term::var(defs.back().name, defs.back().span);
        for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
            body = Term::let(it->name, it->term, body, it->span);
        }
        for (const auto& d : defs) {
            p.definitions.push_back(d.name);
        }
        p.term = body;
        return p;
    }

    TermPtr only_term() {
        TermPtr t = term();
        if (peek().kind != Tok::End) {
            throw SyntaxError("trailing input '" + peek().text + "'", peek().span);
        }
        return t;
    }

  private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool at_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
    bool at_word(const char* s) const { return peek().kind == Tok::Lower && peek().text == s; }

    [[noreturn]] void fail(const std::string& wanted) const {
        const Token& t = peek();
        const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError("expected " + wanted + ", found " + got, t.span);
    }

    void expect_sym(const char* s) {
        if (!at_sym(s)) {
            fail(std::string("'") + s + "'");
        }
        next();
    }

    void expect_word(const char* s) {
        if (!at_word(s)) {
            fail(std::string("'") + s + "'");
        }
        next();
    }

    Token expect_lower(const char* what) {
        if (peek().kind != Tok::Lower || is_keyword(peek().text)) {
            fail(what);
        }
        return next();
    }

    Token expect_upper(const char* what) {
        if (peek().kind != Tok::Upper) {
            fail(what);
        }
        return next();
    }

    void datadecl() {
        const Token kw = next();
        DataDecl d;
        d.name = expect_upper("datatype name").text;
        d.span = kw.span;
        pending_ = d.name;
        expect_sym("=");
        do {
            CtorDecl k;
            const Token name = expect_upper("constructor name");
            k.name = name.text;
            k.span = name.span;
            if (at_sym("(")) {
                next();
                k.args.push_back(type());
                while (at_sym(",")) {
                    next();
                    k.args.push_back(type());
                }
                expect_sym(")");
            }
            d.ctors.push_back(std::move(k));
        } while (at_sym("|") && (next(), true));
        pending_.clear();
        data_.add(std::move(d));
    }

    UTypePtr type() {
        UTypePtr lhs;
        if (at_sym("(")) {
            next();
            lhs = type();
            expect_sym(")");
        } else {
            const Token name = expect_upper("type");
            if (name.text != pending_ && data_.find_data(name.text) == nullptr) {
                throw SyntaxError("unknown type '" + name.text + "'", name.span);
            }
            lhs = UType::data(name.text);
        }
        if (at_sym("->")) {
            next();
            return UType::arrow(lhs, type());
        }
        return lhs;
    }

    TermPtr term() {
        const Span s = peek().span;
        if (at_sym("\\")) {
            next();
            std::vector<Token> params{expect_lower("parameter")};
            while (!at_sym(".")) {
                params.push_back(expect_lower("parameter or '.'"));
            }
            next();
            TermPtr body = term();
            for (auto it = params.rbegin(); it != params.rend(); ++it) {
                body = Term::lam(it->text, body, it == params.rend() - 1 ? s : it->span);
            }
            return body;
        }
        if (at_word("let")) {
            next();
            const Token x = expect_lower("variable");
            expect_sym("=");
            TermPtr def = term();
            expect_word("in");
            return Term::let(x.text, def, term(), x.span);
        }
        if (at_word("match")) {
            next();
            TermPtr scrut = term();
            expect_word("with");
            expect_sym("{");
            std::vector<std::pair<Pattern, TermPtr>> branches;
            do {
                Pattern p = pattern();
                expect_sym("->");
                TermPtr body = term();
                expect_sym(";");
                branches.emplace_back(std::move(p), std::move(body));
            } while (!at_sym("}"));
            next();
            return Term::match(scrut, std::move(branches), s);
        }
        return appterm();
    }

    bool starts_atom() const {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Lower:
            // a new top-level definition starts with "x ="
            return !is_keyword(t.text) && !(peek(1).kind == Tok::Sym && peek(1).text == "=");
        case Tok::Upper:
        case Tok::Int:
        case Tok::Double:
            return true;
        case Tok::Sym:
            return t.text == "(";
        default:
            return false;
        }
    }

    TermPtr appterm() {
        if (!starts_atom()) {
            fail("term");
        }
        TermPtr t = atom();
        while (starts_atom()) {
            const Span s = peek().span;
            t = Term::app(t, atom(), s);
        }
        return t;
    }

    TermPtr atom() {
        const Token t = next();
        switch (t.kind) {
        case Tok::Lower:
            return Term::var(t.text, t.span);
        case Tok::Int:
            return Term::lit(t.text, "Int", t.span);
        case Tok::Double:
            return Term::lit(t.text, "Double", t.span);
        case Tok::Upper: {
            auto [d, k] = data_.find_ctor(t.text);
            if (k == nullptr) {
                throw SyntaxError("unknown constructor '" + t.text + "'", t.span);
            }
            std::vector<TermPtr> args;
            if (at_sym("(")) {
                next();
                args.push_back(term());
                while (at_sym(",")) {
                    next();
                    args.push_back(term());
                }
                expect_sym(")");
            }
            if (args.size() != k->args.size()) {
                throw SyntaxError("constructor '" + t.text + "' takes " + std::to_string(k->args.size()) +
                                      " argument(s), given " + std::to_string(args.size()),
                                  t.span);
            }
            return Term::ctor(t.text, d->name, std::move(args), t.span);
        }
        default:
            break;
        }
        if (t.kind == Tok::Sym && t.text == "(") {
            TermPtr inner = term();
            expect_sym(")");
            return inner;
        }
        --pos_;
        fail("term");
    }

    Pattern pattern() {
        const Token t = peek();
        if (t.kind == Tok::Lower && !is_keyword(t.text)) {
            next();
            return Pattern::var(t.text, t.span);
        }
        const Token name = expect_upper("pattern");
        auto [d, k] = data_.find_ctor(name.text);
        if (k == nullptr) {
            throw SyntaxError("unknown constructor '" + name.text + "'", name.span);
        }
        std::vector<Pattern> args;
        if (at_sym("(")) {
            next();
            args.push_back(pattern());
            while (at_sym(",")) {
                next();
                args.push_back(pattern());
            }
            expect_sym(")");
        }
        if (args.size() != k->args.size()) {
            throw SyntaxError("constructor '" + name.text + "' takes " + std::to_string(k->args.size()) +
                                  " argument(s) in a pattern, given " + std::to_string(args.size()),
                              name.span);
        }
        return Pattern::ctor(name.text, d->name, std::move(args), name.span);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    DataEnv& data_;
    std::string pending_;  // datatype being declared, may refer to itself
};

}  // namespace

Program parse_program(std::string_view text) {
    Program p;
    Parser parser(lex(text), p.data);
    Program body = parser.program();
    p.term = body.term;
    p.definitions = std::move(body.definitions);
    return p;
}

TermPtr parse_term(std::string_view text, const DataEnv& data) {
    DataEnv copy = data;
    Parser parser(lex(text), copy);
    return parser.only_term();
}

}  // namespace setpat::lang
