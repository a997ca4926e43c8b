#include "setpat/lang/ast.hpp"

namespace setpat::lang {

std::string to_string(const Span& s) { return std::to_string(s.line) + ":" + std::to_string(s.column); }

UTypePtr UType::type_var(int id) {
    auto t = std::make_shared<UType>();
    t->kind = UKind::Var;
    t->var = id;
    return t;
}

UTypePtr UType::data(std::string name) {
    auto t = std::make_shared<UType>();
    t->kind = UKind::Data;
    t->name = std::move(name);
    return t;
}

UTypePtr UType::arrow(UTypePtr from, UTypePtr to) {
    auto t = std::make_shared<UType>();
    t->kind = UKind::Arrow;
    t->from = std::move(from);
    t->to = std::move(to);
    return t;
}

bool same_type(const UTypePtr& a, const UTypePtr& b) {
    if (a == b) {
        return true;
    }
    if (!a || !b || a->kind != b->kind) {
        return false;
    }
    switch (a->kind) {
    case UKind::Var:
        return a->var == b->var;
    case UKind::Data:
        return a->name == b->name;
    case UKind::Arrow:
        return same_type(a->from, b->from) && same_type(a->to, b->to);
    }
    return false;
}

std::string to_string(const UTypePtr& t) {
    if (!t) {
        return "?";
    }
    switch (t->kind) {
    case UKind::Var:
        return "t" + std::to_string(t->var);
    case UKind::Data:
        return t->name;
    case UKind::Arrow: {
        std::string lhs = to_string(t->from);
        if (t->from->kind == UKind::Arrow) {
            lhs = "(" + lhs + ")";
        }
        return lhs + " -> " + to_string(t->to);
    }
    }
    return "?";
}

DataEnv::DataEnv() {
    for (const char* base : {"Int", "Double"}) {
        DataDecl d;
        d.name = base;
        d.opaque = true;
        decls_.push_back(std::move(d));
    }
}

void DataEnv::add(DataDecl decl) {
    if (find_data(decl.name) != nullptr) {
        throw SyntaxError("datatype '" + decl.name + "' is already defined", decl.span);
    }
    for (std::size_t i = 0; i < decl.ctors.size(); ++i) {
        const auto& k = decl.ctors[i];
        bool twice = find_ctor(k.name).first != nullptr;
        for (std::size_t j = 0; j < i && !twice; ++j) {
            twice = decl.ctors[j].name == k.name;
        }
        if (twice) {
            throw SyntaxError("constructor '" + k.name + "' is already defined", k.span);
        }
    }
    decls_.push_back(std::move(decl));
}

const DataDecl* DataEnv::find_data(const std::string& name) const {
    for (const auto& d : decls_) {
        if (d.name == name) {
            return &d;
        }
    }
    return nullptr;
}

std::pair<const DataDecl*, const CtorDecl*> DataEnv::find_ctor(const std::string& name) const {
    for (const auto& d : decls_) {
        for (const auto& k : d.ctors) {
            if (k.name == name) {
                return {&d, &k};
            }
        }
    }
    return {nullptr, nullptr};
}

Pattern Pattern::var(std::string x, Span s) {
    Pattern p;
    p.is_var = true;
    p.name = std::move(x);
    p.span = s;
    return p;
}

Pattern Pattern::ctor(std::string k, std::string d, std::vector<Pattern> args, Span s) {
    Pattern p;
    p.is_var = false;
    p.name = std::move(k);
    p.data = std::move(d);
    p.args = std::move(args);
    p.span = s;
    return p;
}

std::string to_string(const Pattern& p) {
    if (p.is_var || p.args.empty()) {
        return p.name;
    }
    std::string out = p.name + "(";
    for (std::size_t i = 0; i < p.args.size(); ++i) {
        out += (i ? ", " : "") + to_string(p.args[i]);
    }
    return out + ")";
}

namespace {

TermPtr make(TermKind k, Span s) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->span = s;
    return t;
}

}  // namespace

TermPtr Term::var(std::string x, Span s) {
    auto t = make(TermKind::Var, s);
    t->name = std::move(x);
    return t;
}

TermPtr Term::lam(std::string x, TermPtr body, Span s) {
    auto t = make(TermKind::Lam, s);
    t->name = std::move(x);
    t->kids.push_back(std::move(body));
    return t;
}

TermPtr Term::app(TermPtr fn, TermPtr arg, Span s) {
    auto t = make(TermKind::App, s);
    t->kids = {std::move(fn), std::move(arg)};
    return t;
}

TermPtr Term::ctor(std::string k, std::string d, std::vector<TermPtr> args, Span s) {
    auto t = make(TermKind::Ctor, s);
    t->name = std::move(k);
    t->data = std::move(d);
    t->kids = std::move(args);
    return t;
}

TermPtr Term::match(TermPtr discriminee, std::vector<std::pair<Pattern, TermPtr>> branches, Span s) {
    auto t = make(TermKind::Match, s);
    t->kids.push_back(std::move(discriminee));
    for (auto& [p, body] : branches) {
        t->patterns.push_back(std::move(p));
        t->kids.push_back(std::move(body));
    }
    return t;
}

TermPtr Term::let(std::string x, TermPtr def, TermPtr body, Span s) {
    auto t = make(TermKind::Let, s);
    t->name = std::move(x);
    t->kids = {std::move(def), std::move(body)};
    return t;
}

TermPtr Term::lit(std::string text, std::string type, Span s) {
    auto t = make(TermKind::Lit, s);
    t->name = std::move(text);
    t->data = std::move(type);
    return t;
}

std::string to_string(const TermPtr& t) {
    switch (t->kind) {
    case TermKind::Var:
    case TermKind::Lit:
        return t->name;
    case TermKind::Lam:
        return "(\\" + t->name + ". " + to_string(t->body()) + ")";
    case TermKind::App:
        return "(" + to_string(t->fn()) + " " + to_string(t->arg()) + ")";
    case TermKind::Ctor: {
        if (t->kids.empty()) {
            return t->name;
        }
        std::string out = t->name + "(";
        for (std::size_t i = 0; i < t->kids.size(); ++i) {
            out += (i ? ", " : "") + to_string(t->kids[i]);
        }
        return out + ")";
    }
    case TermKind::Match: {
        std::string out = "match " + to_string(t->discriminee()) + " with {";
        for (std::size_t i = 0; i < t->branch_count(); ++i) {
            out += " " + to_string(t->patterns[i]) + " -> " + to_string(t->branch(i)) + ";";
        }
        return out + " }";
    }
    case TermKind::Let:
        return "let " + t->name + " = " + to_string(t->kids[0]) + " in " + to_string(t->body());
    }
    return "?";
}

}  // namespace setpat::lang
