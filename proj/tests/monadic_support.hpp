#pragma once

// Reads the printed monadic theory back as s-expressions and checks the
// shape expected for C3. Used by the monadic unit test and the acceptance
// binary.

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace setpat::testing {

struct Sexp {
    std::string atom;  // empty for a list
    std::vector<Sexp> items;

    [[nodiscard]] bool is(const std::string& a) const { return items.empty() && atom == a; }
    [[nodiscard]] bool head(const std::string& a, std::size_t size) const {
        return atom.empty() && items.size() == size && items[0].is(a);
    }
};

// A predicate name P[...] is one atom, brackets and spaces included.
inline std::vector<Sexp> read_sexps(const std::string& text) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size()) {
            if (std::isspace(static_cast<unsigned char>(text[i]))) {
                ++i;
            } else if (text[i] == ';') {
                while (i < text.size() && text[i] != '\n') {
                    ++i;
                }
            } else {
                break;
            }
        }
    };
    auto read = [&](auto&& self) -> Sexp {
        skip();
        if (i >= text.size()) {
            throw std::runtime_error("unexpected end");
        }
        Sexp s;
        if (text[i] == '(') {
            ++i;
            skip();
            while (i < text.size() && text[i] != ')') {
                s.items.push_back(self(self));
                skip();
            }
            if (i >= text.size()) {
                throw std::runtime_error("unbalanced");
            }
            ++i;
            return s;
        }
        if (text[i] == ')') {
            throw std::runtime_error("stray )");
        }
        int depth = 0;
        while (i < text.size()) {
            const char c = text[i];
            if (c == '[') {
                ++depth;
            } else if (c == ']') {
                --depth;
            } else if (depth == 0 && (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')')) {
                break;
            }
            s.atom += c;
            ++i;
        }
        return s;
    };
    std::vector<Sexp> out;
    skip();
    while (i < text.size()) {
        out.push_back(read(read));
        skip();
    }
    return out;
}

// (forall (x) (iff (P[E] (f x)) R)), R being (P[top] x) or false
using ImageClause = std::tuple<std::string, std::string, std::string>;

inline void image_clauses(const Sexp& s, std::vector<ImageClause>& out) {
    if (s.head("forall", 3) && s.items[1].items.size() == 1 && s.items[2].head("iff", 3)) {
        const std::string& x = s.items[1].items[0].atom;
        const Sexp& lhs = s.items[2].items[1];
        const Sexp& rhs = s.items[2].items[2];
        const bool pred_of_app = lhs.atom.empty() && lhs.items.size() == 2 && lhs.items[1].atom.empty() &&
                                 lhs.items[1].items.size() == 2 && lhs.items[1].items[1].is(x);
        if (pred_of_app) {
            std::string r;
            if (rhs.is("false")) {
                r = "false";
            } else if (rhs.atom.empty() && rhs.items.size() == 2 && rhs.items[1].is(x)) {
                r = rhs.items[0].atom;
            }
            if (!r.empty()) {
                out.emplace_back(lhs.items[0].atom, lhs.items[1].items[0].atom, r);
                return;
            }
        }
    }
    for (const auto& c : s.items) {
        image_clauses(c, out);
    }
}

// (=> (exists (y) (and (P y) (not (Q y)))) (forall (x) (=> (R x) (S x))))
inline bool exists_implies_forall(const Sexp& g) {
    if (!g.head("=>", 3)) {
        return false;
    }
    auto pred_on = [](const Sexp& p, const std::string& v) {
        return p.atom.empty() && p.items.size() == 2 && p.items[0].atom.rfind("P[", 0) == 0 && p.items[1].is(v);
    };
    const Sexp& e = g.items[1];
    const Sexp& a = g.items[2];
    if (!e.head("exists", 3) || e.items[1].items.size() != 1 || !a.head("forall", 3) || a.items[1].items.size() != 1) {
        return false;
    }
    const std::string y = e.items[1].items[0].atom;
    const std::string x = a.items[1].items[0].atom;
    const Sexp& eb = e.items[2];
    const Sexp& ab = a.items[2];
    return eb.head("and", 3) && pred_on(eb.items[1], y) && eb.items[2].head("not", 2) && pred_on(eb.items[2].items[1], y) &&
           ab.head("=>", 3) && pred_on(ab.items[1], x) && pred_on(ab.items[2], x);
}

// The printed C3 theory: the four image clauses for Circle(⊤) and Square(⊤)
// and a single ∃ ⇒ ∀ goal. Returns an empty string on success, else what
// is missing.
inline std::string match_c3(const std::string& printed) {
    std::vector<Sexp> top;
    try {
        top = read_sexps(printed);
    } catch (const std::exception& e) {
        return std::string("unreadable: ") + e.what();
    }
    std::vector<ImageClause> clauses;
    std::vector<const Sexp*> goals;
    for (const auto& s : top) {
        if (s.head("axiom", 2)) {
            image_clauses(s.items[1], clauses);
        } else if (s.head("goal", 2)) {
            goals.push_back(&s.items[1]);
        }
    }
    const std::set<ImageClause> want{
        {"P[(Circle top)]", "Circle", "P[top]"},
        {"P[(Circle top)]", "Square", "false"},
        {"P[(Square top)]", "Square", "P[top]"},
        {"P[(Square top)]", "Circle", "false"},
    };
    if (clauses.size() != 4 || std::set<ImageClause>(clauses.begin(), clauses.end()) != want) {
        return "expected exactly the four image clauses, found " + std::to_string(clauses.size());
    }
    if (goals.size() != 1 || !exists_implies_forall(*goals[0])) {
        return "expected one goal of shape (exists y. P(y) and not Q(y)) => (forall x. R(x) => S(x))";
    }
    return {};
}

}  // namespace setpat::testing
