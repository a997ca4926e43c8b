#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "setpat/oracle.hpp"
#include "setpat/simplify.hpp"
#include "support.hpp"

using namespace setpat;

namespace {

SetExpr V(const std::string& x) { return SetExpr::var(x); }
const SetExpr T = SetExpr::top();
const SetExpr B = SetExpr::bot();
SetExpr app(const std::string& f, std::vector<SetExpr> args = {}) { return SetExpr::app(f, std::move(args)); }

struct Tally {
    int compared = 0;
    int mismatched = 0;
    int sat_to_unsat = 0;
};

// Runs `pass` over generated formulas and compares oracle verdicts. The
// generator mixes in top-level equations so that merging has work to do.
Tally differential(const std::function<Formula(const Formula&)>& pass, std::uint64_t seed, bool image, int count) {
    Signature sig({{"a", 0}, {"f", 1}, {"g", 2}});
    setpat::testing::RandomFormulas gen(seed, sig, {"X", "Y", "Z"});
    oracle::Options opts;
    opts.budget.max_n = 4;
    opts.budget.max_checks = 200'000;
    opts.image_axiom = image;
    Tally t;
    for (int i = 0; i < count; ++i) {
        Formula f = i % 3 == 0 ? gen.formula() : gen.conjunction();
        if (i % 2 == 0) {
            const SetExpr rhs = i % 4 == 0 ? V("Y") : gen.expr(1);
            f = Formula::conj({Formula::equal(V("X"), rhs), f});
        }
        const Verdict before = oracle::solve(f, sig, opts).verdict;
        const Verdict after = oracle::solve(pass(f), sig, opts).verdict;
        if (!before.is_definite() || !after.is_definite()) {
            continue;
        }
        ++t.compared;
        if (before.kind != after.kind) {
            ++t.mismatched;
            t.sat_to_unsat += before.is_sat() ? 1 : 0;
            MESSAGE("image axiom " << image << ": " << to_pretty(f) << "  ~>  " << to_pretty(pass(f)));
        }
    }
    return t;
}

}  // namespace

TEST_CASE("union-find keeps the least name") {
    VarUnionFind uf;
    CHECK(uf.unite("Y", "X"));
    CHECK(uf.unite("Z", "Y"));
    CHECK_FALSE(uf.unite("X", "Z"));
    CHECK(uf.find("Z") == "X");
    CHECK(uf.find(uf.find("Z")) == "X");
    VarUnionFind other;
    other.unite("X", "Z");
    other.unite("Y", "X");
    CHECK(other.classes() == uf.classes());
}

TEST_CASE("expression rewrites") {
    CHECK(simplify_expr(SetExpr::neg(SetExpr::neg(V("X")))) == V("X"));
    CHECK(simplify_expr(app("f", {V("X"), B})) == B);
    CHECK(simplify_expr(SetExpr::inter(V("X"), T)) == V("X"));
    CHECK(simplify_expr(SetExpr::inter(V("X"), B)) == B);
    CHECK(simplify_expr(SetExpr::union_of(V("X"), B)) == V("X"));
    CHECK(simplify_expr(SetExpr::union_of(T, V("X"))) == T);
    CHECK(simplify_expr(SetExpr::neg(T)) == B);
    CHECK(simplify_expr(SetExpr::union_of(V("X"), V("X"))) == V("X"));
    // rewrites cascade: ¬(X ∩ ⊤) ∪ ¬¬⊥  →  ¬X
    CHECK(simplify_expr(SetExpr::union_of(SetExpr::neg(SetExpr::inter(V("X"), T)), SetExpr::neg(SetExpr::neg(B)))) ==
          SetExpr::neg(V("X")));
    // needs knowledge of the signature, so it stays
    const SetExpr circle = SetExpr::inter(app("Circle", {T}), SetExpr::neg(app("Square", {T})));
    CHECK(simplify_expr(circle) == circle);
}

TEST_CASE("trivial constraints") {
    const Formula c = Formula::atom(app("f", {V("X")}), V("Y"));
    CHECK(remove_trivial(Formula::conj({Formula::atom(B, V("X")), c})) == c);
    CHECK(remove_trivial(Formula::atom(V("V1"), V("V1"))).is_true_const());
    CHECK(remove_trivial(Formula::atom(V("X"), T)).is_true_const());
    CHECK(remove_trivial(Formula::negate(Formula::atom(V("X"), T))).is_false_const());
    CHECK(remove_trivial(Formula::disj({Formula::negate(Formula::truth()), c})) == c);
    CHECK(remove_trivial(Formula::disj({Formula::atom(V("X"), V("X")), c})).is_true_const());
}

TEST_CASE("merging variables") {
    const Formula fxz = Formula::atom(app("f", {V("X")}), V("Z"));
    auto [g, uf] = merge_variables(Formula::conj({Formula::atom(V("X"), V("Y")), Formula::atom(V("Y"), V("X")), fxz}));
    CHECK(g == fxz);
    CHECK(uf.find("Y") == "X");

    // the same pair under a disjunction is left alone
    const Formula eq = Formula::equal(V("X"), V("Y"));
    const Formula under_or = Formula::disj({eq, fxz});
    auto [h, uf2] = merge_variables(under_or);
    CHECK(h == under_or);
    CHECK_FALSE((uf2.contains("Y") && uf2.find("Y") == uf2.find("X")));

    // so is a pair under a negation
    const Formula under_not = Formula::conj({Formula::negate(eq), fxz});
    CHECK(merge_variables(under_not).first == under_not);

    // nested conjunctions count as top level
    auto [k, uf3] = merge_variables(Formula::conj({Formula::conj({Formula::atom(V("Y"), V("Z"))}), fxz,
                                                   Formula::atom(V("Z"), V("Y"))}));
    CHECK(uf3.find("Z") == "Y");
    CHECK(free_set_vars(k) == std::vector<std::string>{"X", "Y"});
}

TEST_CASE("intermediate variables are inlined") {
    // W = f(a) occurs once elsewhere
    const Formula def = Formula::equal(V("W"), app("f", {app("a")}));
    const Formula use = Formula::atom(V("W"), V("X"));
    const Formula g = merge_variables(Formula::conj({def, use})).first;
    CHECK(free_set_vars(g) == std::vector<std::string>{"X"});
    // twice elsewhere: kept
    const Formula twice = Formula::conj({def, use, Formula::negate(Formula::atom(V("W"), B))});
    const Formula h = merge_variables(twice).first;
    const auto vars = free_set_vars(h);
    CHECK(std::find(vars.begin(), vars.end(), "W") != vars.end());
}

TEST_CASE("full pass reaches a fixpoint") {
    const Formula f = Formula::conj({Formula::atom(V("X"), V("Y")), Formula::atom(V("Y"), SetExpr::inter(V("X"), T)),
                                     Formula::negate(Formula::atom(SetExpr::neg(SetExpr::neg(V("Y"))), B))});
    const Formula g = simplify_formula(f);
    CHECK(g == Formula::negate(Formula::atom(V("X"), B)));
    CHECK(simplify_formula(g) == g);
}

// Each pass on its own. With the image axiom every rewrite is exact. The
// printed translation lets an element outside every image carry the f(⊥)
// bit, so f(…,⊥,…) → ⊥ can lose such a witness there; clearing that bit in
// any model of the rewritten formula gives a model of the original, so the
// only possible flip is sat to unsat.
TEST_CASE("passes keep oracle verdicts") {
    const std::vector<std::pair<const char*, std::function<Formula(const Formula&)>>> passes{
        {"simplify_expr", [](const Formula& f) { return simplify_exprs(f); }},
        {"remove_trivial", [](const Formula& f) { return remove_trivial(f); }},
        {"merge_variables", [](const Formula& f) { return merge_variables(f).first; }},
    };
    for (const auto& [name, pass] : passes) {
        for (bool image : {true, false}) {
            const Tally t = differential(pass, 99, image, 150);
            INFO(name << " image axiom " << image);
            CHECK(t.compared >= 100);
            if (image) {
                CHECK(t.mismatched == 0);
            } else {
                CHECK(t.mismatched == t.sat_to_unsat);
            }
        }
    }
}
