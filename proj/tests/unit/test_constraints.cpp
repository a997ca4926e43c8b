#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "setpat/oracle.hpp"
#include "setpat/predicate_index.hpp"
#include "setpat/projection.hpp"
#include "support.hpp"

using namespace setpat;
using setpat::testing::parse;

namespace {

SetExpr V(const std::string& x) { return SetExpr::var(x); }
const SetExpr T = SetExpr::top();
const SetExpr B = SetExpr::bot();

}  // namespace

TEST_CASE("signature") {
    Signature s({{"a", 0}, {"f", 2}});
    CHECK(s.has_ground_term());
    CHECK(s.find("f") == 1u);
    CHECK_FALSE(s.find("g").has_value());
    CHECK_THROWS_AS(s.add({"a", 1}), std::invalid_argument);
    CHECK_FALSE(Signature({{"f", 1}}).has_ground_term());
    CHECK_FALSE(Signature().has_ground_term());
}

TEST_CASE("expressions compare structurally") {
    CHECK(SetExpr::union_of(V("X"), T) == SetExpr::union_of(V("X"), T));
    CHECK_FALSE(SetExpr::union_of(V("X"), T) == SetExpr::union_of(T, V("X")));
    CHECK(SetExpr::app("f", {V("X")}).hash() == SetExpr::app("f", {V("X")}).hash());
    CHECK(Formula::atom(V("X"), T, 3) == Formula::atom(V("X"), T));  // tags are not compared
}

TEST_CASE("formula sugar") {
    CHECK(Formula::truth().is_true_const());
    CHECK(Formula::falsity().is_false_const());
    Formula eq = Formula::equal(V("X"), V("Y"));
    REQUIRE(eq.kind() == FormulaKind::And);
    CHECK(eq.children().size() == 2);
    Formula imp = Formula::implies(Formula::atom(V("X"), B), Formula::atom(V("Y"), B));
    CHECK(imp.kind() == FormulaKind::Or);
    CHECK(Formula::not_subset(V("X"), B).kind() == FormulaKind::Not);
}

TEST_CASE("traversals") {
    Formula f = Formula::conj(Formula::atom(SetExpr::app("f", {V("Y")}), V("X")),
                              Formula::negate(Formula::atom(V("X"), SetExpr::proj("f", 1, V("Z")))));
    CHECK(free_set_vars(f) == std::vector<std::string>{"Y", "X", "Z"});
    CHECK(collect_atoms(f).size() == 2);
    CHECK(contains_proj(f));
    auto lits = as_literal_conjunction(f);
    REQUIRE(lits);
    CHECK((*lits)[0].positive);
    CHECK_FALSE((*lits)[1].positive);
    CHECK_FALSE(as_literal_conjunction(Formula::disj({f, f})).has_value());

    Formula g = substitute(f, [](const std::string& v) -> std::optional<SetExpr> {
        return v == "X" ? std::optional<SetExpr>(T) : std::nullopt;
    });
    CHECK(free_set_vars(g) == std::vector<std::string>{"Y", "Z"});
}

TEST_CASE("well-formedness") {
    Signature s({{"a", 0}, {"f", 2}});
    CHECK_NOTHROW(check_well_formed(SetExpr::app("f", {T, SetExpr::app("a")}), s));
    CHECK_THROWS_AS(check_well_formed(SetExpr::app("f", {T}), s), std::invalid_argument);
    CHECK_THROWS_AS(check_well_formed(SetExpr::app("g", {}), s), std::invalid_argument);
    CHECK_THROWS_AS(check_well_formed(SetExpr::proj("f", 3, T), s), std::invalid_argument);
    CHECK_THROWS_AS(check_well_formed(SetExpr::proj("f", 0, T), s), std::invalid_argument);
}

TEST_CASE("constraint file round trip") {
    const char* text =
        "(declare-fun a 0) (declare-fun f 2)\n"
        "; comment\n"
        "(assert (or (subset (var X) (f (var Y) a)) (not (subset top (union (var Z) (neg (var X)) bot)))))\n"
        "(assert (iff (subset (proj f 2 (var X)) (inter (var Y) top)) true))";
    auto p = parse(text);
    CHECK(p.signature.size() == 2);
    auto q = parse(print_constraint_file(p.signature, p.formula));
    CHECK(q.signature == p.signature);
    CHECK(q.formula == p.formula);
}

TEST_CASE("constraint file errors carry positions") {
    try {
        parse("(declare-fun a 0)\n(assert (subset (var X) (g)))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() > 1);
    }
    CHECK_THROWS_AS(parse("(declare-fun a 0) (assert (subset (var X)))"), ParseError);
    CHECK_THROWS_AS(parse("(declare-fun a 0)"), ParseError);
    CHECK_THROWS_AS(parse("(declare-fun a 0) (assert (subset (var $1) top))"), ParseError);
    CHECK_THROWS_AS(parse("(declare-fun a 0) (declare-fun a 1) (assert true)"), ParseError);
    CHECK_THROWS_AS(parse("(declare-fun a 0) (assert (subset (a (var X)) top))"), ParseError);
    CHECK_THROWS_AS(parse("(declare-fun a 0) (assert (subset top top)"), ParseError);
}

TEST_CASE("base predicate index") {
    auto p = parse("(declare-fun a 0) (declare-fun f 1)"
                   "(assert (subset (inter (var X) (neg (f (var X)))) (union (a) (var Y))))");
    PredicateIndex idx = index_base_predicates(p.formula);
    // X, f(X), a, Y; the connectives are not bases
    CHECK(idx.size() == 4);
}

TEST_CASE("projection elimination") {
    Signature sig({{"a", 0}, {"f", 2}});
    auto p = parse("(declare-fun a 0) (declare-fun f 2)"
                   "(assert (subset (proj f 1 (var Y)) (a))) (assert (not (subset (var Y) bot)))");
    Formula g = eliminate_projections(p.formula, sig);
    CHECK_FALSE(contains_proj(g));
    auto vars = free_set_vars(g);
    CHECK(std::any_of(vars.begin(), vars.end(), [](const std::string& v) { return v[0] == '$'; }));

    // Y = {a} holds no f-terms, so f^-1(Y) = ∅ and the problem is sat; the
    // literal rule insists that X_1 be nonempty because Y is
    oracle::Budget budget;
    budget.max_n = 6;
    CHECK(oracle::oracle_solve(g, sig, budget).is_sat());
    Formula lit = eliminate_projections(p.formula, sig, ProjectionRule::Literal);
    CHECK_FALSE(contains_proj(lit));

    // nested projections are removed innermost first
    auto n = parse("(declare-fun a 0) (declare-fun f 2)"
                   "(assert (subset (proj f 2 (proj f 1 (var Y))) (var Y)))");
    CHECK_FALSE(contains_proj(eliminate_projections(n.formula, sig)));
}

// With the image axiom the verdict is kept exactly. Without it, an element
// outside every image can carry the f(⊤,…,⊤) bit and make E ∩ f(⊤,…,⊤)
// nonempty after elimination, while the projection itself only ever sees
// real images; the elimination can then only turn unsat into sat.
TEST_CASE("projection elimination keeps oracle verdicts") {
    Signature sig({{"c", 0}, {"k", 2}});
    for (bool image : {true, false}) {
        setpat::testing::RandomFormulas gen(4242, sig, {"X", "Y"});
        gen.max_atoms = 2;
        gen.max_bases = 2;
        oracle::Options opts;
        opts.budget.max_n = 6;
        opts.budget.max_checks = 200'000;
        opts.image_axiom = image;
        int compared = 0;
        int junk_only = 0;
        for (int i = 0; i < 80; ++i) {
            Formula f = gen.with_projection("k", 2);
            Verdict before = oracle::solve(f, sig, opts).verdict;
            Verdict after = oracle::solve(eliminate_projections(f, sig), sig, opts).verdict;
            if (!before.is_definite() || !after.is_definite()) {
                continue;
            }
            ++compared;
            if (image || !(before.is_unsat() && after.is_sat())) {
                CHECK_MESSAGE(before.kind == after.kind, to_pretty(f));
            } else {
                ++junk_only;
            }
        }
        MESSAGE("image axiom " << image << ": compared " << compared << ", sat only through junk " << junk_only);
        CHECK(compared >= 50);
    }
}
