#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "setpat/solver.hpp"
#include "support.hpp"

using namespace setpat;
using setpat::testing::parse;

namespace {

SolverConfig oracle_cfg() { return SolverConfig{}; }

std::optional<SolverConfig> smt_cfg() {
    auto z3 = setpat::testing::z3_backend();
    if (!z3) {
        return std::nullopt;
    }
    SolverConfig c;
    c.mode = SolverMode::Smt;
    c.backend = *z3;
    return c;
}

}  // namespace

TEST_CASE("empty universe short-circuit") {
    auto p = parse("(assert (subset top bot))");
    auto out = solve(p.formula, p.signature, oracle_cfg());
    CHECK(out.verdict.is_sat());
    CHECK(out.trace.short_circuit == "empty-universe");

    auto q = parse("(declare-fun f 1) (assert (not (subset (var X) bot)))");
    CHECK(solve(q.formula, q.signature).verdict.is_unsat());
}

TEST_CASE("constant and base-free short-circuits") {
    auto p = parse("(declare-fun a 0) (assert (subset top bot))");
    auto out = solve(p.formula, p.signature);
    CHECK(out.verdict.is_unsat());
    CHECK(out.trace.short_circuit == "constant");

    auto q = parse("(declare-fun a 0) (assert (or (subset top (neg top)) (subset (union bot top) top)))");
    CHECK(solve(q.formula, q.signature).verdict.is_sat());

    SolverConfig raw;
    raw.simplify = false;
    auto r = parse("(declare-fun a 0) (assert (not (subset (union bot top) (neg bot))))");
    auto o = solve(r.formula, r.signature, raw);
    CHECK(o.trace.short_circuit == "no-bases");
    CHECK(o.verdict.is_unsat());
}

TEST_CASE("unrestricted constraint is sat under both backends") {
    auto p = parse("(declare-fun a 0)"
                   "(assert (=> (subset (var X) (var Y)) (subset (var Y) (var X))))"
                   "(assert (not (subset (var Y) (var Z))))");
    CHECK(solve(p.formula, p.signature).verdict.is_sat());
    if (auto c = smt_cfg()) {
        c->reduce = false;
        auto out = solve(p.formula, p.signature, *c);
        CHECK(out.verdict.is_sat());
        CHECK(out.trace.backend_called);
        CHECK(out.trace.smtlib.find("(check-sat)") != std::string::npos);
    }
}

TEST_CASE("projection is eliminated before solving") {
    auto p = parse("(declare-fun a 0) (declare-fun f 1)"
                   "(assert (subset (proj f 1 (var Y)) bot)) (assert (not (subset (var Y) bot)))");
    SolverConfig c;
    c.budget.max_n = 6;
    auto out = solve(p.formula, p.signature, c);
    CHECK(out.verdict.is_sat());
    REQUIRE(out.trace.after_projections);
    CHECK_FALSE(contains_proj(*out.trace.after_projections));

    c.projection_rule = ProjectionRule::Literal;
    CHECK(solve(p.formula, p.signature, c).verdict.is_unsat());

    c.approximate_projections = true;
    // f^-1(Y) ≈ ⊤ makes ⊤ ⊆ ⊥ false
    CHECK(solve(p.formula, p.signature, c).verdict.is_unsat());
}

TEST_CASE("oracle budget surfaces through solve") {
    auto p = parse("(declare-fun a 0) (assert (subset (union (var A) (var B)) (union (var C) (var D))))");
    SolverConfig c;
    c.reduce = false;
    auto out = solve(p.formula, p.signature, c);
    CHECK(out.verdict.reason == UnknownReason::Budget);
    // every variable there is monotone, so the reductions settle it
    CHECK(solve(p.formula, p.signature).verdict.is_sat());
}

TEST_CASE("smt mode reports a missing backend") {
    auto p = parse("(declare-fun a 0) (assert (subset (var X) (a)))");
    SolverConfig c;
    c.mode = SolverMode::Smt;
    c.backend.path = "/nonexistent/z3";
    c.reduce = false;
    auto out = solve(p.formula, p.signature, c);
    CHECK(out.verdict.reason == UnknownReason::BackendError);
    CHECK(out.trace.backend_called);
}

TEST_CASE("logic override") {
    auto p = parse("(declare-fun a 0) (assert (subset (var X) (a)))");
    SolverConfig c;
    c.mode = SolverMode::Smt;
    c.backend.path = "/nonexistent/z3";
    c.reduce = false;
    c.logic_all = true;
    auto out = solve(p.formula, p.signature, c);
    CHECK(out.trace.smtlib.find("(set-logic ALL)") != std::string::npos);
}
