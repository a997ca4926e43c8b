#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "setpat/lang/parser.hpp"
#include "setpat/lang/typecheck.hpp"
#include "support.hpp"

using namespace setpat::lang;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int let_spine(const TermPtr& t) {
    int n = 0;
    for (TermPtr u = t; u->kind == TermKind::Let; u = u->body()) {
        ++n;
    }
    return n;
}

std::string type_of(Program& p, const std::string& name) {
    TypeInfo info = typecheck(p);
    for (const auto& [n, s] : info.definitions) {
        if (n == name) {
            return to_string(s.type);
        }
    }
    return "<missing>";
}

}  // namespace

TEST_CASE("single constructor program") {
    Program p = parse_program("data D = K\nmain = K");
    const DataDecl* d = p.data.find_data("D");
    REQUIRE(d != nullptr);
    REQUIRE(d->ctors.size() == 1);
    CHECK(d->ctors[0].name == "K");
    CHECK(d->ctors[0].args.empty());
    REQUIRE(p.term->kind == TermKind::Let);
    CHECK(p.term->name == "main");
    CHECK(p.term->kids[0]->kind == TermKind::Ctor);
    CHECK(p.term->kids[0]->data == "D");
    CHECK(p.term->body()->kind == TermKind::Var);
}

TEST_CASE("syntax errors carry spans") {
    try {
        parse_program("main = case");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.span() == Span{1, 8});
    }
    CHECK_THROWS_AS(parse_program("data D = K\nmain = Q"), SyntaxError);
    CHECK_THROWS_AS(parse_program("data D = K(D)\nmain = K"), SyntaxError);
    CHECK_THROWS_AS(parse_program("data D = K | K\nmain = K"), SyntaxError);
    CHECK_THROWS_AS(parse_program("data D = K(E)\nmain = 1"), SyntaxError);
    CHECK_THROWS_AS(parse_program("main = match 1 with { }"), SyntaxError);
    CHECK_THROWS_AS(parse_program("main = 1 $ 2"), SyntaxError);
    CHECK_THROWS_AS(parse_program("data D = K\n"), SyntaxError);
}

TEST_CASE("multi-argument lambdas and applications desugar") {
    Program p = parse_program("k = \\x y. x\nmain = k 1 2");
    TermPtr k = p.term->kids[0];
    REQUIRE(k->kind == TermKind::Lam);
    CHECK(k->name == "x");
    REQUIRE(k->body()->kind == TermKind::Lam);
    CHECK(k->body()->name == "y");
    TermPtr m = p.term->body()->kids[0];
    REQUIRE(m->kind == TermKind::App);
    CHECK(m->fn()->kind == TermKind::App);
    CHECK(m->arg()->kind == TermKind::Lit);
    CHECK(p.definitions == std::vector<std::string>{"k", "main"});
}

TEST_CASE("shapes program parses to two top-level lets") {
    Program p = parse_program(slurp(setpat::testing::data_path("shapes.lang")));
    CHECK(let_spine(p.term) == 2);
    CHECK(p.definitions == std::vector<std::string>{"area", "main"});
    CHECK(type_of(p, "area") == "Shape -> Double");
}

TEST_CASE("intMap typechecks") {
    Program p = parse_program(slurp(setpat::testing::data_path("intmap.lang")));
    CHECK(type_of(p, "intMap") == "(Int -> Int) -> IntList -> IntList");
    CHECK(type_of(p, "main") == "IntList");
}

TEST_CASE("identity is polymorphic") {
    Program p = parse_program("id = \\x. x\nmain = id");
    TypeInfo info = typecheck(p);
    const TypeScheme& s = info.definitions[0].second;
    REQUIRE(s.vars.size() == 1);
    REQUIRE(s.type->kind == UKind::Arrow);
    CHECK(s.type->from->kind == UKind::Var);
    CHECK(same_type(s.type->from, s.type->to));
    // both uses of id instantiate independently
    Program q = parse_program("data A = A\ndata B = B\ndata P = P(A, B)\nid = \\x. x\nmain = P(id A, id B)");
    CHECK_NOTHROW(typecheck(q));
    TermPtr use = q.term->body()->kids[0]->kids[0]->fn();
    REQUIRE(use->kind == TermKind::Var);
    REQUIRE(use->inst.size() == 1);
    CHECK(to_string(use->inst[0].second) == "A");
}

TEST_CASE("type errors") {
    CHECK_THROWS_AS(
        [] {
            Program p = parse_program("data D = K\nf = \\g. match g with { K -> K; }\nmain = f (\\x. x)");
            typecheck(p);
        }(),
        TypeError);
    CHECK_THROWS_AS(
        [] {
            Program p = parse_program("main = y");
            typecheck(p);
        }(),
        TypeError);
    CHECK_THROWS_AS(
        [] {
            Program p = parse_program("main = \\x. x x");
            typecheck(p);
        }(),
        TypeError);
    CHECK_THROWS_AS(
        [] {
            Program p = parse_program("data D = K(Int)\nmain = K(1.5)");
            typecheck(p);
        }(),
        TypeError);
}

TEST_CASE("recursion is monomorphic") {
    // f used at two types inside its own body
    Program p = parse_program("data A = A\ndata B = B\nf = \\x. let u = f A in let v = f B in x\nmain = f");
    CHECK_THROWS_AS(typecheck(p), TypeError);
}

TEST_CASE("non-exhaustive matches typecheck") {
    Program p = parse_program("data D = K | L\nf = \\d. match d with { K -> K; }\nmain = f L");
    TypeInfo info = typecheck(p);
    CHECK(info.match_count == 1);
}

TEST_CASE("corpus programs typecheck") {
    namespace fs = std::filesystem;
    int n = 0;
    for (const auto& e : fs::directory_iterator(setpat::testing::data_path("exhaustive"))) {
        Program p = parse_program(slurp(e.path().string()));
        CHECK_NOTHROW(typecheck(p));
        ++n;
    }
    CHECK(n >= 5);
    for (const char* f : {"shapes.lang", "shapes_triangle.lang", "intmap.lang"}) {
        Program p = parse_program(slurp(setpat::testing::data_path(f)));
        CHECK_NOTHROW(typecheck(p));
    }
}
