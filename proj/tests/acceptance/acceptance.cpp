// One PASS/FAIL line per acceptance criterion. Exit status 1 when any
// criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "lang_support.hpp"
#include "monadic_support.hpp"
#include "setpat/monadic.hpp"
#include "setpat/oracle.hpp"
#include "setpat/projection.hpp"
#include "setpat/simplify.hpp"
#include "setpat/smt.hpp"
#include "setpat/solver.hpp"

namespace fs = std::filesystem;
using namespace setpat;
using namespace setpat::testing;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    failures += ok ? 0 : 1;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double v) {
    std::ostringstream o;
    o.precision(2);
    o << std::fixed << v;
    return o.str();
}

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = "env -u SETPAT_SMT " + std::string(SETPAT_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (p == nullptr) {
        return r;
    }
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) {
        r.out.append(buf, n);
    }
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

SolverConfig smt_config(const BackendConfig& z3) {
    SolverConfig cfg;
    cfg.mode = SolverMode::Smt;
    cfg.backend = z3;
    return cfg;
}

void shapes_safety(const std::optional<BackendConfig>& z3) {
    std::vector<std::pair<std::string, SolverConfig>> backends{{"oracle", SolverConfig{}}};
    if (z3) {
        backends.emplace_back("smt", smt_config(*z3));
    }
    bool ok = z3.has_value();
    std::string detail = z3 ? "" : "no SMT solver configured; ";
    for (const auto& [label, cfg] : backends) {
        auto t0 = Clock::now();
        auto safe = analyze_file("shapes.lang", cfg);
        const double t_safe = seconds_since(t0);
        t0 = Clock::now();
        auto tri = analyze_file("shapes_triangle.lang", cfg);
        const double t_tri = seconds_since(t0);
        const auto* main = find_definition(tri, "main");
        const bool unsafe = main != nullptr && main->safety == lang::Safety::Unsafe &&
                            main->offending == std::vector<lang::Span>{lang::Span{6, 29}};
        const bool here = safe.all_safe() && unsafe && t_safe <= 10 && t_tri <= 10;
        ok = ok && here;
        detail += label + " shapes " + (safe.all_safe() ? "all Safe" : "NOT all Safe") + " (" + fixed(t_safe) +
                  " s), triangle main " + (unsafe ? "Unsafe at 6:29" : "not Unsafe at 6:29") + " (" + fixed(t_tri) +
                  " s, backend calls " + std::to_string(tri.backend_calls) + "); ";
    }
    if (z3) {
        // not part of the verdict: the solver alone, without the reduction pass
        SolverConfig raw = smt_config(*z3);
        raw.reduce = false;
        raw.backend.timeout = std::chrono::milliseconds(10000);
        const auto t0 = Clock::now();
        auto safe = analyze_file("shapes.lang", raw);
        auto tri = analyze_file("shapes_triangle.lang", raw);
        detail += std::string("without reductions the smt backend gives shapes main ") +
                  lang::to_string(find_definition(safe, "main")->safety) + ", triangle main " +
                  lang::to_string(find_definition(tri, "main")->safety) + " (" + fixed(seconds_since(t0)) + " s, " +
                  std::to_string(safe.backend_calls + tri.backend_calls) + " backend calls, 10 s timeout)";
    }
    report(ok, "shapes example (safety)", detail);
}

// Runs analyze with --dump-constraints and looks for the cons flow in the
// intMap section.
void intmap_precision() {
    const fs::path dir = fs::temp_directory_path() / ("setpat_acc_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path dump = dir / "intmap.sc";
    Run r = cli("analyze " + data_path("intmap.lang") + " --dump-constraints " + dump.string());
    bool flow = false;
    std::string detail = "analyze exit " + std::to_string(r.code);
    try {
        const std::string text = read_file(dump.string());
        const std::string marker = "; definition intMap ";
        const auto at = text.find(marker);
        if (at != std::string::npos) {
            auto end = text.find("; definition ", at + marker.size());
            const std::string section = text.substr(at, end == std::string::npos ? std::string::npos : end - at);
            auto p = parse(section);
            flow = has_cons_flow(p.formula) || has_cons_flow(simplify_formula(p.formula));
        }
    } catch (const std::exception& e) {
        detail += std::string(", ") + e.what();
    }
    fs::remove_all(dir);
    const bool all_safe = r.code == 0 && r.out.find("Unsafe") == std::string::npos && r.out.find("Unknown") == std::string::npos;
    detail += all_safe ? ", all Safe" : ", not all Safe";
    detail += flow ? ", cons-flow conjunct present in the dump" : ", cons-flow conjunct missing";
    report(all_safe && flow, "intMap example (precision)", detail);
}

void c3_translation() {
    Run r = cli("translate " + data_path("c3.sc") + " --to monadic");
    const std::string why = match_c3(r.out);
    report(r.code == 0 && why.empty(), "C3 translation",
           why.empty() ? "four image clauses and one exists-implies-forall goal" : why);
}

void implication(const std::optional<BackendConfig>& z3) {
    Run o = cli("solve " + data_path("implication.sc") + " --backend oracle");
    std::string detail = "oracle " + (o.out.empty() ? std::string("?") : o.out.substr(0, o.out.find('\n')));
    bool ok = o.code == 0;
    if (z3) {
        // reductions off so the solver really sees the constraint
        Run s = cli("solve " + data_path("implication.sc") + " --no-reduce --stats --backend " + z3->path);
        Run direct = cli("solve " + data_path("implication.sc") + " --backend " + z3->path);
        detail += ", smt " + s.out.substr(0, s.out.find('\n')) + ", smt with reductions " +
                  direct.out.substr(0, direct.out.find('\n'));
        ok = ok && s.code == 0 && direct.code == 0;
    } else {
        detail += ", no SMT solver configured";
        ok = false;
    }
    report(ok, "unrestricted constraint", detail);
}

void differential(const std::optional<BackendConfig>& z3) {
    if (!z3) {
        report(false, "differential soundness", "no SMT solver configured");
        return;
    }
    const auto t0 = Clock::now();
    const std::vector<Signature> sigs{Signature({{"c", 0}, {"k", 2}}), Signature({{"a", 0}, {"f", 1}})};
    int generated = 0;
    int compared = 0;
    int disagreements = 0;
    for (std::size_t s = 0; s < sigs.size(); ++s) {
        RandomFormulas gen(1000 + s, sigs[s], {"X", "Y", "Z"});
        gen.max_depth = 3;
        gen.max_atoms = 4;
        gen.max_bases = 3;
        for (int i = 0; i < 130; ++i) {
            Formula f = i % 2 ? gen.conjunction() : gen.formula();
            auto idx = index_base_predicates(f);
            if (idx.size() == 0) {
                continue;
            }
            ++generated;
            const Verdict expected = oracle::solve(f, sigs[s]).verdict;
            const Verdict got = run_backend(smt::encode_formula(f, sigs[s], idx), *z3);
            if (expected.is_definite() && got.is_definite()) {
                ++compared;
                if (expected.kind != got.kind) {
                    ++disagreements;
                    std::cout << "  disagreement: " << to_pretty(f) << "\n";
                }
            }
        }
    }
    const double t = seconds_since(t0);
    report(compared >= 200 && disagreements == 0 && t <= 300, "differential soundness",
           std::to_string(generated) + " formulas, " + std::to_string(compared) + " with both verdicts definite, " +
               std::to_string(disagreements) + " disagreements, " + fixed(t) + " s");
}

struct Flips {
    int compared = 0;
    int mismatched = 0;
};

void projection_elimination() {
    const Signature sig({{"c", 0}, {"k", 2}});
    auto run = [&](bool image, ProjectionRule rule) {
        RandomFormulas gen(4242, sig, {"X", "Y"});
        gen.max_atoms = 2;
        gen.max_bases = 2;
        oracle::Options opts;
        opts.budget.max_n = 6;
        opts.budget.max_checks = 200'000;
        opts.image_axiom = image;
        Flips fl;
        for (int i = 0; i < 80; ++i) {
            Formula f = gen.with_projection("k", 2);
            const Verdict before = oracle::solve(f, sig, opts).verdict;
            const Verdict after = oracle::solve(eliminate_projections(f, sig, rule), sig, opts).verdict;
            if (before.is_definite() && after.is_definite()) {
                ++fl.compared;
                fl.mismatched += before.kind != after.kind ? 1 : 0;
            }
        }
        return fl;
    };
    const Flips plain = run(false, ProjectionRule::Restricted);
    const Flips image = run(true, ProjectionRule::Restricted);
    const Flips literal = run(false, ProjectionRule::Literal);
    report(plain.compared >= 50 && plain.mismatched == 0, "projection elimination",
           std::to_string(plain.mismatched) + " disagreements in " + std::to_string(plain.compared) +
               " decided instances (printed translation); with the image axiom " + std::to_string(image.mismatched) +
               " in " + std::to_string(image.compared) + "; literal side condition " +
               std::to_string(literal.mismatched) + " in " + std::to_string(literal.compared));
}

void simplification() {
    const Signature sig({{"a", 0}, {"f", 1}, {"g", 2}});
    const std::vector<std::pair<std::string, std::function<Formula(const Formula&)>>> passes{
        {"simplifyExpr", [](const Formula& f) { return simplify_exprs(f); }},
        {"removeTrivial", [](const Formula& f) { return remove_trivial(f); }},
        {"mergeVariables", [](const Formula& f) { return merge_variables(f).first; }},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [name, pass] : passes) {
        Flips fl[2];
        for (bool image : {false, true}) {
            RandomFormulas gen(7777, sig, {"X", "Y", "Z"});
            oracle::Options opts;
            opts.budget.max_n = 4;
            opts.budget.max_checks = 200'000;
            opts.image_axiom = image;
            for (int i = 0; i < 150; ++i) {
                Formula f = i % 3 == 0 ? gen.formula() : gen.conjunction();
                if (i % 2 == 0) {
                    const SetExpr rhs = i % 4 == 0 ? SetExpr::var("Y") : gen.expr(1);
                    f = Formula::conj({Formula::equal(SetExpr::var("X"), rhs), f});
                }
                const Verdict before = oracle::solve(f, sig, opts).verdict;
                const Verdict after = oracle::solve(pass(f), sig, opts).verdict;
                if (before.is_definite() && after.is_definite()) {
                    ++fl[image].compared;
                    fl[image].mismatched += before.kind != after.kind ? 1 : 0;
                }
            }
        }
        ok = ok && fl[0].compared >= 100 && fl[0].mismatched == 0;
        detail += name + " " + std::to_string(fl[0].mismatched) + "/" + std::to_string(fl[0].compared) +
                  " (image axiom " + std::to_string(fl[1].mismatched) + "/" + std::to_string(fl[1].compared) + "); ";
    }
    report(ok, "simplification safety", detail + "disagreements/decided");
}

void elision(const std::optional<BackendConfig>& z3) {
    SolverConfig cfg = z3 ? smt_config(*z3) : SolverConfig{};
    int programs = 0;
    std::size_t backend = 0;
    std::size_t solver = 0;
    bool safe = true;
    for (const auto& entry : fs::directory_iterator(data_path("exhaustive"))) {
        auto r = analyze_file("exhaustive/" + entry.path().filename().string(), cfg);
        ++programs;
        backend += r.backend_calls;
        solver += r.solver_calls;
        safe = safe && r.all_safe();
    }
    report(programs >= 5 && backend == 0 && safe, "elision",
           std::to_string(programs) + " exhaustive programs, " + std::to_string(backend) + " backend invocations, " +
               std::to_string(solver) + " solver calls" + (safe ? "" : ", some not Safe"));
}

void model_bound() {
    bool ok = true;
    for (std::size_t n = 0; n <= 10; ++n) {
        ok = ok && monadic::model_bound(n) == (std::uint64_t{1} << n);
    }
    report(ok, "model bound", "modelBound(N) = 2^N for N = 0..10");
}

void timing(const std::optional<BackendConfig>& z3) {
    std::vector<std::string> corpus;
    for (const auto& entry : fs::directory_iterator(data_path(""))) {
        if (entry.path().extension() == ".lang") {
            corpus.push_back(entry.path().filename().string());
        }
    }
    for (const auto& entry : fs::directory_iterator(data_path("exhaustive"))) {
        corpus.push_back("exhaustive/" + entry.path().filename().string());
    }
    std::sort(corpus.begin(), corpus.end());
    double worst = 0;
    std::string worst_name;
    std::vector<SolverConfig> cfgs{SolverConfig{}};
    if (z3) {
        cfgs.push_back(smt_config(*z3));
    }
    for (const auto& cfg : cfgs) {
        for (const auto& name : corpus) {
            const auto t0 = Clock::now();
            analyze_file(name, cfg);
            const double t = seconds_since(t0);
            if (t > worst) {
                worst = t;
                worst_name = name;
            }
        }
    }
    report(worst <= 10, "timing smoke test",
           std::to_string(corpus.size()) + " programs x " + std::to_string(cfgs.size()) + " backends, slowest " +
               worst_name + " at " + fixed(worst) + " s");
}

}  // namespace

int main() {
    const auto z3 = z3_backend();
    shapes_safety(z3);
    intmap_precision();
    c3_translation();
    implication(z3);
    differential(z3);
    projection_elimination();
    simplification();
    elision(z3);
    model_bound();
    timing(z3);
    return failures == 0 ? 0 : 1;
}
