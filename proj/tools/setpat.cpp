// setpat: solve set constraints, analyze match safety, print translations.
//
//   setpat solve FILE.sc       prints sat | unsat | unknown   (exit 0 | 1 | 2)
//   setpat analyze FILE.lang   one line per definition        (exit 0 | 1 | 2)
//   setpat translate FILE.sc --to monadic|smtlib
//
// Exit code 3 for usage, input and internal errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "setpat/constraint_io.hpp"
#include "setpat/lang/analysis.hpp"
#include "setpat/lang/parser.hpp"
#include "setpat/monadic.hpp"
#include "setpat/projection.hpp"
#include "setpat/solver.hpp"

namespace fs = std::filesystem;
using namespace setpat;

namespace {

constexpr int kUsage = 3;

struct Options {
    std::string input;
    std::string backend;  // "oracle", or a solver executable
    std::vector<std::string> backend_args;
    long timeout_ms = 10000;
    std::size_t oracle_max_n = oracle::Budget{}.max_n;
    std::uint64_t oracle_max_checks = oracle::Budget{}.max_checks;
    std::string projection_rule = "restricted";
    bool no_simplify = false;
    bool no_reduce = false;
    bool approx_proj = false;
    bool image_axiom = false;
    bool get_model = false;
    bool logic_all = false;
    bool no_hints = false;
    bool stats = false;
    std::string dump_constraints;
    std::string dump_smtlib;
    std::string to = "smtlib";
};

class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << text;
}

SolverConfig make_config(const Options& o) {
    SolverConfig cfg;
    std::string backend = o.backend;
    if (backend.empty()) {
        // hermetic by default; SETPAT_SMT switches to the external solver
        backend = BackendConfig::path_from_env().value_or("oracle");
    }
    if (backend == "oracle") {
        cfg.mode = SolverMode::Oracle;
    } else {
        cfg.mode = SolverMode::Smt;
        cfg.backend.path = backend;
    }
    cfg.backend.args = o.backend_args;
    cfg.backend.timeout = std::chrono::milliseconds(o.timeout_ms);
    cfg.backend.get_model = o.get_model;
    cfg.budget.max_n = o.oracle_max_n;
    cfg.budget.max_checks = o.oracle_max_checks;
    cfg.simplify = !o.no_simplify;
    cfg.reduce = !o.no_reduce;
    cfg.approximate_projections = o.approx_proj;
    cfg.image_axiom = o.image_axiom;
    cfg.logic_all = o.logic_all;
    cfg.solver_hints = !o.no_hints;
    cfg.projection_rule = o.projection_rule == "literal" ? ProjectionRule::Literal : ProjectionRule::Restricted;
    return cfg;
}

int verdict_code(const Verdict& v) {
    switch (v.kind) {
    case VerdictKind::Sat:
        return 0;
    case VerdictKind::Unsat:
        return 1;
    case VerdictKind::Unknown:
        break;
    }
    return 2;
}

int run_solve(const Options& o) {
    const ConstraintProblem p = parse_constraint_file(read_input(o.input));
    const SolverConfig cfg = make_config(o);
    if (!o.dump_smtlib.empty()) {
        write_output(o.dump_smtlib, smtlib_for(p.formula, p.signature, cfg));
    }
    const SolveOutcome out = solve(p.formula, p.signature, cfg);
    std::cout << to_string(out.verdict.kind) << "\n";
    if (out.verdict.kind == VerdictKind::Unknown) {
        std::cerr << "unknown: " << to_string(out.verdict.reason);
        if (!out.verdict.detail.empty()) {
            std::cerr << ": " << out.verdict.detail;
        }
        std::cerr << "\n";
    }
    if (o.get_model && out.verdict.is_sat() && !out.verdict.raw_output.empty()) {
        // everything after the first line is the backend's model
        const auto nl = out.verdict.raw_output.find('\n');
        if (nl != std::string::npos) {
            std::cout << out.verdict.raw_output.substr(nl + 1);
        }
    }
    if (o.stats) {
        const auto& t = out.trace;
        std::cerr << "short-circuit: " << (t.short_circuit.empty() ? "-" : t.short_circuit) << "\n"
                  << "bases: " << t.width << "\n"
                  << "backend called: " << (t.backend_called ? "yes" : "no") << "\n"
                  << "oracle checks: " << t.oracle_checks << "\n";
    }
    return verdict_code(out.verdict);
}

int run_analyze(const Options& o) {
    lang::Program program = lang::parse_program(read_input(o.input));
    const SolverConfig cfg = make_config(o);
    const lang::AnalysisReport r = lang::analyze_program(program, cfg);

    for (const auto& d : r.definitions) {
        std::cout << d.name << " " << lang::to_string(d.span) << " " << lang::to_string(d.safety) << "\n";
        for (const auto& s : d.offending) {
            std::cout << "  match at " << lang::to_string(s) << " may receive an unmatched value\n";
        }
        if (d.safety != lang::Safety::Safe && !d.detail.empty()) {
            std::cout << "  " << d.detail << "\n";
        }
    }

    if (!o.dump_constraints.empty()) {
        std::string text;
        for (const auto& d : r.definitions) {
            text += "; definition " + d.name + " at " + lang::to_string(d.span) + "\n";
            text += print_constraint_file(r.signature, d.constraint);
            text += "\n";
        }
        write_output(o.dump_constraints, text);
    }
    if (!o.dump_smtlib.empty()) {
        fs::create_directories(o.dump_smtlib);
        for (const auto& d : r.definitions) {
            const std::string file = d.name + "_" + std::to_string(d.span.line) + "_" + std::to_string(d.span.column) + ".smt2";
            write_output((fs::path(o.dump_smtlib) / file).string(), smtlib_for(d.constraint, r.signature, cfg));
        }
    }
    if (o.stats) {
        std::cerr << "definitions: " << r.definitions.size() << "\n"
                  << "solver calls: " << r.solver_calls << "\n"
                  << "backend calls: " << r.backend_calls << "\n"
                  << "elided: " << r.elided << "\n";
    }
    // a definite finding outranks an undecided definition
    if (r.any_unsafe()) {
        return 1;
    }
    return r.any_unknown() ? 2 : 0;
}

int run_translate(const Options& o) {
    const ConstraintProblem p = parse_constraint_file(read_input(o.input));
    const SolverConfig cfg = make_config(o);
    if (o.to == "smtlib") {
        std::cout << smtlib_for(p.formula, p.signature, cfg);
        return 0;
    }
    // the monadic theory is shown for the formula as written, projections aside
    const Formula f = o.approx_proj ? approximate_projections(p.formula)
                                    : eliminate_projections(p.formula, p.signature, cfg.projection_rule);
    std::cout << monadic::to_string(monadic::formula_to_monadic(f, p.signature));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"set-constraint solver and pattern-match safety analysis"};
    app.require_subcommand(1);
    Options o;

    auto add_backend = [&](CLI::App* sub) {
        sub->add_option("--backend", o.backend, "oracle, or an SMT solver executable (default: $SETPAT_SMT, else oracle)");
        sub->add_option("--backend-arg", o.backend_args, "extra argument for the solver (repeatable)");
        sub->add_option("--timeout", o.timeout_ms, "solver timeout in ms")->check(CLI::PositiveNumber);
        sub->add_option("--oracle-max-n", o.oracle_max_n, "largest base-predicate count the oracle will try");
        sub->add_option("--oracle-max-checks", o.oracle_max_checks, "oracle work limit");
        sub->add_flag("--get-model", o.get_model, "ask the SMT solver for a model");
        sub->add_flag("--logic-all", o.logic_all, "declare logic ALL instead of UFBV");
        sub->add_flag("--no-solver-hints", o.no_hints, "leave out solver-specific options");
        sub->add_flag("--stats", o.stats, "pipeline counters on stderr");
    };
    auto add_pipeline = [&](CLI::App* sub) {
        sub->add_flag("--no-simplify", o.no_simplify, "skip simplification (and the reductions)");
        sub->add_flag("--no-reduce", o.no_reduce, "skip ground decisions and variable elimination");
        sub->add_flag("--approx-proj", o.approx_proj, "replace projections by top instead of eliminating them");
        sub->add_flag("--image-axiom", o.image_axiom, "every domain element is some constructor's image");
        sub->add_option("--projection-rule", o.projection_rule, "restricted or literal")
            ->check(CLI::IsMember({"restricted", "literal"}));
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "decide a constraint file");
    solve_cmd->add_option("file", o.input, "constraint file")->required();
    solve_cmd->add_option("--dump-smtlib", o.dump_smtlib, "write the SMT-LIB script to this file");
    add_backend(solve_cmd);
    add_pipeline(solve_cmd);

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "check that every match covers the values reaching it");
    analyze_cmd->add_option("file", o.input, "program")->required();
    analyze_cmd->add_option("--dump-constraints", o.dump_constraints, "write every definition's constraint to this file");
    analyze_cmd->add_option("--dump-smtlib", o.dump_smtlib, "write one SMT-LIB script per definition into this directory");
    add_backend(analyze_cmd);
    add_pipeline(analyze_cmd);

    CLI::App* translate_cmd = app.add_subcommand("translate", "print the monadic theory or the SMT-LIB script");
    translate_cmd->add_option("file", o.input, "constraint file")->required();
    translate_cmd->add_option("--to", o.to, "monadic or smtlib")->check(CLI::IsMember({"monadic", "smtlib"}));
    add_backend(translate_cmd);
    add_pipeline(translate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*solve_cmd) {
            return run_solve(o);
        }
        if (*analyze_cmd) {
            return run_analyze(o);
        }
        return run_translate(o);
    } catch (const lang::LangError& e) {
        std::cerr << o.input << ":" << e.what() << "\n";
    } catch (const ParseError& e) {
        std::cerr << o.input << ":" << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "setpat: " << e.what() << "\n";
    }
    return kUsage;
}
