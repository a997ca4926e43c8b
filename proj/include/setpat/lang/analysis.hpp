#pragma once

// Pattern match analysis. Walks a typed program, emits set constraints, and
// checks each let definition's constraint with the solver.

#include <string>
#include <vector>

#include "setpat/expr.hpp"
#include "setpat/lang/annot.hpp"
#include "setpat/lang/ast.hpp"
#include "setpat/solver.hpp"

namespace setpat::lang {

/// ∀X̄,V̄. C ⇒ T. Monomorphic bindings have empty binders and C = true.
struct AnnScheme {
    std::vector<int> type_vars;
    std::vector<std::string> set_vars;
    Formula constraint = Formula::truth();
    AnnTypePtr body;
};

enum class Safety { Safe, Unsafe, Unknown };

const char* to_string(Safety s);

struct DefinitionReport {
    std::string name;
    Span span;
    /// The let's satisfiability check as emitted, before simplification.
    Formula constraint = Formula::truth();
    Safety safety = Safety::Safe;
    Verdict verdict;
    /// Matches whose safety constraints take part in the conflict.
    std::vector<Span> offending;
    bool solver_called = false;
    /// Why the verdict is Unknown, or a short note for Safe/Unsafe.
    std::string detail;
    /// SMT-LIB text sent to the backend, when one was used.
    std::string smtlib;
};

struct AnalysisReport {
    /// In source order.
    std::vector<DefinitionReport> definitions;
    /// Solver invocations for let checks (oracle or SMT).
    std::size_t solver_calls = 0;
    /// Of those, the ones that reached the external SMT solver.
    std::size_t backend_calls = 0;
    /// Let checks decided without the solver: no safety constraint left.
    std::size_t elided = 0;
    Signature signature;

    [[nodiscard]] bool all_safe() const;
    [[nodiscard]] bool any_unsafe() const;
    [[nodiscard]] bool any_unknown() const;
};

/// Constructors of every datatype plus the seed constant "opaque", which
/// stands for the values of the builtin base types.
Signature program_signature(const DataEnv& data);

/// Typechecks `program` (throws TypeError) and analyzes it.
AnalysisReport analyze_program(Program& program, const SolverConfig& cfg = {});

}  // namespace setpat::lang
