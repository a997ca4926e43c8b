#pragma once

// End-to-end satisfiability check for a constraint formula: projection
// elimination, simplification, short-circuits, then the SMT backend or the
// oracle.

#include <cstdint>
#include <optional>
#include <string>

#include "setpat/backend.hpp"
#include "setpat/expr.hpp"
#include "setpat/oracle.hpp"
#include "setpat/projection.hpp"
#include "setpat/verdict.hpp"

namespace setpat {

enum class SolverMode { Smt, Oracle };

struct SolverConfig {
    SolverMode mode = SolverMode::Oracle;
    BackendConfig backend;
    oracle::Budget budget;
    bool simplify = true;
    /// Ground-atom decision and variable elimination after simplification.
    bool reduce = true;
    bool image_axiom = false;
    /// Emit "ALL" instead of "UFBV".
    bool logic_all = false;
    /// See smt::EncodeOptions::solver_hints.
    bool solver_hints = true;
    ProjectionRule projection_rule = ProjectionRule::Restricted;
    /// Replace every projection by ⊤ instead of eliminating it exactly.
    bool approximate_projections = false;
};

struct SolveTrace {
    std::optional<Formula> after_projections;
    std::optional<Formula> simplified;
    std::optional<Formula> reduced;
    /// Which short-circuit decided the verdict, if any.
    std::string short_circuit;
    /// Signature actually handed to the oracle or the encoder.
    std::optional<Signature> reduced_signature;
    std::size_t width = 0;
    std::string smtlib;
    bool backend_called = false;
    std::uint64_t oracle_checks = 0;
};

struct SolveOutcome {
    Verdict verdict;
    SolveTrace trace;
};

SolveOutcome solve(const Formula& f, const Signature& sig, const SolverConfig& cfg = {});

/// The SMT-LIB text solve() would hand to the backend. When the pipeline
/// decides the formula first, a three-line script asserting the answer.
std::string smtlib_for(const Formula& f, const Signature& sig, const SolverConfig& cfg = {});

/// Drops the symbols `f` never mentions. Terms headed by them are only
/// observable through variables, so they are replaced by a stand-in with the
/// same number of such terms: the unmentioned constants when all of them are
/// constants, otherwise one fresh unary symbol (plus one constant when the
/// mentioned symbols have none).
Signature reduce_signature(const Formula& f, const Signature& sig);

/// Replaces every projection by ⊤.
Formula approximate_projections(const Formula& f);

}  // namespace setpat
