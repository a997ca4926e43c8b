#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "setpat/smt.hpp"
#include "setpat/verdict.hpp"

namespace setpat {

struct BackendConfig {
    /// Executable name or path; bare names are looked up on PATH.
    std::string path;
    /// Extra arguments placed before the script file argument.
    std::vector<std::string> args;
    std::chrono::milliseconds timeout{10000};
    bool get_model = false;

    /// Path from $SETPAT_SMT, if set and non-empty.
    static std::optional<std::string> path_from_env();
};

/// Writes `script` to a temporary file and runs the backend on it. The first
/// output token decides the verdict: "sat", "unsat", otherwise Unknown.
Verdict run_backend(const smt::SmtScript& script, const BackendConfig& cfg);

/// Same contract for already-serialized SMT-LIB text.
Verdict run_backend_text(const std::string& smtlib, const BackendConfig& cfg);

}  // namespace setpat
