#pragma once

#include <string>

namespace setpat {

enum class VerdictKind { Sat, Unsat, Unknown };

enum class UnknownReason { None, Timeout, SolverUnknown, BackendError, Budget, Unsupported };

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    UnknownReason reason = UnknownReason::None;
    std::string detail;
    /// Full solver output for Sat (includes the model when one was requested).
    std::string raw_output;

    static Verdict sat(std::string raw = {}) { return {VerdictKind::Sat, UnknownReason::None, {}, std::move(raw)}; }
    static Verdict unsat() { return {VerdictKind::Unsat, UnknownReason::None, {}, {}}; }
    static Verdict unknown(UnknownReason why, std::string detail = {}) {
        return {VerdictKind::Unknown, why, std::move(detail), {}};
    }

    [[nodiscard]] bool is_sat() const { return kind == VerdictKind::Sat; }
    [[nodiscard]] bool is_unsat() const { return kind == VerdictKind::Unsat; }
    [[nodiscard]] bool is_definite() const { return kind != VerdictKind::Unknown; }
};

inline const char* to_string(VerdictKind k) {
    switch (k) {
    case VerdictKind::Sat:
        return "sat";
    case VerdictKind::Unsat:
        return "unsat";
    case VerdictKind::Unknown:
        return "unknown";
    }
    return "unknown";
}

inline const char* to_string(UnknownReason r) {
    switch (r) {
    case UnknownReason::None:
        return "none";
    case UnknownReason::Timeout:
        return "timeout";
    case UnknownReason::SolverUnknown:
        return "solver-said-unknown";
    case UnknownReason::BackendError:
        return "backend-error";
    case UnknownReason::Budget:
        return "budget";
    case UnknownReason::Unsupported:
        return "unsupported";
    }
    return "none";
}

}  // namespace setpat
