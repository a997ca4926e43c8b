#pragma once

// Independent decision procedure for the translated problem: search finite
// models whose domain is a subset of B^N (one bit per base predicate) and
// whose function tables respect the known App bits.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "setpat/expr.hpp"
#include "setpat/smt.hpp"
#include "setpat/verdict.hpp"

namespace setpat::oracle {

/// An N-bit sequence; bit j is the truth of base predicate j.
using Element = std::uint64_t;

struct Budget {
    std::size_t max_n = 3;
    std::uint64_t max_checks = 10'000'000;
};

struct FiniteModel {
    std::size_t width = 0;
    std::vector<SetExpr> bases;
    /// Sorted ascending.
    std::vector<Element> domain;
    /// Per signature symbol: argument tuple over the domain -> result.
    std::vector<std::map<std::vector<Element>, Element>> tables;
    /// Distinct atoms of the formula (collect_atoms order), whether each
    /// holds, and for a failing atom an element of the domain violating it.
    std::vector<Atom> atoms;
    std::vector<bool> atom_truth;
    std::vector<std::optional<Element>> witnesses;

    [[nodiscard]] bool contains(Element e) const;
    [[nodiscard]] bool bit(Element e, const SetExpr& base) const;
};

enum class Strategy {
    Auto,
    /// Every domain D ⊆ B^N by cardinality, then colex order of the subset
    /// mask. Needs N ≤ 6.
    Exhaustive,
    /// Guesses atom truth values and computes the largest closed domain
    /// inside the allowed region. Exact when every symbol has arity ≤ 1.
    ClosureSearch,
};

struct Options {
    Budget budget;
    bool image_axiom = false;
    /// Run the exhaustive layer scan with OpenMP.
    bool parallel = false;
    Strategy strategy = Strategy::Auto;
};

struct Result {
    Verdict verdict;
    std::optional<FiniteModel> model;
    std::uint64_t checks = 0;
    Strategy used = Strategy::Auto;
    std::size_t width = 0;
};

/// Decides `f` over `sig`. Projections are evaluated directly on the model's
/// function tables when they do not occur under an application and their
/// argument is projection-free; other projection uses give Unknown.
Result solve(const Formula& f, const Signature& sig, const Options& opts = {});

/// Verdict only.
Verdict oracle_solve(const Formula& f, const Signature& sig, const Budget& budget = {});

/// Evaluates every assertion of `script` in `model`, interpreting its
/// declarations by role. Throws std::invalid_argument when the model's bases
/// differ from the script's.
bool replay(const smt::SmtScript& script, const FiniteModel& model);

const char* to_string(Strategy s);

}  // namespace setpat::oracle
