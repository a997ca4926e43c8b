#pragma once

// Shared helpers for the unit and acceptance tests: parsing shortcuts, the
// z3 backend configuration, and seeded random formula generators.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "setpat/backend.hpp"
#include "setpat/constraint_io.hpp"
#include "setpat/expr.hpp"
#include "setpat/predicate_index.hpp"

namespace setpat::testing {

inline ConstraintProblem parse(std::string_view text) { return parse_constraint_file(text); }

/// z3 from $SETPAT_SMT or the path found at configure time.
inline std::optional<BackendConfig> z3_backend() {
    BackendConfig cfg;
    if (auto env = BackendConfig::path_from_env()) {
        cfg.path = *env;
    } else {
        cfg.path = SETPAT_Z3_PATH;
    }
    if (cfg.path.empty()) {
        return std::nullopt;
    }
    cfg.timeout = std::chrono::milliseconds(20000);
    return cfg;
}

inline std::string data_path(const std::string& name) { return std::string(SETPAT_TEST_DATA) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class RandomFormulas {
  public:
    RandomFormulas(std::uint64_t seed, Signature sig, std::vector<std::string> vars)
        : rng_(seed), sig_(std::move(sig)), vars_(std::move(vars)) {}

    int max_depth = 3;
    std::size_t max_atoms = 4;
    std::size_t max_bases = 3;

    SetExpr expr(int depth) {
        const int leaf_kinds = 4;
        const int inner_kinds = 4;
        const int pick = depth <= 0 ? uniform(0, leaf_kinds - 1) : uniform(0, leaf_kinds + inner_kinds - 1);
        switch (pick) {
        case 0:
        case 1:
            return SetExpr::var(vars_[index(vars_.size())]);
        case 2:
            return coin(0.5) ? SetExpr::top() : SetExpr::bot();
        case 3:
            return application(depth);
        case 4:
            return SetExpr::union_of(expr(depth - 1), expr(depth - 1));
        case 5:
            return SetExpr::inter(expr(depth - 1), expr(depth - 1));
        case 6:
            return SetExpr::neg(expr(depth - 1));
        default:
            return application(depth);
        }
    }

    Formula atom() {
        return Formula::atom(expr(uniform(0, max_depth)), expr(uniform(0, max_depth)));
    }

    /// A boolean combination of up to max_atoms atoms with at most
    /// max_bases base predicates.
    Formula formula() {
        while (true) {
            const std::size_t n = 1 + index(max_atoms);
            std::vector<Formula> atoms;
            for (std::size_t i = 0; i < n; ++i) {
                atoms.push_back(atom());
            }
            Formula f = combine(atoms, 0, atoms.size());
            if (index_base_predicates(f).size() <= max_bases) {
                return f;
            }
        }
    }

    /// Conjunction of literals only.
    Formula conjunction() {
        while (true) {
            const std::size_t n = 1 + index(max_atoms);
            std::vector<Formula> parts;
            for (std::size_t i = 0; i < n; ++i) {
                Formula a = atom();
                parts.push_back(coin(0.35) ? Formula::negate(a) : a);
            }
            Formula f = Formula::conj(parts);
            if (index_base_predicates(f).size() <= max_bases) {
                return f;
            }
        }
    }

    /// A formula with exactly one projection of `symbol`, not under an
    /// application; its argument is projection-free.
    Formula with_projection(const std::string& symbol, std::size_t arity) {
        while (true) {
            SetExpr p = SetExpr::proj(symbol, 1 + index(arity), expr(uniform(0, 2)));
            SetExpr other = expr(uniform(0, 1));
            if (coin(0.5)) {
                other = SetExpr::inter(p, other);
            } else {
                other = p;
            }
            Formula pa = coin(0.5) ? Formula::atom(other, expr(uniform(0, 1))) : Formula::atom(expr(uniform(0, 1)), other);
            if (coin(0.4)) {
                pa = Formula::negate(pa);
            }
            std::vector<Formula> parts{pa};
            const std::size_t extra = index(max_atoms);
            for (std::size_t i = 0; i < extra; ++i) {
                Formula a = atom();
                parts.push_back(coin(0.35) ? Formula::negate(a) : a);
            }
            std::shuffle(parts.begin(), parts.end(), rng_);
            Formula f = coin(0.7) ? Formula::conj(parts) : combine(parts, 0, parts.size());
            // count bases ignoring the projection node itself
            Formula probe = map_exprs(f, [&](const SetExpr& e) {
                return rewrite(e, [](const SetExpr& n) -> std::optional<SetExpr> {
                    if (n.kind() == ExprKind::Proj) {
                        return n.arg(0);
                    }
                    return std::nullopt;
                });
            });
            if (index_base_predicates(probe).size() <= max_bases) {
                return f;
            }
        }
    }

    bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::mt19937_64& rng() { return rng_; }

  private:
    SetExpr application(int depth) {
        const auto& s = sig_.symbols()[index(sig_.size())];
        std::vector<SetExpr> args;
        for (std::size_t i = 0; i < s.arity; ++i) {
            args.push_back(depth <= 0 ? (coin(0.5) ? SetExpr::top() : SetExpr::var(vars_[index(vars_.size())]))
                                      : expr(depth - 1));
        }
        return SetExpr::app(s.name, std::move(args));
    }

    Formula combine(const std::vector<Formula>& atoms, std::size_t lo, std::size_t hi) {
        if (hi - lo == 1) {
            return coin(0.25) ? Formula::negate(atoms[lo]) : atoms[lo];
        }
        const std::size_t mid = lo + 1 + index(hi - lo - 1);
        Formula l = combine(atoms, lo, mid);
        Formula r = combine(atoms, mid, hi);
        switch (uniform(0, 3)) {
        case 0:
            return Formula::conj(l, r);
        case 1:
            return Formula::disj({l, r});
        case 2:
            return Formula::implies(l, r);
        default:
            return Formula::negate(Formula::conj(l, r));
        }
    }

    std::mt19937_64 rng_;
    Signature sig_;
    std::vector<std::string> vars_;
};

}  // namespace setpat::testing
