#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "setpat/expr.hpp"

namespace setpat {

/// Bit positions for the base predicates (set variables and function
/// applications) of a projection-free formula. Composite expressions get no
/// bit; their predicates are computed from their operands.
struct PredicateIndex {
    std::vector<SetExpr> bases;
    std::unordered_map<SetExpr, std::size_t, SetExprHash> position_of;

    [[nodiscard]] std::size_t size() const { return bases.size(); }
    [[nodiscard]] std::optional<std::size_t> find(const SetExpr& e) const;
    /// Throws std::logic_error when `e` has no bit.
    [[nodiscard]] std::size_t position(const SetExpr& e) const;

    /// Adds the bases of `e` in pre-order, skipping those already present.
    void add_bases(const SetExpr& e);
};

/// Throws std::invalid_argument when `f` still contains projections.
PredicateIndex index_base_predicates(const Formula& f);

}  // namespace setpat
