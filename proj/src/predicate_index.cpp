#include "setpat/predicate_index.hpp"

#include <stdexcept>

namespace setpat {

std::optional<std::size_t> PredicateIndex::find(const SetExpr& e) const {
    auto it = position_of.find(e);
    if (it == position_of.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t PredicateIndex::position(const SetExpr& e) const {
    auto it = position_of.find(e);
    if (it == position_of.end()) {
        throw std::logic_error("no base predicate for " + to_pretty(e));
    }
    return it->second;
}

void PredicateIndex::add_bases(const SetExpr& e) {
    if (e.kind() == ExprKind::Proj) {
        throw std::invalid_argument("projection " + to_pretty(e) + " must be eliminated before indexing");
    }
    if (e.is_base() && !position_of.contains(e)) {
        position_of.emplace(e, bases.size());
        bases.push_back(e);
    }
    for (const auto& a : e.args()) {
        add_bases(a);
    }
}

PredicateIndex index_base_predicates(const Formula& f) {
    PredicateIndex idx;
    for (const auto& a : collect_atoms(f)) {
        idx.add_bases(a.lhs);
        idx.add_bases(a.rhs);
    }
    return idx;
}

}  // namespace setpat
