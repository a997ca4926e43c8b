#include "setpat/projection.hpp"

#include <stdexcept>

namespace setpat {

Formula eliminate_projections(const Formula& f, const Signature& sig, FreshNames& fresh, ProjectionRule rule) {
    if (!contains_proj(f)) {
        return f;
    }
    std::vector<Formula> side;
    auto eliminate = [&](const SetExpr& n) -> std::optional<SetExpr> {
        if (n.kind() != ExprKind::Proj) {
            return std::nullopt;
        }
        auto sym = sig.find(n.name());
        if (!sym) {
            throw std::invalid_argument("undeclared function symbol '" + n.name() + "' in projection");
        }
        const std::size_t arity = sig.symbols()[*sym].arity;
        const std::size_t j = n.proj_index();
        if (j < 1 || j > arity) {
            throw std::invalid_argument("projection index out of range for '" + n.name() + "'");
        }
        std::vector<SetExpr> fresh_vars;
        fresh_vars.reserve(arity);
        for (std::size_t k = 0; k < arity; ++k) {
            fresh_vars.push_back(SetExpr::var(fresh.next()));
        }
        const SetExpr& e = n.arg(0);
        const SetExpr head_only = SetExpr::inter(e, SetExpr::app(n.name(), std::vector<SetExpr>(arity, SetExpr::top())));
        side.push_back(Formula::equal(head_only, SetExpr::app(n.name(), fresh_vars)));
        const SetExpr& guarded = rule == ProjectionRule::Restricted ? head_only : e;
        side.push_back(Formula::iff(Formula::equal(guarded, SetExpr::bot()),
                                    Formula::equal(fresh_vars[j - 1], SetExpr::bot())));
        return fresh_vars[j - 1];
    };
    Formula body = map_exprs(f, [&](const SetExpr& e) { return rewrite(e, eliminate); });
    std::vector<Formula> parts;
    parts.reserve(side.size() + 1);
    parts.push_back(std::move(body));
    for (auto& s : side) {
        parts.push_back(std::move(s));
    }
    return Formula::conj(std::move(parts));
}

Formula eliminate_projections(const Formula& f, const Signature& sig, ProjectionRule rule) {
    FreshNames fresh("$p");
    return eliminate_projections(f, sig, fresh, rule);
}

}  // namespace setpat
