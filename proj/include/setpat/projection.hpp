#pragma once

#include "setpat/expr.hpp"

namespace setpat {

/// Side condition guarding the fresh variable X_j that replaces f^-j(E).
enum class ProjectionRule {
    /// (E ∩ f(⊤,…,⊤) = ⊥ ⇔ X_j = ⊥). Restricting E to f-headed terms keeps
    /// the rewrite equisatisfiable when E also holds terms of other heads.
    Restricted,
    /// (E = ⊥ ⇔ X_j = ⊥), the literal textbook form. Kept for comparison; it
    /// rejects models in which E is nonempty but holds no f-headed term.
    Literal,
};

/// Replaces every projection f^-j(E) (innermost first) by a fresh X_j and
/// conjoins (E ∩ f(⊤,…,⊤)) = f(X_1,…,X_a) together with the emptiness side
/// condition selected by `rule`. Fresh names come from `fresh`.
Formula eliminate_projections(const Formula& f, const Signature& sig, FreshNames& fresh,
                              ProjectionRule rule = ProjectionRule::Restricted);

/// Convenience overload with a private "$p" name supply.
Formula eliminate_projections(const Formula& f, const Signature& sig,
                              ProjectionRule rule = ProjectionRule::Restricted);

}  // namespace setpat
