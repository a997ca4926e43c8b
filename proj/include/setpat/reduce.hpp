#pragma once

// Satisfiability-preserving reductions applied inside the solver pipeline,
// after the plain simplification passes. The constraints emitted by the
// match analysis are dominated by ground inclusions and by variables that
// are either defined by an equation or only occur monotonically; removing
// them usually leaves nothing for the backend.

#include <optional>

#include "setpat/expr.hpp"

namespace setpat {

/// Nonemptiness of a ground expression (no variables, no projections) in
/// the Herbrand universe of `sig`. nullopt when the case split gets too big.
std::optional<bool> ground_nonempty(const SetExpr& e, const Signature& sig);

/// Replaces every ground atom by its truth value and folds constants.
Formula decide_ground(const Formula& f, const Signature& sig);

/// One round of variable elimination:
///  - a top-level X = E, ⊤ ⊆ X or X ⊆ ⊥ substitutes X everywhere;
///  - a variable whose occurrences all push in one direction is set to ⊤ or ⊥;
///  - X = E inside a positive conjunction that holds every occurrence of X
///    is substituted there;
///  - a guarded definition (G ∨ X = E) is substituted when every other
///    top-level conjunct mentioning X is also guarded by G;
///  - a variable that only occurs as a bound, L ⊆ X or X ⊆ R possibly
///    padded with ∪ / ∩, is replaced by L ⊆ R for every pair of bounds.
/// X never occurs in E. Returns the input unchanged when nothing applies.
Formula eliminate_variables(const Formula& f);

/// simplify_formula, decide_ground and eliminate_variables to a fixpoint.
Formula reduce_formula(const Formula& f, const Signature& sig);

}  // namespace setpat
