#include "setpat/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "setpat/predicate_index.hpp"

namespace setpat::oracle {

bool FiniteModel::contains(Element e) const { return std::binary_search(domain.begin(), domain.end(), e); }

bool FiniteModel::bit(Element e, const SetExpr& base) const {
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (bases[i] == base) {
            return ((e >> i) & 1u) != 0;
        }
    }
    throw std::invalid_argument("no base " + to_pretty(base) + " in model");
}

const char* to_string(Strategy s) {
    switch (s) {
    case Strategy::Auto:
        return "auto";
    case Strategy::Exhaustive:
        return "exhaustive";
    case Strategy::ClosureSearch:
        return "closure-search";
    }
    return "auto";
}

namespace {

// Largest width the exhaustive scan handles: domains are masks over the 2^N
// possible elements and must fit in 64 bits.
constexpr std::size_t kExhaustiveMaxN = 6;
constexpr std::size_t kClosureMaxN = 20;
constexpr std::size_t kMaxTupleTable = std::size_t{1} << 22;

using Mask = std::uint64_t;

struct FNode {
    FormulaKind kind = FormulaKind::Atom;
    std::size_t atom = 0;
    std::vector<FNode> kids;
};

struct AppBase {
    std::size_t pos;
    std::size_t symbol;
    std::vector<SetExpr> args;
};

struct ProjNode {
    SetExpr node;
    std::size_t symbol;
    std::size_t index;  // 0-based argument position
    SetExpr arg;
};

struct Problem {
    std::size_t n = 0;
    std::size_t universe = 1;
    std::vector<SetExpr> bases;
    std::unordered_map<SetExpr, std::size_t, SetExprHash> pos;
    std::vector<Atom> atoms;
    FNode root;
    Element app_bits = 0;
    std::vector<AppBase> apps;
    std::vector<std::size_t> arity;
    std::vector<ProjNode> projs;
    std::unordered_map<SetExpr, std::size_t, SetExprHash> proj_id;
};

class Unsupported : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

void index_allowing_proj(const SetExpr& e, PredicateIndex& idx) {
    if (!contains_proj(e)) {
        idx.add_bases(e);
        return;
    }
    for (const auto& a : e.args()) {
        index_allowing_proj(a, idx);
    }
}

void collect_projs(const SetExpr& e, const Signature& sig, Problem& p, bool under_app) {
    if (e.kind() == ExprKind::Proj) {
        if (under_app) {
            throw Unsupported("projection under a constructor application");
        }
        if (contains_proj(e.arg(0))) {
            throw Unsupported("nested projection");
        }
        if (!p.proj_id.contains(e)) {
            p.proj_id.emplace(e, p.projs.size());
            p.projs.push_back(ProjNode{e, *sig.find(e.name()), e.proj_index() - 1, e.arg(0)});
        }
        return;
    }
    for (const auto& a : e.args()) {
        collect_projs(a, sig, p, under_app || e.is_app());
    }
}

FNode compile_formula(const Formula& f, const std::unordered_map<Atom, std::size_t, AtomHash>& ids) {
    FNode n;
    n.kind = f.kind();
    if (f.kind() == FormulaKind::Atom) {
        n.atom = ids.at(f.as_atom());
        return n;
    }
    for (const auto& c : f.children()) {
        n.kids.push_back(compile_formula(c, ids));
    }
    return n;
}

template <typename Truth>
bool eval_formula(const FNode& n, const Truth& truth) {
    switch (n.kind) {
    case FormulaKind::Atom:
        return truth(n.atom);
    case FormulaKind::Not:
        return !eval_formula(n.kids[0], truth);
    case FormulaKind::And:
        for (const auto& k : n.kids) {
            if (!eval_formula(k, truth)) {
                return false;
            }
        }
        return true;
    case FormulaKind::Or:
        for (const auto& k : n.kids) {
            if (eval_formula(k, truth)) {
                return true;
            }
        }
        return false;
    }
    return false;
}

Problem build_problem(const Formula& f, const Signature& sig) {
    check_well_formed(f, sig);
    Problem p;
    p.atoms = collect_atoms(f);
    std::unordered_map<Atom, std::size_t, AtomHash> ids;
    for (std::size_t i = 0; i < p.atoms.size(); ++i) {
        ids.emplace(p.atoms[i], i);
    }
    p.root = compile_formula(f, ids);

    PredicateIndex idx;
    for (const auto& a : p.atoms) {
        index_allowing_proj(a.lhs, idx);
        index_allowing_proj(a.rhs, idx);
        collect_projs(a.lhs, sig, p, false);
        collect_projs(a.rhs, sig, p, false);
    }
    p.bases = idx.bases;
    p.pos = idx.position_of;
    p.n = p.bases.size();
    for (const auto& s : sig.symbols()) {
        p.arity.push_back(s.arity);
    }
    for (std::size_t i = 0; i < p.bases.size(); ++i) {
        const auto& b = p.bases[i];
        if (b.is_app()) {
            p.app_bits |= Element{1} << i;
            std::vector<SetExpr> args(b.args().begin(), b.args().end());
            p.apps.push_back(AppBase{i, *sig.find(b.name()), std::move(args)});
        }
    }
    return p;
}

bool holds(const Problem& p, const SetExpr& e, Element x) {
    switch (e.kind()) {
    case ExprKind::Var:
    case ExprKind::App:
        return ((x >> p.pos.at(e)) & 1u) != 0;
    case ExprKind::Top:
        return true;
    case ExprKind::Bot:
        return false;
    case ExprKind::Union:
        return holds(p, e.arg(0), x) || holds(p, e.arg(1), x);
    case ExprKind::Inter:
        return holds(p, e.arg(0), x) && holds(p, e.arg(1), x);
    case ExprKind::Neg:
        return !holds(p, e.arg(0), x);
    case ExprKind::Proj:
        break;
    }
    throw std::logic_error("projection has no per-element predicate");
}

/// App bits forced on the image of `symbol` applied to `tuple`.
Element pattern(const Problem& p, std::size_t symbol, const Element* tuple) {
    Element out = 0;
    for (const auto& ab : p.apps) {
        if (ab.symbol != symbol) {
            continue;
        }
        bool all = true;
        for (std::size_t j = 0; j < ab.args.size() && all; ++j) {
            all = holds(p, ab.args[j], tuple[j]);
        }
        if (all) {
            out |= Element{1} << ab.pos;
        }
    }
    return out;
}

std::size_t ipow(std::size_t base, std::size_t e) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (r > kMaxTupleTable / std::max<std::size_t>(base, 1)) {
            return kMaxTupleTable + 1;
        }
        r *= base;
    }
    return r;
}

/// Calls fn(tuple, code) for every tuple over `elems` of length `arity`;
/// code is the mixed-radix index of the tuple in the full universe.
template <typename Fn>
bool for_each_tuple(const std::vector<Element>& elems, std::size_t arity, std::size_t universe, Fn&& fn) {
    if (arity == 0) {
        return fn(static_cast<const Element*>(nullptr), std::size_t{0});
    }
    if (elems.empty()) {
        return true;
    }
    std::vector<std::size_t> at(arity, 0);
    std::vector<Element> tuple(arity, elems[0]);
    while (true) {
        std::size_t code = 0;
        for (std::size_t j = arity; j-- > 0;) {
            code = code * universe + tuple[j];
        }
        if (!fn(tuple.data(), code)) {
            return false;
        }
        std::size_t j = 0;
        while (j < arity) {
            if (++at[j] < elems.size()) {
                tuple[j] = elems[at[j]];
                break;
            }
            at[j] = 0;
            tuple[j] = elems[0];
            ++j;
        }
        if (j == arity) {
            return true;
        }
    }
}

std::vector<Element> members(Mask d) {
    std::vector<Element> out;
    while (d != 0) {
        out.push_back(static_cast<Element>(std::countr_zero(d)));
        d &= d - 1;
    }
    return out;
}

// Hands every element to one group whose mask contains it, no group taking
// more elements than its capacity. Plain augmenting paths; the sizes here
// are tiny.
std::optional<std::vector<std::size_t>> cover_assignment(const std::vector<Element>& elems,
                                                         const std::vector<Mask>& masks,
                                                         const std::vector<std::size_t>& caps) {
    std::vector<std::vector<std::size_t>> held(masks.size());
    std::vector<std::size_t> owner(elems.size(), masks.size());
    std::vector<char> seen;
    std::function<bool(std::size_t)> place = [&](std::size_t i) {
        for (std::size_t g = 0; g < masks.size(); ++g) {
            if (seen[g] || !((masks[g] >> elems[i]) & 1u)) {
                continue;
            }
            seen[g] = 1;
            if (held[g].size() < caps[g]) {
                held[g].push_back(i);
                owner[i] = g;
                return true;
            }
            for (std::size_t& j : held[g]) {
                const std::size_t prev = j;
                if (place(prev)) {
                    // prev moved on; i takes its seat
                    j = i;
                    owner[i] = g;
                    return true;
                }
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < elems.size(); ++i) {
        seen.assign(masks.size(), 0);
        if (!place(i)) {
            return std::nullopt;
        }
    }
    return owner;
}

// ============================================================================
// Exhaustive scan over domain masks
// ============================================================================

class Exhaustive {
  public:
    Exhaustive(const Problem& p, const Options& opts) : p_(p), opts_(opts) {
        const std::size_t u = p.universe;
        full_ = u == 64 ? ~Mask{0} : ((Mask{1} << u) - 1);
        base_mask_.assign(p.n, 0);
        for (std::size_t e = 0; e < u; ++e) {
            for (std::size_t i = 0; i < p.n; ++i) {
                if ((e >> i) & 1u) {
                    base_mask_[i] |= Mask{1} << e;
                }
            }
        }
        std::vector<Mask> by_pattern(u, 0);
        for (std::size_t e = 0; e < u; ++e) {
            by_pattern[e & p.app_bits] |= Mask{1} << e;
        }
        for (std::size_t s = 0; s < p.arity.size(); ++s) {
            const std::size_t count = ipow(u, p.arity[s]);
            if (count > kMaxTupleTable) {
                throw Unsupported("function table too large");
            }
            std::vector<Element> all(u);
            for (std::size_t e = 0; e < u; ++e) {
                all[e] = e;
            }
            std::vector<Element> pats(count, 0);
            for_each_tuple(all, p.arity[s], u, [&](const Element* t, std::size_t code) {
                pats[code] = pattern(p, s, t);
                return true;
            });
            std::vector<Mask> req(count, 0);
            for (std::size_t c = 0; c < count; ++c) {
                req[c] = by_pattern[pats[c]];
            }
            pattern_.push_back(std::move(pats));
            req_.push_back(std::move(req));
        }
        if (p.projs.empty()) {
            for (const auto& a : p.atoms) {
                bad_.push_back(mask_of(a.lhs, {}) & ~mask_of(a.rhs, {}) & full_);
            }
        }
        for (const auto& pr : p.projs) {
            proj_arg_.push_back(mask_of(pr.arg, {}));
        }
    }

    Result run() {
        Result r;
        r.used = Strategy::Exhaustive;
        r.width = p_.n;
        const std::uint64_t limit = opts_.budget.max_checks;
        const bool joint = !p_.projs.empty();
        const std::size_t u = p_.universe;
        for (std::size_t k = 0; k <= u; ++k) {
            // Masks with k members in increasing numeric (colex) order.
            std::vector<Mask> layer;
            Mask m = k == 0 ? 0 : (k == 64 ? ~Mask{0} : ((Mask{1} << k) - 1));
            const Mask last = k == 0 ? 0 : (full_ >> (u - k)) << (u - k);
            bool truncated = false;
            while (true) {
                if (r.checks + layer.size() >= limit) {
                    truncated = true;
                    break;
                }
                layer.push_back(m);
                if (m == last) {
                    break;
                }
                const Mask c = m & (~m + 1);
                const Mask rr = m + c;
                m = (((rr ^ m) >> 2) / c) | rr;
            }
            std::optional<std::size_t> hit;
            if (joint) {
                for (std::size_t i = 0; i < layer.size() && !hit; ++i) {
                    auto res = check_joint(layer[i], r.checks, limit);
                    if (res == JointResult::Sat) {
                        hit = i;
                    } else if (res == JointResult::Budget) {
                        r.verdict = budget_verdict();
                        return r;
                    }
                }
            } else if (opts_.parallel) {
                std::size_t best = std::numeric_limits<std::size_t>::max();
                const auto size = static_cast<std::int64_t>(layer.size());
#pragma omp parallel for reduction(min : best) schedule(static)
                for (std::int64_t i = 0; i < size; ++i) {
                    if (static_cast<std::size_t>(i) < best && check(layer[static_cast<std::size_t>(i)])) {
                        best = static_cast<std::size_t>(i);
                    }
                }
                if (best != std::numeric_limits<std::size_t>::max()) {
                    hit = best;
                }
                r.checks += hit ? *hit + 1 : layer.size();
            } else {
                for (std::size_t i = 0; i < layer.size(); ++i) {
                    ++r.checks;
                    if (check(layer[i])) {
                        hit = i;
                        break;
                    }
                }
            }
            if (hit) {
                r.verdict = Verdict::sat();
                r.model = joint ? joint_model_ : build_model(layer[*hit]);
                return r;
            }
            if (truncated) {
                r.verdict = budget_verdict();
                return r;
            }
        }
        r.verdict = Verdict::unsat();
        return r;
    }

  private:
    enum class JointResult { Sat, Exhausted, Budget };

    Verdict budget_verdict() const {
        return Verdict::unknown(UnknownReason::Budget,
                                "more than " + std::to_string(opts_.budget.max_checks) + " candidate models");
    }

    Mask mask_of(const SetExpr& e, const std::vector<Mask>& proj_sets) const {
        switch (e.kind()) {
        case ExprKind::Var:
        case ExprKind::App:
            return base_mask_[p_.pos.at(e)];
        case ExprKind::Top:
            return full_;
        case ExprKind::Bot:
            return 0;
        case ExprKind::Union:
            return mask_of(e.arg(0), proj_sets) | mask_of(e.arg(1), proj_sets);
        case ExprKind::Inter:
            return mask_of(e.arg(0), proj_sets) & mask_of(e.arg(1), proj_sets);
        case ExprKind::Neg:
            return ~mask_of(e.arg(0), proj_sets) & full_;
        case ExprKind::Proj:
            return proj_sets.at(p_.proj_id.at(e));
        }
        return 0;
    }

    bool closed(Mask d, const std::vector<Element>& elems) const {
        for (std::size_t s = 0; s < p_.arity.size(); ++s) {
            const auto& req = req_[s];
            bool ok = for_each_tuple(elems, p_.arity[s], p_.universe,
                                     [&](const Element*, std::size_t code) { return (d & req[code]) != 0; });
            if (!ok) {
                return false;
            }
        }
        return true;
    }

    /// Every element must be hit by some tuple whose forced pattern it
    /// carries, and each tuple hits exactly one element.
    bool images_cover(const std::vector<Element>& elems) const {
        std::vector<std::uint32_t> supply(p_.universe, 0);
        for (std::size_t s = 0; s < p_.arity.size(); ++s) {
            const auto& pats = pattern_[s];
            for_each_tuple(elems, p_.arity[s], p_.universe, [&](const Element*, std::size_t code) {
                ++supply[pats[code]];
                return true;
            });
        }
        std::vector<std::uint32_t> demand(p_.universe, 0);
        for (Element e : elems) {
            if (++demand[e & p_.app_bits] > supply[e & p_.app_bits]) {
                return false;
            }
        }
        return true;
    }

    bool check(Mask d) const {
        const auto elems = members(d);
        if (!closed(d, elems)) {
            return false;
        }
        if (opts_.image_axiom && !images_cover(elems)) {
            return false;
        }
        return eval_formula(p_.root, [&](std::size_t i) { return (d & bad_[i]) == 0; });
    }

    // Projections read the function tables, so the table of each symbol that
    // is projected is enumerated too, up to which projection arguments the
    // chosen image falls in.
    JointResult check_joint(Mask d, std::uint64_t& checks, std::uint64_t limit) {
        const auto elems = members(d);
        if (!closed(d, elems)) {
            ++checks;
            return checks >= limit ? JointResult::Budget : JointResult::Exhausted;
        }
        struct Slot {
            std::size_t symbol;
            std::vector<Element> tuple;
            std::vector<Element> options;  // one representative per class
            std::vector<Mask> classes;     // bit k: image lies in proj k's argument
            std::vector<Mask> members;     // all images in each class
        };
        std::vector<Slot> slots;
        // tuples of unprojected symbols, grouped by the images open to them
        std::vector<Mask> free_masks;
        std::vector<std::vector<std::pair<std::size_t, std::vector<Element>>>> free_tuples;
        for (std::size_t s = 0; s < p_.arity.size(); ++s) {
            std::vector<std::size_t> mine;
            for (std::size_t k = 0; k < p_.projs.size(); ++k) {
                if (p_.projs[k].symbol == s) {
                    mine.push_back(k);
                }
            }
            if (mine.empty()) {
                if (opts_.image_axiom) {
                    for_each_tuple(elems, p_.arity[s], p_.universe, [&](const Element* t, std::size_t code) {
                        const Mask m = d & req_[s][code];
                        auto it = std::find(free_masks.begin(), free_masks.end(), m);
                        if (it == free_masks.end()) {
                            free_masks.push_back(m);
                            free_tuples.emplace_back();
                            it = free_masks.end() - 1;
                        }
                        free_tuples[it - free_masks.begin()].emplace_back(s, std::vector<Element>(t, t + p_.arity[s]));
                        return true;
                    });
                }
                continue;
            }
            for_each_tuple(elems, p_.arity[s], p_.universe, [&](const Element* t, std::size_t code) {
                Slot slot{s, std::vector<Element>(t, t + p_.arity[s]), {}, {}, {}};
                for (Element e : members(d & req_[s][code])) {
                    Mask cls = 0;
                    for (std::size_t k : mine) {
                        if ((proj_arg_[k] >> e) & 1u) {
                            cls |= Mask{1} << k;
                        }
                    }
                    auto it = std::find(slot.classes.begin(), slot.classes.end(), cls);
                    if (it == slot.classes.end()) {
                        slot.classes.push_back(cls);
                        slot.options.push_back(e);
                        slot.members.push_back(0);
                        it = slot.classes.end() - 1;
                    }
                    slot.members[it - slot.classes.begin()] |= Mask{1} << e;
                }
                slots.push_back(std::move(slot));
                return true;
            });
        }
        std::vector<std::size_t> choice(slots.size(), 0);
        while (true) {
            ++checks;
            std::vector<Mask> sets(p_.projs.size(), 0);
            for (std::size_t i = 0; i < slots.size(); ++i) {
                const Mask cls = slots[i].classes[choice[i]];
                for (std::size_t k = 0; k < p_.projs.size(); ++k) {
                    if ((cls >> k) & 1u) {
                        sets[k] |= Mask{1} << slots[i].tuple[p_.projs[k].index];
                    }
                }
            }
            std::vector<Mask> bad;
            for (const auto& a : p_.atoms) {
                bad.push_back(d & mask_of(a.lhs, sets) & ~mask_of(a.rhs, sets));
            }
            std::optional<std::vector<std::size_t>> cover;
            bool holds = eval_formula(p_.root, [&](std::size_t i) { return bad[i] == 0; });
            if (holds && opts_.image_axiom) {
                // the chosen classes must still leave every element an image
                std::vector<Mask> masks = free_masks;
                std::vector<std::size_t> caps;
                for (const auto& ts : free_tuples) {
                    caps.push_back(ts.size());
                }
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    masks.push_back(slots[i].members[choice[i]]);
                    caps.push_back(1);
                }
                cover = cover_assignment(elems, masks, caps);
                holds = cover.has_value();
            }
            if (holds) {
                FiniteModel m = build_model(d, &bad);
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    m.tables[slots[i].symbol][slots[i].tuple] = slots[i].options[choice[i]];
                }
                if (cover) {
                    std::vector<std::size_t> used(free_tuples.size(), 0);
                    for (std::size_t e = 0; e < elems.size(); ++e) {
                        const std::size_t g = (*cover)[e];
                        if (g < free_tuples.size()) {
                            const auto& [sym, t] = free_tuples[g][used[g]++];
                            m.tables[sym][t] = elems[e];
                        } else {
                            const Slot& sl = slots[g - free_tuples.size()];
                            m.tables[sl.symbol][sl.tuple] = elems[e];
                        }
                    }
                }
                joint_model_ = std::move(m);
                return JointResult::Sat;
            }
            if (checks >= limit) {
                return JointResult::Budget;
            }
            std::size_t i = 0;
            while (i < slots.size()) {
                if (++choice[i] < slots[i].classes.size()) {
                    break;
                }
                choice[i] = 0;
                ++i;
            }
            if (i == slots.size()) {
                return JointResult::Exhausted;
            }
        }
    }

    FiniteModel build_model(Mask d, const std::vector<Mask>* bad_override = nullptr) const {
        const auto& bad = bad_override ? *bad_override : bad_;
        FiniteModel m;
        m.width = p_.n;
        m.bases = p_.bases;
        m.domain = members(d);
        m.atoms = p_.atoms;
        m.tables.resize(p_.arity.size());
        for (std::size_t s = 0; s < p_.arity.size(); ++s) {
            for_each_tuple(m.domain, p_.arity[s], p_.universe, [&](const Element* t, std::size_t code) {
                const Mask options = d & req_[s][code];
                m.tables[s][std::vector<Element>(t, t + p_.arity[s])] = std::countr_zero(options);
                return true;
            });
        }
        if (opts_.image_axiom) {
            reassign_for_cover(m);
        }
        for (std::size_t i = 0; i < p_.atoms.size(); ++i) {
            const Mask b = d & bad[i];
            m.atom_truth.push_back(b == 0);
            m.witnesses.push_back(b == 0 ? std::nullopt : std::optional<Element>(std::countr_zero(b)));
        }
        return m;
    }

    // Spreads the tuples of each pattern over the elements carrying it so
    // that every element is somebody's image.
    void reassign_for_cover(FiniteModel& m) const {
        std::unordered_map<Element, std::vector<std::pair<std::size_t, std::vector<Element>>>> tuples_by_pattern;
        for (std::size_t s = 0; s < m.tables.size(); ++s) {
            for (const auto& [t, v] : m.tables[s]) {
                tuples_by_pattern[v & p_.app_bits].emplace_back(s, t);
            }
        }
        std::unordered_map<Element, std::vector<Element>> elems_by_pattern;
        for (Element e : m.domain) {
            elems_by_pattern[e & p_.app_bits].push_back(e);
        }
        for (auto& [pat, tuples] : tuples_by_pattern) {
            const auto& es = elems_by_pattern[pat];
            for (std::size_t i = 0; i < tuples.size(); ++i) {
                m.tables[tuples[i].first][tuples[i].second] = es[std::min(i, es.size() - 1)];
            }
        }
    }

    const Problem& p_;
    const Options& opts_;
    Mask full_ = 0;
    std::vector<Mask> base_mask_;
    std::vector<std::vector<Element>> pattern_;
    std::vector<std::vector<Mask>> req_;
    std::vector<Mask> bad_;
    std::vector<Mask> proj_arg_;
    std::optional<FiniteModel> joint_model_;
};

// ============================================================================
// Closure search (symbols of arity ≤ 1)
// ============================================================================

// For unary signatures, closed domains are closed under union, so below any
// allowed region there is a largest closed domain. Guess the truth of each
// atom, shrink the region of elements satisfying the true ones to its largest
// closed subset, then check every false atom still has a witness.
class ClosureSearch {
  public:
    ClosureSearch(const Problem& p, const Options& opts) : p_(p), opts_(opts) {
        const std::size_t u = p.universe;
        bad_.assign(p.atoms.size(), std::vector<char>(u, 0));
        for (std::size_t i = 0; i < p.atoms.size(); ++i) {
            for (Element e = 0; e < u; ++e) {
                bad_[i][e] = holds(p, p.atoms[i].lhs, e) && !holds(p, p.atoms[i].rhs, e);
            }
        }
        for (std::size_t s = 0; s < p.arity.size(); ++s) {
            if (p.arity[s] == 0) {
                constants_.push_back(pattern(p, s, nullptr));
            } else {
                std::vector<Element> pats(u);
                for (Element e = 0; e < u; ++e) {
                    pats[e] = pattern(p, s, &e);
                }
                unary_.push_back(std::move(pats));
            }
        }
    }

    Result run() {
        Result r;
        r.used = Strategy::ClosureSearch;
        r.width = p_.n;
        const std::size_t m = p_.atoms.size();
        if (m >= 63) {
            r.verdict = Verdict::unknown(UnknownReason::Budget, "too many atoms for closure search");
            return r;
        }
        const std::size_t u = p_.universe;
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
            // bit i of code set means atom i is guessed false
            auto truth = [&](std::size_t i) { return ((code >> i) & 1u) == 0; };
            if (!eval_formula(p_.root, truth)) {
                continue;
            }
            if (r.checks + u > opts_.budget.max_checks) {
                r.verdict = Verdict::unknown(UnknownReason::Budget,
                                             "more than " + std::to_string(opts_.budget.max_checks) + " checks");
                return r;
            }
            r.checks += u;
            std::vector<char> in(u, 1);
            for (std::size_t i = 0; i < m; ++i) {
                if (!truth(i)) {
                    continue;
                }
                for (Element e = 0; e < u; ++e) {
                    if (bad_[i][e]) {
                        in[e] = 0;
                    }
                }
            }
            shrink_to_closed(in);
            if (!constants_present(in)) {
                continue;
            }
            bool witnessed = true;
            for (std::size_t i = 0; i < m && witnessed; ++i) {
                if (truth(i)) {
                    continue;
                }
                witnessed = false;
                for (Element e = 0; e < u && !witnessed; ++e) {
                    witnessed = in[e] && bad_[i][e];
                }
            }
            if (witnessed) {
                r.verdict = Verdict::sat();
                r.model = build_model(in);
                return r;
            }
        }
        r.verdict = Verdict::unsat();
        return r;
    }

  private:
    void shrink_to_closed(std::vector<char>& in) const {
        const std::size_t u = p_.universe;
        std::vector<std::uint32_t> present(u, 0);
        for (Element e = 0; e < u; ++e) {
            if (in[e]) {
                ++present[e & p_.app_bits];
            }
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (Element e = 0; e < u; ++e) {
                if (!in[e]) {
                    continue;
                }
                for (const auto& pats : unary_) {
                    if (present[pats[e]] == 0) {
                        in[e] = 0;
                        --present[e & p_.app_bits];
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    bool constants_present(const std::vector<char>& in) const {
        for (Element c : constants_) {
            bool found = false;
            for (Element e = 0; e < p_.universe && !found; ++e) {
                found = in[e] && (e & p_.app_bits) == c;
            }
            if (!found) {
                return false;
            }
        }
        return true;
    }

    FiniteModel build_model(const std::vector<char>& in) const {
        FiniteModel m;
        m.width = p_.n;
        m.bases = p_.bases;
        m.atoms = p_.atoms;
        std::unordered_map<Element, Element> first_with;
        for (Element e = 0; e < p_.universe; ++e) {
            if (in[e]) {
                m.domain.push_back(e);
                first_with.try_emplace(e & p_.app_bits, e);
            }
        }
        m.tables.resize(p_.arity.size());
        std::size_t next_unary = 0;
        std::size_t next_const = 0;
        for (std::size_t s = 0; s < p_.arity.size(); ++s) {
            if (p_.arity[s] == 0) {
                m.tables[s][{}] = first_with.at(constants_[next_const++]);
                continue;
            }
            const auto& pats = unary_[next_unary++];
            for (Element e : m.domain) {
                m.tables[s][{e}] = first_with.at(pats[e]);
            }
        }
        for (std::size_t i = 0; i < p_.atoms.size(); ++i) {
            std::optional<Element> w;
            for (Element e : m.domain) {
                if (bad_[i][e]) {
                    w = e;
                    break;
                }
            }
            m.atom_truth.push_back(!w.has_value());
            m.witnesses.push_back(w);
        }
        return m;
    }

    const Problem& p_;
    const Options& opts_;
    std::vector<std::vector<char>> bad_;
    std::vector<Element> constants_;
    std::vector<std::vector<Element>> unary_;
};

}  // namespace

Result solve(const Formula& f, const Signature& sig, const Options& opts) {
    Result r;
    Problem p;
    try {
        p = build_problem(f, sig);
    } catch (const Unsupported& e) {
        r.verdict = Verdict::unknown(UnknownReason::Unsupported, e.what());
        return r;
    }
    r.width = p.n;
    if (p.n > opts.budget.max_n) {
        r.verdict = Verdict::unknown(UnknownReason::Budget, "N=" + std::to_string(p.n) + " exceeds maxN=" +
                                                                std::to_string(opts.budget.max_n));
        return r;
    }
    const bool unary = std::all_of(p.arity.begin(), p.arity.end(), [](std::size_t a) { return a <= 1; });
    const bool closure_ok = unary && p.projs.empty() && !opts.image_axiom && p.n <= kClosureMaxN;

    Strategy strategy = opts.strategy;
    if (strategy == Strategy::Auto) {
        strategy = (p.n <= 4 || !closure_ok) ? Strategy::Exhaustive : Strategy::ClosureSearch;
    }
    if (strategy == Strategy::ClosureSearch && !closure_ok) {
        r.verdict = Verdict::unknown(UnknownReason::Unsupported,
                                     "closure search needs arity ≤ 1, no projections and no image axiom");
        return r;
    }
    if (strategy == Strategy::Exhaustive && p.n > kExhaustiveMaxN) {
        r.verdict = Verdict::unknown(UnknownReason::Budget,
                                     "N=" + std::to_string(p.n) + " is too wide for exhaustive enumeration");
        return r;
    }
    p.universe = std::size_t{1} << p.n;
    try {
        if (strategy == Strategy::ClosureSearch) {
            return ClosureSearch(p, opts).run();
        }
        return Exhaustive(p, opts).run();
    } catch (const Unsupported& e) {
        r.verdict = Verdict::unknown(UnknownReason::Budget, e.what());
        return r;
    }
}

Verdict oracle_solve(const Formula& f, const Signature& sig, const Budget& budget) {
    Options opts;
    opts.budget = budget;
    return solve(f, sig, opts).verdict;
}

// ============================================================================
// Replay of a model against an emitted script
// ============================================================================

namespace {

class Replayer {
  public:
    Replayer(const smt::SmtScript& s, const FiniteModel& m) : s_(s), m_(m) {
        for (const auto& b : s.bases) {
            auto it = std::find(m.bases.begin(), m.bases.end(), b);
            if (it == m.bases.end()) {
                throw std::invalid_argument("script base " + to_pretty(b) + " missing from the model");
            }
            to_model_.push_back(static_cast<std::size_t>(it - m.bases.begin()));
        }
        if (s.width > 16) {
            throw std::invalid_argument("replay enumerates B^N and needs N ≤ 16");
        }
    }

    bool all_hold() {
        for (const auto& a : s_.assertions) {
            if (!eval(a)) {
                return false;
            }
        }
        return true;
    }

  private:
    Element to_model(Element x) const {
        Element out = 0;
        for (std::size_t i = 0; i < to_model_.size(); ++i) {
            if ((x >> i) & 1u) {
                out |= Element{1} << to_model_[i];
            }
        }
        return out;
    }

    Element to_script(Element x) const {
        Element out = 0;
        for (std::size_t i = 0; i < to_model_.size(); ++i) {
            if ((x >> to_model_[i]) & 1u) {
                out |= Element{1} << i;
            }
        }
        return out;
    }

    std::optional<Element> model_element(Element x) const {
        for (Element e : m_.domain) {
            if (to_script(e) == x) {
                return e;
            }
        }
        return std::nullopt;
    }

    std::size_t atom_slot(std::size_t script_atom) const {
        const Atom& a = s_.atoms.at(script_atom);
        for (std::size_t i = 0; i < m_.atoms.size(); ++i) {
            if (m_.atoms[i] == a) {
                return i;
            }
        }
        throw std::invalid_argument("script atom " + to_string(a) + " missing from the model");
    }

    Element seq(const smt::SeqTerm& t) {
        if (t.args.empty()) {
            for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
                if (it->first == t.name) {
                    return it->second;
                }
            }
            const auto* d = s_.find_declaration(t.name);
            if (d == nullptr) {
                throw std::invalid_argument("unbound sequence " + t.name);
            }
            if (d->role == smt::DeclRole::SymbolConst) {
                return to_script(m_.tables.at(d->symbol).at({}));
            }
            if (d->role == smt::DeclRole::Witness) {
                const auto& w = m_.witnesses.at(atom_slot(d->atom));
                if (w) {
                    return to_script(*w);
                }
                return m_.domain.empty() ? 0 : to_script(m_.domain.front());
            }
            throw std::invalid_argument("declaration " + t.name + " is not a sequence constant");
        }
        const auto* asmb = s_.find_assembler(t.name);
        if (asmb == nullptr) {
            throw std::invalid_argument("unknown assembler " + t.name);
        }
        std::vector<Element> vals;
        for (const auto& a : t.args) {
            vals.push_back(seq(a));
        }
        const std::size_t mark = env_.size();
        for (std::size_t i = 0; i < asmb->params.size(); ++i) {
            env_.emplace_back(asmb->params[i], vals[i]);
        }
        Element out = 0;
        for (std::size_t j = 0; j < asmb->bits.size(); ++j) {
            if (eval(asmb->bits[j])) {
                out |= Element{1} << j;
            }
        }
        env_.resize(mark);
        return out;
    }

    bool call(const std::string& name, const std::vector<smt::SeqTerm>& args) {
        const auto* d = s_.find_declaration(name);
        if (d == nullptr) {
            throw std::invalid_argument("unknown function " + name);
        }
        switch (d->role) {
        case smt::DeclRole::InDomain:
            return model_element(seq(args.at(0))).has_value();
        case smt::DeclRole::Guard:
            return m_.atom_truth.at(atom_slot(d->atom));
        case smt::DeclRole::VarBit: {
            std::vector<Element> tuple;
            for (const auto& a : args) {
                auto e = model_element(seq(a));
                if (!e) {
                    return false;  // outside the domain the table is unconstrained
                }
                tuple.push_back(*e);
            }
            const auto& table = m_.tables.at(d->symbol);
            auto it = table.find(tuple);
            if (it == table.end()) {
                return false;
            }
            return ((to_script(it->second) >> d->position) & 1u) != 0;
        }
        case smt::DeclRole::SymbolConst:
        case smt::DeclRole::Witness:
            break;
        }
        throw std::invalid_argument(name + " is not a boolean function");
    }

    bool quantify(const smt::BoolTerm& t, std::size_t k, bool universal) {
        if (k == t.bound.size()) {
            return eval(t.kids[0]);
        }
        const Element u = Element{1} << s_.width;
        for (Element x = 0; x < u; ++x) {
            env_.emplace_back(t.bound[k], x);
            const bool v = quantify(t, k + 1, universal);
            env_.pop_back();
            if (v != universal) {
                return !universal;
            }
        }
        return universal;
    }

    bool eval(const smt::BoolTerm& t) {
        using smt::BKind;
        switch (t.kind) {
        case BKind::Lit:
            return t.value;
        case BKind::Bit:
            return ((seq(t.seqs[0]) >> t.position) & 1u) != 0;
        case BKind::Not:
            return !eval(t.kids[0]);
        case BKind::And:
            return std::all_of(t.kids.begin(), t.kids.end(), [&](const auto& k) { return eval(k); });
        case BKind::Or:
            return std::any_of(t.kids.begin(), t.kids.end(), [&](const auto& k) { return eval(k); });
        case BKind::Implies:
            return !eval(t.kids[0]) || eval(t.kids[1]);
        case BKind::Iff:
            return eval(t.kids[0]) == eval(t.kids[1]);
        case BKind::Call:
            return call(t.name, t.seqs);
        case BKind::SeqEq:
            return seq(t.seqs[0]) == seq(t.seqs[1]);
        case BKind::ForAll:
            return quantify(t, 0, true);
        case BKind::Exists:
            return quantify(t, 0, false);
        }
        return false;
    }

    const smt::SmtScript& s_;
    const FiniteModel& m_;
    std::vector<std::size_t> to_model_;
    std::vector<std::pair<std::string, Element>> env_;
};

}  // namespace

bool replay(const smt::SmtScript& script, const FiniteModel& model) { return Replayer(script, model).all_hold(); }

}  // namespace setpat::oracle
