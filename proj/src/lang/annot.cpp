#include "setpat/lang/annot.hpp"

#include <algorithm>

namespace setpat::lang {

AnnTypePtr AnnType::tvar(int id, SetExpr ann) {
    auto t = std::make_shared<AnnType>();
    t->kind = AnnKind::TVar;
    t->var = id;
    t->ann = std::move(ann);
    return t;
}

AnnTypePtr AnnType::data(std::string name, bool opaque, SetExpr ann) {
    auto t = std::make_shared<AnnType>();
    t->kind = AnnKind::Data;
    t->name = std::move(name);
    t->opaque = opaque;
    t->ann = std::move(ann);
    return t;
}

AnnTypePtr AnnType::arrow(AnnTypePtr from, AnnTypePtr to, SetExpr ann) {
    auto t = std::make_shared<AnnType>();
    t->kind = AnnKind::Arrow;
    t->from = std::move(from);
    t->to = std::move(to);
    t->ann = std::move(ann);
    return t;
}

AnnTypePtr with_top(const AnnTypePtr& t, SetExpr ann) {
    auto c = std::make_shared<AnnType>(*t);
    c->ann = std::move(ann);
    return c;
}

UTypePtr erase(const AnnTypePtr& t) {
    switch (t->kind) {
    case AnnKind::TVar:
        return UType::type_var(t->var);
    case AnnKind::Data:
        return UType::data(t->name);
    case AnnKind::Arrow:
        return UType::arrow(erase(t->from), erase(t->to));
    }
    return nullptr;
}

std::string to_string(const AnnTypePtr& t) {
    const std::string a = "{" + to_pretty(t->ann) + "}";
    switch (t->kind) {
    case AnnKind::TVar:
        return "t" + std::to_string(t->var) + a;
    case AnnKind::Data:
        return t->name + a;
    case AnnKind::Arrow:
        return "(" + to_string(t->from) + " -> " + to_string(t->to) + ")" + a;
    }
    return "?";
}

void collect_set_vars(const AnnTypePtr& t, std::vector<std::string>& out) {
    collect_set_vars(t->ann, out);
    if (t->kind == AnnKind::Arrow) {
        collect_set_vars(t->from, out);
        collect_set_vars(t->to, out);
    }
}

Formula equate(const AnnTypePtr& a, const AnnTypePtr& b) {
    if (a->kind != b->kind) {
        return Formula::falsity();
    }
    switch (a->kind) {
    case AnnKind::TVar:
        return a->var == b->var ? Formula::equal(a->ann, b->ann) : Formula::falsity();
    case AnnKind::Data:
        if (a->name != b->name) {
            return Formula::falsity();
        }
        return a->opaque ? Formula::truth() : Formula::equal(a->ann, b->ann);
    case AnnKind::Arrow:
        return Formula::conj({equate(a->from, b->from), equate(a->to, b->to), Formula::equal(a->ann, b->ann)});
    }
    return Formula::falsity();
}

AnnTypePtr freshen(const UTypePtr& t, const DataEnv& data, FreshNames& names) {
    switch (t->kind) {
    case UKind::Var:
        return AnnType::tvar(t->var, SetExpr::var(names.next()));
    case UKind::Data: {
        // base-type values carry no set content, so their annotation is ⊤
        const DataDecl* d = data.find_data(t->name);
        const bool opaque = d != nullptr && d->opaque;
        return AnnType::data(t->name, opaque, opaque ? SetExpr::top() : SetExpr::var(names.next()));
    }
    case UKind::Arrow: {
        AnnTypePtr from = freshen(t->from, data, names);
        AnnTypePtr to = freshen(t->to, data, names);
        return AnnType::arrow(from, to, SetExpr::var(names.next()));
    }
    }
    return nullptr;
}

AnnTypePtr freshen(const AnnTypePtr& t, FreshNames& names) {
    switch (t->kind) {
    case AnnKind::TVar:
        return AnnType::tvar(t->var, SetExpr::var(names.next()));
    case AnnKind::Data:
        return AnnType::data(t->name, t->opaque, t->opaque ? SetExpr::top() : SetExpr::var(names.next()));
    case AnnKind::Arrow: {
        AnnTypePtr from = freshen(t->from, names);
        AnnTypePtr to = freshen(t->to, names);
        return AnnType::arrow(from, to, SetExpr::var(names.next()));
    }
    }
    return nullptr;
}

SetExpr pattern_set(const Pattern& p) {
    if (p.is_var) {
        return SetExpr::top();
    }
    std::vector<SetExpr> args;
    for (const auto& a : p.args) {
        args.push_back(pattern_set(a));
    }
    return SetExpr::app(p.name, std::move(args));
}

SetExpr not_yet_covered(const std::vector<Pattern>& patterns, std::size_t i) {
    if (i == 0) {
        return SetExpr::top();
    }
    SetExpr acc = SetExpr::neg(pattern_set(patterns[0]));
    for (std::size_t j = 1; j < i; ++j) {
        acc = SetExpr::inter(acc, SetExpr::neg(pattern_set(patterns[j])));
    }
    return acc;
}

void bind_pattern(const Pattern& p, const AnnTypePtr& t, const DataEnv& data, FreshNames& names, AnnBindings& out) {
    if (p.is_var) {
        out.emplace_back(p.name, t);
        return;
    }
    auto [d, k] = data.find_ctor(p.name);
    if (k == nullptr || t->kind != AnnKind::Data || t->name != d->name) {
        throw TypeError("pattern " + to_string(p) + " does not fit " + to_string(t), p.span);
    }
    for (std::size_t i = 0; i < p.args.size(); ++i) {
        AnnTypePtr sub = with_top(freshen(k->args[i], data, names), SetExpr::proj(p.name, i + 1, t->ann));
        bind_pattern(p.args[i], sub, data, names, out);
    }
}

namespace {

using Row = std::vector<const Pattern*>;

bool covers(const std::vector<Row>& rows, const std::vector<UTypePtr>& cols, const DataEnv& data) {
    if (cols.empty()) {
        return !rows.empty();
    }
    const UTypePtr& ty = cols[0];
    const std::vector<UTypePtr> rest(cols.begin() + 1, cols.end());
    const DataDecl* d = ty->kind == UKind::Data ? data.find_data(ty->name) : nullptr;

    auto default_rows = [&] {
        std::vector<Row> out;
        for (const auto& r : rows) {
            if (r[0]->is_var) {
                out.emplace_back(r.begin() + 1, r.end());
            }
        }
        return out;
    };

    if (d == nullptr || d->opaque || d->ctors.empty()) {
        return covers(default_rows(), rest, data);
    }
    bool all_heads = true;
    for (const auto& k : d->ctors) {
        all_heads = all_heads && std::any_of(rows.begin(), rows.end(), [&](const Row& r) {
                        return !r[0]->is_var && r[0]->name == k.name;
                    });
    }
    if (!all_heads) {
        // a missing constructor is only covered by the variable rows
        return covers(default_rows(), rest, data);
    }
    for (const auto& k : d->ctors) {
        std::vector<Row> spec;
        static const Pattern wildcard = Pattern::var("_", {});
        for (const auto& r : rows) {
            Row nr;
            if (r[0]->is_var) {
                nr.assign(k.args.size(), &wildcard);
            } else if (r[0]->name == k.name) {
                for (const auto& a : r[0]->args) {
                    nr.push_back(&a);
                }
            } else {
                continue;
            }
            nr.insert(nr.end(), r.begin() + 1, r.end());
            spec.push_back(std::move(nr));
        }
        std::vector<UTypePtr> cs(k.args.begin(), k.args.end());
        cs.insert(cs.end(), rest.begin(), rest.end());
        if (!covers(spec, cs, data)) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool is_exhaustive(const std::vector<Pattern>& patterns, const UTypePtr& scrutinee, const DataEnv& data) {
    std::vector<Row> rows;
    for (const auto& p : patterns) {
        rows.push_back({&p});
    }
    return covers(rows, {scrutinee}, data);
}

}  // namespace setpat::lang
