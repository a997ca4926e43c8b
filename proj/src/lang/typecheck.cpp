#include "setpat/lang/typecheck.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace setpat::lang {

namespace {

void collect_vars(const UTypePtr& t, std::vector<int>& out) {
    switch (t->kind) {
    case UKind::Var:
        if (std::find(out.begin(), out.end(), t->var) == out.end()) {
            out.push_back(t->var);
        }
        break;
    case UKind::Data:
        break;
    case UKind::Arrow:
        collect_vars(t->from, out);
        collect_vars(t->to, out);
        break;
    }
}

class Checker {
  public:
    explicit Checker(const DataEnv& data) : data_(data) {}

    TypeInfo run(Program& p) {
        TypeInfo info;
        infer(p.term);
        finish(p.term);
        // top-level lets form a spine
        TermPtr t = p.term;
        while (t->kind == TermKind::Let && info.definitions.size() < p.definitions.size()) {
            TypeScheme s{t->generalized, t->kids[0]->type};
            info.definitions.emplace_back(t->name, s);
            t = t->body();
        }
        info.match_count = next_match_;
        return info;
    }

  private:
    struct Binding {
        std::string name;
        TypeScheme scheme;
    };

    UTypePtr fresh() { return UType::type_var(next_var_++); }

    UTypePtr resolve(UTypePtr t) const {
        while (t->kind == UKind::Var) {
            auto it = subst_.find(t->var);
            if (it == subst_.end()) {
                break;
            }
            t = it->second;
        }
        return t;
    }

    UTypePtr zonk(const UTypePtr& t) const {
        UTypePtr r = resolve(t);
        if (r->kind == UKind::Arrow) {
            return UType::arrow(zonk(r->from), zonk(r->to));
        }
        return r;
    }

    bool occurs(int v, const UTypePtr& t) const {
        UTypePtr r = resolve(t);
        switch (r->kind) {
        case UKind::Var:
            return r->var == v;
        case UKind::Data:
            return false;
        case UKind::Arrow:
            return occurs(v, r->from) || occurs(v, r->to);
        }
        return false;
    }

    void unify(const UTypePtr& a, const UTypePtr& b, Span where) {
        UTypePtr x = resolve(a);
        UTypePtr y = resolve(b);
        if (x->kind == UKind::Var && y->kind == UKind::Var && x->var == y->var) {
            return;
        }
        if (x->kind == UKind::Var || y->kind == UKind::Var) {
            if (x->kind != UKind::Var) {
                std::swap(x, y);
            }
            if (occurs(x->var, y)) {
                throw TypeError("cannot construct the infinite type " + to_string(zonk(x)) + " = " + to_string(zonk(y)),
                                where);
            }
            subst_[x->var] = y;
            return;
        }
        if (x->kind == UKind::Data && y->kind == UKind::Data && x->name == y->name) {
            return;
        }
        if (x->kind == UKind::Arrow && y->kind == UKind::Arrow) {
            unify(x->from, y->from, where);
            unify(x->to, y->to, where);
            return;
        }
        throw TypeError("type mismatch: " + to_string(zonk(a)) + " vs " + to_string(zonk(b)), where);
    }

    const Binding* lookup(const std::string& x) const {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
            if (it->name == x) {
                return &*it;
            }
        }
        return nullptr;
    }

    std::set<int> env_vars() const {
        std::set<int> out;
        for (const auto& b : env_) {
            std::vector<int> vs;
            collect_vars(zonk(b.scheme.type), vs);
            for (int v : vs) {
                if (std::find(b.scheme.vars.begin(), b.scheme.vars.end(), v) == b.scheme.vars.end()) {
                    out.insert(v);
                }
            }
        }
        return out;
    }

    UTypePtr instantiate(const TypeScheme& s, std::vector<std::pair<int, UTypePtr>>& inst) {
        std::unordered_map<int, UTypePtr> m;
        for (int v : s.vars) {
            m[v] = fresh();
            inst.emplace_back(v, m[v]);
        }
        return substitute(s.type, m);
    }

    UTypePtr substitute(const UTypePtr& t, const std::unordered_map<int, UTypePtr>& m) const {
        UTypePtr r = resolve(t);
        switch (r->kind) {
        case UKind::Var: {
            auto it = m.find(r->var);
            return it == m.end() ? r : it->second;
        }
        case UKind::Data:
            return r;
        case UKind::Arrow:
            return UType::arrow(substitute(r->from, m), substitute(r->to, m));
        }
        return r;
    }

    void bind_pattern(const Pattern& p, const UTypePtr& t) {
        if (p.is_var) {
            env_.push_back({p.name, {{}, t}});
            return;
        }
        auto [d, k] = data_.find_ctor(p.name);
        unify(t, UType::data(d->name), p.span);
        for (std::size_t i = 0; i < p.args.size(); ++i) {
            bind_pattern(p.args[i], k->args[i]);
        }
    }

    UTypePtr infer(const TermPtr& t) {
        UTypePtr ty;
        switch (t->kind) {
        case TermKind::Var: {
            const Binding* b = lookup(t->name);
            if (b == nullptr) {
                throw TypeError("unbound variable '" + t->name + "'", t->span);
            }
            t->inst.clear();
            ty = instantiate(b->scheme, t->inst);
            break;
        }
        case TermKind::Lit:
            ty = UType::data(t->data);
            break;
        case TermKind::Lam: {
            UTypePtr param = fresh();
            env_.push_back({t->name, {{}, param}});
            UTypePtr body = infer(t->body());
            env_.pop_back();
            ty = UType::arrow(param, body);
            break;
        }
        case TermKind::App: {
            UTypePtr f = infer(t->fn());
            UTypePtr a = infer(t->arg());
            ty = fresh();
            unify(f, UType::arrow(a, ty), t->span);
            break;
        }
        case TermKind::Ctor: {
            auto [d, k] = data_.find_ctor(t->name);
            for (std::size_t i = 0; i < t->kids.size(); ++i) {
                unify(infer(t->kids[i]), k->args[i], t->kids[i]->span);
            }
            ty = UType::data(d->name);
            break;
        }
        case TermKind::Match: {
            t->match_id = next_match_++;
            UTypePtr scrut = infer(t->discriminee());
            ty = fresh();
            for (std::size_t i = 0; i < t->branch_count(); ++i) {
                const std::size_t mark = env_.size();
                bind_pattern(t->patterns[i], scrut);
                UTypePtr b = infer(t->branch(i));
                env_.resize(mark);
                unify(ty, b, t->branch(i)->span);
            }
            break;
        }
        case TermKind::Let: {
            // monomorphic recursion
            UTypePtr self = fresh();
            env_.push_back({t->name, {{}, self}});
            UTypePtr def = infer(t->kids[0]);
            unify(self, def, t->span);
            env_.pop_back();
            const std::set<int> fixed = env_vars();
            std::vector<int> vs;
            collect_vars(zonk(def), vs);
            t->generalized.clear();
            for (int v : vs) {
                if (!fixed.contains(v)) {
                    t->generalized.push_back(v);
                }
            }
            env_.push_back({t->name, {t->generalized, def}});
            ty = infer(t->body());
            env_.pop_back();
            break;
        }
        }
        t->type = ty;
        return ty;
    }

    void finish(const TermPtr& t) {
        t->type = zonk(t->type);
        for (auto& [v, ty] : t->inst) {
            ty = zonk(ty);
        }
        for (const auto& k : t->kids) {
            finish(k);
        }
    }

    const DataEnv& data_;
    std::unordered_map<int, UTypePtr> subst_;
    std::vector<Binding> env_;
    int next_var_ = 0;
    int next_match_ = 0;
};

}  // namespace

std::vector<int> type_vars(const UTypePtr& t) {
    std::vector<int> out;
    collect_vars(t, out);
    return out;
}

std::string to_string(const TypeScheme& s) {
    std::string out;
    if (!s.vars.empty()) {
        out = "forall";
        for (int v : s.vars) {
            out += " t" + std::to_string(v);
        }
        out += ". ";
    }
    return out + to_string(s.type);
}

TypeInfo typecheck(Program& program) {
    Checker c(program.data);
    return c.run(program);
}

}  // namespace setpat::lang
