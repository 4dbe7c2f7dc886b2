#include <algorithm>
#include <set>

#include "stipula/equivalence.hpp"

namespace stipula {

namespace {

const std::string& lookup(const std::map<std::string, std::string>& m, const std::string& name) {
    auto it = m.find(name);
    return it == m.end() ? name : it->second;
}

class Renamer {
public:
    Renamer(const ContractDecl& decl, const Renaming& r) : decl_(decl), r_(r) {}

    std::string state(const std::string& s) const { return lookup(r_.states, s); }

    /// A field or asset name; anything else (parties, parameters) is kept.
    std::string cell(const std::string& n) const {
        if (decl_.is_asset(n))
            return lookup(r_.assets, n);
        if (decl_.is_field(n))
            return lookup(r_.fields, n);
        return n;
    }

    void expr(Expr& e) const {
        if (e.kind == ExprKind::Name || e.kind == ExprKind::Uses || e.kind == ExprKind::UseOnce)
            e.text = cell(e.text);
        for (auto& o : e.operands)
            expr(o);
    }

    void stmts(std::vector<Stmt>& ss) const {
        for (auto& s : ss) {
            expr(s.value);
            if (!s.source.empty())
                s.source = cell(s.source);
            if (s.kind == StmtKind::FieldAssign || s.kind == StmtKind::AssetMove)
                s.target = cell(s.target);
            stmts(s.body);
        }
    }

private:
    const ContractDecl& decl_;
    const Renaming& r_;
};

} // namespace

ContractDecl rename(const ContractDecl& decl, const Renaming& r) {
    Renamer rn(decl, r);
    ContractDecl out = decl;
    if (r.contract)
        out.name = *r.contract;
    for (auto& a : out.assets)
        a = lookup(r.assets, a);
    for (auto& f : out.fields)
        f = lookup(r.fields, f);
    for (auto& f : out.agreement.init_fields)
        f = lookup(r.fields, f);
    for (auto& g : out.agreement.groups)
        for (auto& f : g.fields)
            f = lookup(r.fields, f);
    out.agreement.initial_state = rn.state(out.agreement.initial_state);
    for (auto& fn : out.functions) {
        fn.guard_state = rn.state(fn.guard_state);
        fn.next_state = rn.state(fn.next_state);
        if (fn.precondition)
            rn.expr(*fn.precondition);
        rn.stmts(fn.body);
        for (auto& ev : fn.events) {
            rn.expr(ev.trigger);
            ev.guard_state = rn.state(ev.guard_state);
            ev.next_state = rn.state(ev.next_state);
            rn.stmts(ev.handler);
        }
    }
    return out;
}

Renaming random_renaming(const ContractDecl& decl, std::mt19937_64& rng) {
    std::set<std::string> taken{decl.name};
    taken.insert(decl.assets.begin(), decl.assets.end());
    taken.insert(decl.fields.begin(), decl.fields.end());
    taken.insert(decl.agreement.parties.begin(), decl.agreement.parties.end());
    std::set<std::string> states{decl.agreement.initial_state};
    for (const auto& fn : decl.functions) {
        states.insert(fn.guard_state);
        states.insert(fn.next_state);
        taken.insert(fn.name);
        taken.insert(fn.value_params.begin(), fn.value_params.end());
        taken.insert(fn.asset_params.begin(), fn.asset_params.end());
        for (const auto& ev : fn.events) {
            states.insert(ev.guard_state);
            states.insert(ev.next_state);
        }
    }
    taken.insert(states.begin(), states.end());

    std::size_t counter = 0;
    auto fresh = [&](const std::string& prefix) {
        std::string name;
        do
            name = prefix + std::to_string(counter++);
        while (taken.count(name));
        taken.insert(name);
        return name;
    };
    auto bijection = [&](std::vector<std::string> names, const std::string& prefix) {
        std::vector<std::string> images = names;
        std::shuffle(images.begin(), images.end(), rng);
        for (auto& img : images)
            if (std::bernoulli_distribution(0.5)(rng))
                img = fresh(prefix);
        std::map<std::string, std::string> m;
        for (std::size_t i = 0; i < names.size(); ++i)
            m[names[i]] = images[i];
        return m;
    };

    Renaming r;
    r.states = bijection(std::vector<std::string>(states.begin(), states.end()), "S");
    r.assets = bijection(decl.assets, "a_");
    r.fields = bijection(decl.fields, "f_");
    r.contract = fresh(decl.name + "_");
    return r;
}

} // namespace stipula
