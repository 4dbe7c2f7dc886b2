#include "stipula/checker.hpp"

#include <algorithm>
#include <deque>

namespace stipula {

std::string render(const Diagnostic& d, std::string_view file) {
    return std::string(file) + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " +
           (d.severity == Severity::Error ? "error" : "warning") + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

enum class Scope { Body, Event };

class Checker {
public:
    explicit Checker(const ContractDecl& c) : c_(c) {}

    std::vector<Diagnostic> run() {
        check_names();
        check_agreement();
        for (const auto& f : c_.functions)
            check_function(f);
        check_duplicates();
        check_reachability();
        return std::move(out_);
    }

private:
    void error(Span at, std::string msg) { out_.push_back({Severity::Error, at, std::move(msg)}); }
    void warning(Span at, std::string msg) { out_.push_back({Severity::Warning, at, std::move(msg)}); }

    void check_names() {
        std::map<std::string, std::string> seen;
        auto add = [&](const std::vector<std::string>& names, const char* what, Span at) {
            for (const auto& n : names) {
                auto [it, fresh] = seen.emplace(n, what);
                if (!fresh)
                    error(at, "duplicate name '" + n + "' (declared as " + it->second + " and " + what + ")");
            }
        };
        add(c_.assets, "asset", c_.span);
        add(c_.fields, "field", c_.span);
        add(c_.agreement.parties, "party", c_.agreement.span);
    }

    void check_agreement() {
        const auto& a = c_.agreement;
        std::set<std::string> init;
        for (const auto& x : a.init_fields) {
            if (!c_.is_field(x))
                error(a.span, "agreement field '" + x + "' is not a declared field");
            if (!init.insert(x).second)
                error(a.span, "agreement field '" + x + "' listed twice");
        }
        std::set<std::string> covered;
        for (const auto& g : a.groups) {
            for (const auto& p : g.parties)
                if (!c_.is_party(p))
                    error(g.span, "'" + p + "' in agreement group is not an agreement party");
            for (const auto& x : g.fields) {
                if (!init.count(x))
                    error(g.span, "fields not partitioned: '" + x + "' is not in the agreement field list");
                if (!covered.insert(x).second)
                    error(g.span, "fields not partitioned: '" + x + "' appears in more than one group");
            }
        }
        for (const auto& x : a.init_fields)
            if (!covered.count(x))
                error(a.span, "fields not partitioned: '" + x + "' is not agreed by any group");
    }

    bool is_asset_like(const std::string& n) const {
        return c_.is_asset(n) || (fn_ != nullptr && scope_ == Scope::Body && contains(fn_->asset_params, n));
    }

    bool is_param(const std::string& n) const {
        return fn_ != nullptr && (contains(fn_->value_params, n) || contains(fn_->asset_params, n));
    }

    // Resolves a name in the current scope; reports unknown or escaping names.
    void resolve(const std::string& n, Span at) {
        if (c_.is_field(n) || c_.is_asset(n) || c_.is_party(n))
            return;
        if (is_param(n)) {
            if (scope_ == Scope::Event)
                error(at, "parameter escapes into event: '" + n + "' is a parameter of '" + fn_->name + "'");
            return;
        }
        error(at, "unknown name '" + n + "'");
    }

    void check_expr(const Expr& e, bool pair_allowed) {
        switch (e.kind) {
        case ExprKind::Name:
            resolve(e.text, e.span);
            break;
        case ExprKind::Pair:
            if (!pair_allowed)
                error(e.span, "pair expressions are only allowed as the value of a send to a party");
            break;
        case ExprKind::Uses:
        case ExprKind::UseOnce:
            resolve(e.text, e.span);
            if (!is_asset_like(e.text) && !(scope_ == Scope::Event && is_param(e.text)))
                error(e.span, "usage-code intrinsic needs an asset, '" + e.text + "' is not one");
            if (!e.party.empty() && !c_.is_party(e.party))
                error(e.span, "usage-code intrinsic party '" + e.party + "' is not an agreement party");
            break;
        default:
            break;
        }
        for (const auto& sub : e.operands)
            check_expr(sub, pair_allowed && e.kind == ExprKind::Pair);
    }

    void check_asset_ref(const std::string& n, Span at, const char* role) {
        resolve(n, at);
        if (c_.is_field(n) || c_.is_party(n) || (is_param(n) && !is_asset_like(n) && scope_ == Scope::Body))
            error(at, std::string(role) + " of an asset update must be an asset, '" + n + "' is not one");
    }

    void check_stmts(const std::vector<Stmt>& body) {
        for (const auto& s : body)
            check_stmt(s);
    }

    void check_stmt(const Stmt& s) {
        switch (s.kind) {
        case StmtKind::FieldAssign:
            check_expr(s.value, false);
            if (c_.is_asset(s.target) || (fn_ && contains(fn_->asset_params, s.target)))
                error(s.span, "asset '" + s.target + "' cannot be the destination of '->'; use '-o'");
            else if (is_param(s.target))
                error(s.span, "cannot assign to parameter '" + s.target + "'");
            else if (!c_.is_field(s.target))
                error(s.span, "unknown destination '" + s.target + "'");
            break;
        case StmtKind::ValueSend:
            check_expr(s.value, true);
            break;
        case StmtKind::AssetMove:
            check_expr(s.value, false);
            check_asset_ref(s.source, s.span, "source");
            check_asset_ref(s.target, s.span, "destination");
            break;
        case StmtKind::AssetSend:
            check_expr(s.value, false);
            check_asset_ref(s.source, s.span, "source");
            break;
        case StmtKind::If:
            check_expr(s.value, false);
            check_stmts(s.body);
            break;
        }
    }

    void check_function(const FunctionDecl& f) {
        fn_ = &f;
        scope_ = Scope::Body;
        if (!c_.is_party(f.caller))
            error(f.span, "caller '" + f.caller + "' of '" + f.name + "' is not an agreement party");
        std::set<std::string> params;
        for (const auto* list : {&f.value_params, &f.asset_params}) {
            for (const auto& p : *list) {
                if (!params.insert(p).second)
                    error(f.span, "duplicate parameter '" + p + "' in '" + f.name + "'");
                if (c_.is_field(p) || c_.is_asset(p) || c_.is_party(p))
                    error(f.span, "parameter '" + p + "' of '" + f.name + "' shadows a contract name");
            }
        }
        if (f.precondition)
            check_expr(*f.precondition, false);
        check_stmts(f.body);
        scope_ = Scope::Event;
        for (const auto& ev : f.events) {
            check_expr(ev.trigger, false);
            check_stmts(ev.handler);
        }
        fn_ = nullptr;
    }

    void check_duplicates() {
        for (std::size_t i = 0; i < c_.functions.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) {
                const auto& a = c_.functions[i];
                const auto& b = c_.functions[j];
                if (a.guard_state == b.guard_state && a.name == b.name && a.caller == b.caller)
                    error(a.span, "function '" + a.name + "' already declared for @" + a.guard_state +
                                      " and caller " + a.caller);
            }
    }

    void check_reachability() {
        auto g = state_graph(c_);
        for (const auto& f : c_.functions)
            if (!g.reachable.count(f.guard_state))
                warning(f.span, "state @" + f.guard_state + " of '" + f.name + "' is unreachable from @" +
                                    c_.agreement.initial_state);
    }

    const ContractDecl& c_;
    const FunctionDecl* fn_ = nullptr;
    Scope scope_ = Scope::Body;
    std::vector<Diagnostic> out_;
};

// Every syntactic path through `body`, as the set of asset parameters it
// fully drains.
std::vector<std::set<std::string>> drain_paths(const std::vector<Stmt>& body, std::size_t from,
                                               const std::set<std::string>& params) {
    if (from == body.size())
        return {{}};
    const Stmt& s = body[from];
    auto rest = drain_paths(body, from + 1, params);
    std::vector<std::set<std::string>> out;
    if (s.kind == StmtKind::If) {
        auto taken = drain_paths(s.body, 0, params);
        for (const auto& a : taken)
            for (const auto& b : rest) {
                auto merged = a;
                merged.insert(b.begin(), b.end());
                out.push_back(std::move(merged));
            }
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    bool drains = (s.kind == StmtKind::AssetMove || s.kind == StmtKind::AssetSend) && params.count(s.source) &&
                  s.value.kind == ExprKind::Name && s.value.text == s.source;
    for (auto& path : rest) {
        if (drains)
            path.insert(s.source);
        out.push_back(std::move(path));
    }
    return out;
}

} // namespace

std::vector<Diagnostic> check_wellformed(const ContractDecl& decl) { return Checker(decl).run(); }

std::vector<Diagnostic> lint_asset_drain(const ContractDecl& decl) {
    std::vector<Diagnostic> out;
    for (const auto& f : decl.functions) {
        if (f.asset_params.empty())
            continue;
        std::set<std::string> params(f.asset_params.begin(), f.asset_params.end());
        auto paths = drain_paths(f.body, 0, params);
        for (const auto& y : f.asset_params) {
            bool always = std::all_of(paths.begin(), paths.end(), [&](const auto& p) { return p.count(y) > 0; });
            if (!always)
                out.push_back({Severity::Warning, f.span,
                               "asset parameter '" + y + "' of '" + f.name + "' may be left undrained"});
        }
    }
    return out;
}

StateGraph state_graph(const ContractDecl& decl) {
    StateGraph g;
    g.states.insert(decl.agreement.initial_state);
    for (const auto& f : decl.functions) {
        g.states.insert(f.guard_state);
        g.states.insert(f.next_state);
        g.edges[f.guard_state].insert(f.next_state);
        for (const auto& ev : f.events) {
            g.states.insert(ev.guard_state);
            g.states.insert(ev.next_state);
            g.edges[ev.guard_state].insert(ev.next_state);
        }
    }
    std::deque<std::string> work{decl.agreement.initial_state};
    g.reachable.insert(decl.agreement.initial_state);
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        for (const auto& next : g.edges[q])
            if (g.reachable.insert(next).second)
                work.push_back(next);
    }
    return g;
}

} // namespace stipula
