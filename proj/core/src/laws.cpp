#include <algorithm>
#include <array>

#include "stipula/equivalence.hpp"
#include "stipula/syntax.hpp"

namespace stipula {

namespace {

struct Shape {
    StmtKind first;
    StmtKind second;
};

constexpr std::array<Shape, 10> shapes{{
    {StmtKind::ValueSend, StmtKind::ValueSend},
    {StmtKind::FieldAssign, StmtKind::ValueSend},
    {StmtKind::FieldAssign, StmtKind::FieldAssign},
    {StmtKind::AssetSend, StmtKind::ValueSend},
    {StmtKind::AssetSend, StmtKind::FieldAssign},
    {StmtKind::AssetMove, StmtKind::ValueSend},
    {StmtKind::AssetMove, StmtKind::FieldAssign},
    {StmtKind::AssetSend, StmtKind::AssetSend},
    {StmtKind::AssetSend, StmtKind::AssetMove},
    {StmtKind::AssetMove, StmtKind::AssetMove},
}};

const Shape& shape_of(int law) {
    if (law < 1 || law > 10)
        throw std::invalid_argument("laws are numbered 1 to 10");
    return shapes[static_cast<std::size_t>(law - 1)];
}

const char* shape_text(StmtKind k, bool primed) {
    switch (k) {
    case StmtKind::ValueSend:
        return primed ? "E' -> A'" : "E -> A";
    case StmtKind::FieldAssign:
        return primed ? "E' -> x'" : "E -> x";
    case StmtKind::AssetSend:
        return primed ? "E' -o h'', A'" : "E -o h, A";
    case StmtKind::AssetMove:
        return primed ? "E' -o h'', h'''" : "E -o h, h'";
    case StmtKind::If:
        break;
    }
    return "?";
}

/// Names a statement writes: the assigned field, or the assets it touches.
std::vector<std::string> written(const Stmt& s) {
    switch (s.kind) {
    case StmtKind::FieldAssign:
        return {s.target};
    case StmtKind::AssetSend:
        return {s.source};
    case StmtKind::AssetMove:
        return {s.source, s.target};
    default:
        return {};
    }
}

const char* context_source = R"(stipula Ctx {
  assets h1, h2, h3, h4
  fields x1, x2, x3

  agreement (A, B)(x1, x2, x3) {
    A, B : x1, x2, x3
  } => @Q

  @Q A : f [y] {
    y -o h4
    2 -o h4, h1
    2 -o h4, h2
    2 -o h4, h3
  } => @Q

  @Q B : g {
    h1 -o B
    h2 -o B
    h3 -o B
    h4 -o B
    x1 -> B
    x2 -> B
    x3 -> B
  } => @Q
})";

Universe context_universe(const std::array<int, 3>& init, std::int64_t horizon) {
    Universe u;
    u.horizon = horizon;
    u.max_calls_per_tick = 3;
    AgreeLabel a;
    a.parties = {"A", "B"};
    AgreeGroupValues row;
    row.parties = {"A", "B"};
    for (int v : init)
        row.values.push_back(Value(Decimal::from_int(v)));
    a.groups.push_back(row);
    u.agrees.push_back(a);
    CallLabel f;
    f.party = "A";
    f.function = "f";
    f.assets.push_back(Fungible{Decimal::from_int(10)});
    u.calls.push_back(f);
    CallLabel g;
    g.party = "B";
    g.function = "g";
    u.calls.push_back(g);
    return u;
}

LawContext plain_context(const std::array<int, 3>& init) {
    LawContext ctx;
    ctx.skeleton = parse_source(context_source);
    ctx.function = "f";
    ctx.hole_index = 4;
    ctx.universe = context_universe(init, 2);
    return ctx;
}

FunctionDecl& function_named(ContractDecl& decl, const std::string& name) {
    for (auto& fn : decl.functions)
        if (fn.name == name)
            return fn;
    throw std::invalid_argument("context has no function '" + name + "'");
}

std::vector<Stmt> stmts(const std::string& src, const ContractDecl& ctx) { return parse_statements(src, ctx); }

Stmt stmt(const std::string& src, const ContractDecl& ctx) { return stmts(src, ctx).front(); }

template <typename T>
const T& pick(const std::vector<T>& xs, std::mt19937_64& rng) {
    return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

bool avoids(const Expr& e, const std::vector<std::string>& names) {
    auto fv = free_names(e);
    return std::none_of(names.begin(), names.end(), [&](const std::string& n) { return fv.count(n) > 0; });
}

/// A numeric expression over fields and asset amounts avoiding `banned`.
Expr numeric_expr(std::mt19937_64& rng, const std::vector<std::string>& banned) {
    static const std::vector<std::string> forms = {"0",      "1",       "2",       "5",       "x1",      "x2",
                                                   "x3",     "h1",      "h2",      "h3",      "h4",      "x1 + 1",
                                                   "x2 * 2", "h1 * 2",  "x3 + h2", "h4 - h4", "x1 + x2"};
    while (true) {
        Expr e = parse_expression(pick(forms, rng));
        if (avoids(e, banned))
            return e;
    }
}

/// Anything that may be sent to a party.
Expr sent_expr(std::mt19937_64& rng, const std::vector<std::string>& banned) {
    static const std::vector<std::string> extra = {"\"ok\"", "now", "x1 == 0", "now + 1"};
    if (std::bernoulli_distribution(0.3)(rng)) {
        Expr e = parse_expression(pick(extra, rng));
        if (avoids(e, banned))
            return e;
    }
    return numeric_expr(rng, banned);
}

/// An amount that never exceeds what `source` holds.
Expr amount_expr(std::mt19937_64& rng, const std::string& source) {
    std::vector<std::string> forms = {"0", "0.5", "1", source, source + " * 0.5"};
    return parse_expression(pick(forms, rng));
}

} // namespace

std::string law_shape(int law) {
    const Shape& s = shape_of(law);
    return std::string(shape_text(s.first, false)) + "  " + shape_text(s.second, true);
}

void check_side_conditions(const LawInstance& inst) {
    const Shape& shape = shape_of(inst.law);
    std::string law = "law " + std::to_string(inst.law) + ": ";
    if (inst.first.kind != shape.first || inst.second.kind != shape.second)
        throw SideConditionViolated(law + "statements must have the shape " + law_shape(inst.law));
    auto fv1 = free_names(inst.first.value);
    auto fv2 = free_names(inst.second.value);
    for (const auto& n : written(inst.first))
        if (fv2.count(n))
            throw SideConditionViolated(law + "'" + n + "' is written by the first statement and read by the second");
    for (const auto& n : written(inst.second))
        if (fv1.count(n))
            throw SideConditionViolated(law + "'" + n + "' is written by the second statement and read by the first");
    if (inst.law == 3 && inst.first.target == inst.second.target)
        throw SideConditionViolated(law + "both statements assign '" + inst.first.target + "'");
    if (inst.law >= 8) {
        auto w1 = written(inst.first);
        for (const auto& n : written(inst.second))
            if (std::find(w1.begin(), w1.end(), n) != w1.end())
                throw SideConditionViolated(law + "both statements move asset '" + n + "'");
    }
}

ContractDecl fill(const LawContext& ctx, const std::vector<Stmt>& hole) {
    ContractDecl out = ctx.skeleton;
    FunctionDecl& fn = function_named(out, ctx.function);
    if (ctx.hole_index > fn.body.size())
        throw std::invalid_argument("hole index past the end of the body");
    fn.body.insert(fn.body.begin() + static_cast<std::ptrdiff_t>(ctx.hole_index), hole.begin(), hole.end());
    return out;
}

BisimVerdict compare_orders(const LawInstance& inst, const LawContext& ctx) {
    ContractDecl one = fill(ctx, {inst.first, inst.second});
    ContractDecl two = fill(ctx, {inst.second, inst.first});
    return bisimilar(one, two, ctx.universe);
}

BisimVerdict check_law(const LawInstance& inst, const LawContext& ctx) {
    check_side_conditions(inst);
    return compare_orders(inst, ctx);
}

LawContext random_law_context(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    LawContext ctx = plain_context({bit(rng), bit(rng), bit(rng)});
    ctx.universe.horizon = std::uniform_int_distribution<std::int64_t>(2, 3)(rng);
    FunctionDecl& f = function_named(ctx.skeleton, "f");
    static const std::vector<std::string> before = {"", "x1 -> B", "x2 + 1 -> x2", "1 -o h4, A", "h3 -> A"};
    static const std::vector<std::string> after = {"", "x1 -> A", "h4 * 0.5 -o h4, B", "x3 + 1 -> x3"};
    std::string pre = pick(before, rng);
    if (!pre.empty()) {
        auto ss = stmts(pre, ctx.skeleton);
        f.body.insert(f.body.end(), ss.begin(), ss.end());
    }
    ctx.hole_index = f.body.size();
    std::string post = pick(after, rng);
    if (!post.empty()) {
        auto ss = stmts(post, ctx.skeleton);
        f.body.insert(f.body.end(), ss.begin(), ss.end());
    }
    if (bit(rng)) {
        // A later event handler also reads and moves the cells.
        ContractDecl with_event = parse_source(R"(stipula E {
  assets h1, h2, h3, h4
  fields x1, x2, x3
  agreement (A, B)(x1, x2, x3) { A, B : x1, x2, x3 } => @Q
  @Q A : f [y] {
    y -o h4
    now + 1 >> @Q { x2 -> A  h1 * 0.5 -o h1, B } => @Q
  } => @Q
})");
        f.events = with_event.functions.front().events;
    }
    return ctx;
}

LawInstance random_law_instance(int law, std::mt19937_64& rng) {
    const Shape& shape = shape_of(law);
    static const std::vector<std::string> fields = {"x1", "x2", "x3"};
    static const std::vector<std::string> assets = {"h1", "h2", "h3", "h4"};
    static const std::vector<std::string> parties = {"A", "B"};
    ContractDecl names = parse_source(context_source);

    while (true) {
        // Choose the written names first, then expressions avoiding them.
        auto targets = [&](StmtKind k, std::vector<std::string> used) {
            std::vector<std::string> out;
            auto fresh_asset = [&] {
                std::vector<std::string> free;
                for (const auto& a : assets)
                    if (std::find(used.begin(), used.end(), a) == used.end())
                        free.push_back(a);
                std::string a = pick(free, rng);
                used.push_back(a);
                return a;
            };
            switch (k) {
            case StmtKind::FieldAssign:
                out.push_back(pick(fields, rng));
                break;
            case StmtKind::AssetSend:
                out.push_back(fresh_asset());
                break;
            case StmtKind::AssetMove:
                out.push_back(fresh_asset());
                out.push_back(fresh_asset());
                break;
            default:
                break;
            }
            return out;
        };
        std::vector<std::string> w1 = targets(shape.first, {});
        std::vector<std::string> w2 = targets(shape.second, law >= 8 ? w1 : std::vector<std::string>{});
        if (law == 3 && w1 == w2)
            continue;

        auto make = [&](StmtKind k, const std::vector<std::string>& w, const std::vector<std::string>& banned) {
            switch (k) {
            case StmtKind::ValueSend:
                return Stmt::value_send(sent_expr(rng, banned), pick(parties, rng));
            case StmtKind::FieldAssign:
                return Stmt::field_assign(numeric_expr(rng, banned), w[0]);
            case StmtKind::AssetSend:
                return Stmt::asset_send(amount_expr(rng, w[0]), w[0], pick(parties, rng));
            case StmtKind::AssetMove:
                return Stmt::asset_move(amount_expr(rng, w[0]), w[0], w[1]);
            case StmtKind::If:
                break;
            }
            return Stmt{};
        };
        LawInstance inst;
        inst.law = law;
        inst.first = make(shape.first, w1, w2);
        inst.second = make(shape.second, w2, w1);
        try {
            check_side_conditions(inst);
            return inst;
        } catch (const SideConditionViolated&) {
            // An amount drawn from its own source may read the other
            // statement's cells; draw again.
        }
    }
}

std::optional<std::pair<LawInstance, LawContext>> violating_instance(int law) {
    shape_of(law);
    if (law == 1)
        return std::nullopt;
    static const std::array<const char*, 9> first = {
        "1 -> x1",  "1 -> x1",        "1 -o h1, A",     "x2 -o h1, A",     "1 -o h1, h2",
        "x2 -o h1, h2", "h2 -o h1, A", "h2 -o h1, A",     "h2 -o h1, h4",
    };
    static const std::array<const char*, 9> second = {
        "x1 -> A", "x1 -> x2", "h1 -> B",     "1 -> x2",     "h2 -> A",
        "1 -> x2", "1 -o h2, B", "1 -o h2, h3", "1 -o h2, h3",
    };
    LawContext ctx = plain_context({5, 0, 0});
    std::size_t i = static_cast<std::size_t>(law - 2);
    LawInstance inst;
    inst.law = law;
    inst.first = stmt(first[i], ctx.skeleton);
    inst.second = stmt(second[i], ctx.skeleton);
    return std::make_pair(inst, ctx);
}

} // namespace stipula
