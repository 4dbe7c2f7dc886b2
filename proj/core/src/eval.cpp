#include "stipula/runtime.hpp"

namespace stipula {

namespace {

bool numeric(const Value& v) { return v.is<Decimal>() || v.is<Time>(); }

Decimal as_decimal(const Value& v) {
    if (v.is<Time>())
        return Decimal::from_int(v.as<Time>().seconds);
    return v.as<Decimal>();
}

const char* kind_name(const Value& v) {
    switch (v.storage().index()) {
    case 0: return "real";
    case 1: return "string";
    case 2: return "bool";
    case 3: return "time";
    case 4: return "party";
    case 5: return "usage code";
    case 6: return "token";
    case 7: return "pair";
    }
    return "value";
}

bool truth(const Value& v, const char* where) {
    if (!v.is<bool>())
        throw EvalError(std::string(where) + " expects a boolean, got a " + kind_name(v));
    return v.as<bool>();
}

Time seconds_of(Decimal d) {
    if (!d.is_integral())
        throw EvalError("time offsets must be whole seconds, got " + d.to_string());
    return Time{d.whole()};
}

Value arithmetic(BinaryOp op, const Value& a, const Value& b) {
    if (a.is<Decimal>() && b.is<Decimal>()) {
        Decimal x = a.as<Decimal>();
        Decimal y = b.as<Decimal>();
        switch (op) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: return x * y;
        case BinaryOp::Div: return x / y;
        default: break;
        }
    }
    // t + n sums n seconds to the time value t
    if (a.is<Time>() && b.is<Decimal>() && (op == BinaryOp::Add || op == BinaryOp::Sub)) {
        std::int64_t n = seconds_of(b.as<Decimal>()).seconds;
        std::int64_t t = a.as<Time>().seconds;
        std::int64_t r = op == BinaryOp::Add ? t + n : t - n;
        if (r < 0)
            throw EvalError("negative time");
        return Time{r};
    }
    if (a.is<Decimal>() && b.is<Time>() && op == BinaryOp::Add) {
        std::int64_t r = seconds_of(a.as<Decimal>()).seconds + b.as<Time>().seconds;
        if (r < 0)
            throw EvalError("negative time");
        return Time{r};
    }
    if (a.is<Time>() && b.is<Time>() && op == BinaryOp::Sub)
        return Decimal::from_int(a.as<Time>().seconds - b.as<Time>().seconds);
    throw EvalError(std::string("cannot apply '") + spelling(op) + "' to " + kind_name(a) + " and " + kind_name(b));
}

Value relation(BinaryOp op, const Value& a, const Value& b) {
    if (numeric(a) && numeric(b)) {
        Decimal x = as_decimal(a);
        Decimal y = as_decimal(b);
        switch (op) {
        case BinaryOp::Eq: return x == y;
        case BinaryOp::Ne: return x != y;
        case BinaryOp::Lt: return x < y;
        case BinaryOp::Le: return x <= y;
        case BinaryOp::Gt: return x > y;
        case BinaryOp::Ge: return x >= y;
        default: break;
        }
    }
    if (a.storage().index() != b.storage().index())
        throw EvalError(std::string("cannot compare ") + kind_name(a) + " with " + kind_name(b));
    if (op == BinaryOp::Eq)
        return a == b;
    if (op == BinaryOp::Ne)
        return !(a == b);
    throw EvalError(std::string("ordering '") + spelling(op) + "' is not defined on " + kind_name(a));
}

Value usage_code(const Expr& e, const EvalContext& ctx) {
    if (ctx.usage_seq == nullptr)
        throw EvalError("usage codes cannot be generated here");
    const AssetValue* cell = ctx.memory.asset(e.text);
    if (cell == nullptr)
        throw EvalError("'" + e.text + "' is not an asset");
    const auto* token = std::get_if<TokenAsset>(cell);
    if (token == nullptr)
        throw EvalError("asset '" + e.text + "' holds no token");
    std::string code = e.kind == ExprKind::Uses ? "use:" : "once:";
    code += token->id;
    if (!e.party.empty()) {
        const Value* p = ctx.memory.value(e.party);
        if (p == nullptr || !p->is<Party>())
            throw EvalError("'" + e.party + "' is not a bound party");
        code += ":" + p->as<Party>().name;
    }
    code += "#" + std::to_string(++*ctx.usage_seq);
    return UsageCode{code};
}

} // namespace

Value eval(const Expr& e, const EvalContext& ctx) {
    try {
        switch (e.kind) {
        case ExprKind::Now:
            return ctx.now;
        case ExprKind::Real:
            return e.real;
        case ExprKind::String:
            return e.text;
        case ExprKind::Bool:
            return e.boolean;
        case ExprKind::Name: {
            const Slot* slot = ctx.memory.find(e.text);
            if (slot == nullptr)
                throw EvalError("unbound name '" + e.text + "'");
            if (const auto* v = std::get_if<Value>(slot))
                return *v;
            const auto& cell = std::get<AssetValue>(*slot);
            if (const auto* f = std::get_if<Fungible>(&cell))
                return f->amount;
            return TokenRef{std::get<TokenAsset>(cell).id};
        }
        case ExprKind::Pair:
            return Value::pair(eval(e.operands[0], ctx), eval(e.operands[1], ctx));
        case ExprKind::Not:
            return !truth(eval(e.operands[0], ctx), "'!'");
        case ExprKind::Binary: {
            if (e.op == BinaryOp::And)
                return truth(eval(e.operands[0], ctx), "'&&'") && truth(eval(e.operands[1], ctx), "'&&'");
            if (e.op == BinaryOp::Or)
                return truth(eval(e.operands[0], ctx), "'||'") || truth(eval(e.operands[1], ctx), "'||'");
            Value a = eval(e.operands[0], ctx);
            Value b = eval(e.operands[1], ctx);
            return is_relational(e.op) ? relation(e.op, a, b) : arithmetic(e.op, a, b);
        }
        case ExprKind::Uses:
        case ExprKind::UseOnce:
            return usage_code(e, ctx);
        }
    } catch (const DecimalError& err) {
        throw EvalError(err.what());
    }
    throw EvalError("unknown expression");
}

Time to_time(const Value& v) {
    if (v.is<Time>())
        return v.as<Time>();
    if (v.is<Decimal>()) {
        Decimal d = v.as<Decimal>();
        if (d.is_negative())
            throw EvalError("negative time");
        return seconds_of(d);
    }
    throw EvalError(std::string("expected a time, got a ") + kind_name(v));
}

} // namespace stipula
