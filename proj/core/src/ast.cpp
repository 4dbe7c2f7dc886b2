#include "stipula/ast.hpp"

#include <algorithm>

namespace stipula {

bool is_arithmetic(BinaryOp op) {
    return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul || op == BinaryOp::Div;
}

bool is_relational(BinaryOp op) {
    switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
        return true;
    default:
        return false;
    }
}

bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

const char* spelling(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    }
    return "?";
}

Expr Expr::now(Span at) {
    Expr e;
    e.kind = ExprKind::Now;
    e.span = at;
    return e;
}

Expr Expr::number(Decimal value, Span at) {
    Expr e;
    e.kind = ExprKind::Real;
    e.real = value;
    e.span = at;
    return e;
}

Expr Expr::string(std::string value, Span at) {
    Expr e;
    e.kind = ExprKind::String;
    e.text = std::move(value);
    e.span = at;
    return e;
}

Expr Expr::boolean_literal(bool value, Span at) {
    Expr e;
    e.kind = ExprKind::Bool;
    e.boolean = value;
    e.span = at;
    return e;
}

Expr Expr::name(std::string id, Span at) {
    Expr e;
    e.kind = ExprKind::Name;
    e.text = std::move(id);
    e.span = at;
    return e;
}

Expr Expr::pair(Expr first, Expr second, Span at) {
    Expr e;
    e.kind = ExprKind::Pair;
    e.operands = {std::move(first), std::move(second)};
    e.span = at;
    return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, Span at) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.op = op;
    e.operands = {std::move(lhs), std::move(rhs)};
    e.span = at;
    return e;
}

Expr Expr::negation(Expr operand, Span at) {
    Expr e;
    e.kind = ExprKind::Not;
    e.operands = {std::move(operand)};
    e.span = at;
    return e;
}

Expr Expr::uses(std::string asset, std::string party, Span at) {
    Expr e;
    e.kind = ExprKind::Uses;
    e.text = std::move(asset);
    e.party = std::move(party);
    e.span = at;
    return e;
}

Expr Expr::use_once(std::string asset, std::string party, Span at) {
    Expr e = uses(std::move(asset), std::move(party), at);
    e.kind = ExprKind::UseOnce;
    return e;
}

namespace {

void collect(const Expr& expr, std::set<std::string>& out) {
    switch (expr.kind) {
    case ExprKind::Name:
        out.insert(expr.text);
        break;
    case ExprKind::Uses:
    case ExprKind::UseOnce:
        out.insert(expr.text);
        if (!expr.party.empty())
            out.insert(expr.party);
        break;
    default:
        break;
    }
    for (const auto& sub : expr.operands)
        collect(sub, out);
}

void collect(const Stmt& stmt, std::set<std::string>& out) {
    collect(stmt.value, out);
    if (!stmt.source.empty())
        out.insert(stmt.source);
    if (!stmt.target.empty())
        out.insert(stmt.target);
    for (const auto& s : stmt.body)
        collect(s, out);
}

} // namespace

std::set<std::string> free_names(const Expr& expr) {
    std::set<std::string> out;
    collect(expr, out);
    return out;
}

std::set<std::string> free_names(const Stmt& stmt) {
    std::set<std::string> out;
    collect(stmt, out);
    return out;
}

std::set<std::string> free_names(const std::vector<Stmt>& stmts) {
    std::set<std::string> out;
    for (const auto& s : stmts)
        collect(s, out);
    return out;
}

Stmt Stmt::field_assign(Expr value, std::string field) {
    Stmt s;
    s.kind = StmtKind::FieldAssign;
    s.value = std::move(value);
    s.target = std::move(field);
    return s;
}

Stmt Stmt::value_send(Expr value, std::string party) {
    Stmt s = field_assign(std::move(value), std::move(party));
    s.kind = StmtKind::ValueSend;
    return s;
}

Stmt Stmt::asset_move(Expr amount, std::string from, std::string to) {
    Stmt s;
    s.kind = StmtKind::AssetMove;
    s.value = std::move(amount);
    s.source = std::move(from);
    s.target = std::move(to);
    return s;
}

Stmt Stmt::asset_send(Expr amount, std::string from, std::string party) {
    Stmt s = asset_move(std::move(amount), std::move(from), std::move(party));
    s.kind = StmtKind::AssetSend;
    return s;
}

Stmt Stmt::conditional(Expr cond, std::vector<Stmt> body) {
    Stmt s;
    s.kind = StmtKind::If;
    s.value = std::move(cond);
    s.body = std::move(body);
    return s;
}

namespace {
bool contains(const std::vector<std::string>& names, const std::string& id) {
    return std::find(names.begin(), names.end(), id) != names.end();
}
} // namespace

bool ContractDecl::is_asset(const std::string& id) const { return contains(assets, id); }
bool ContractDecl::is_field(const std::string& id) const { return contains(fields, id); }
bool ContractDecl::is_party(const std::string& id) const { return contains(agreement.parties, id); }

} // namespace stipula
