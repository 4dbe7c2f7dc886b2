#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stipula/decimal.hpp"

namespace stipula {

/// Source position (1-based). Spans never participate in AST equality, so
/// two trees that differ only in layout compare equal.
struct Span {
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    friend constexpr bool operator==(const Span&, const Span&) { return true; }
};

enum class ExprKind {
    Now,
    Real,
    String,
    Bool,
    Name,
    Pair,
    Binary,
    Not,
    Uses,
    UseOnce,
};

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

bool is_arithmetic(BinaryOp op);
bool is_relational(BinaryOp op);
bool is_logical(BinaryOp op);
const char* spelling(BinaryOp op);

struct Expr {
    ExprKind kind = ExprKind::Bool;
    /// Name, string literal contents, or the asset named by an intrinsic.
    std::string text;
    /// Optional party argument of `uses(token, A)`.
    std::string party;
    Decimal real;
    bool boolean = false;
    BinaryOp op = BinaryOp::Add;
    std::vector<Expr> operands;
    Span span;

    static Expr now(Span at = {});
    static Expr number(Decimal value, Span at = {});
    static Expr string(std::string value, Span at = {});
    static Expr boolean_literal(bool value, Span at = {});
    static Expr name(std::string id, Span at = {});
    static Expr pair(Expr first, Expr second, Span at = {});
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs, Span at = {});
    static Expr negation(Expr operand, Span at = {});
    static Expr uses(std::string asset, std::string party = {}, Span at = {});
    static Expr use_once(std::string asset, std::string party = {}, Span at = {});

    friend bool operator==(const Expr&, const Expr&) = default;
};

/// Names occurring in an expression (fv).
std::set<std::string> free_names(const Expr& expr);

enum class StmtKind {
    FieldAssign, // E -> x
    ValueSend,   // E -> A
    AssetMove,   // E -o h, h'
    AssetSend,   // E -o h, A
    If,          // (B) { S }
};

struct Stmt {
    StmtKind kind = StmtKind::FieldAssign;
    /// The moved/assigned expression, or the condition of an If.
    Expr value;
    /// Source asset of AssetMove/AssetSend.
    std::string source;
    /// Field, party, or destination asset.
    std::string target;
    /// Branch of an If.
    std::vector<Stmt> body;
    Span span;

    static Stmt field_assign(Expr value, std::string field);
    static Stmt value_send(Expr value, std::string party);
    static Stmt asset_move(Expr amount, std::string from, std::string to);
    static Stmt asset_send(Expr amount, std::string from, std::string party);
    static Stmt conditional(Expr cond, std::vector<Stmt> body);

    friend bool operator==(const Stmt&, const Stmt&) = default;
};

std::set<std::string> free_names(const Stmt& stmt);
std::set<std::string> free_names(const std::vector<Stmt>& stmts);

struct EventDecl {
    Expr trigger;
    std::string guard_state;
    std::vector<Stmt> handler;
    std::string next_state;
    Span span;

    friend bool operator==(const EventDecl&, const EventDecl&) = default;
};

struct FunctionDecl {
    std::string guard_state;
    std::string caller;
    std::string name;
    std::vector<std::string> value_params;
    std::vector<std::string> asset_params;
    std::optional<Expr> precondition;
    std::vector<Stmt> body;
    std::vector<EventDecl> events;
    std::string next_state;
    Span span;

    friend bool operator==(const FunctionDecl&, const FunctionDecl&) = default;
};

struct AgreementGroup {
    std::vector<std::string> parties;
    std::vector<std::string> fields;
    Span span;

    friend bool operator==(const AgreementGroup&, const AgreementGroup&) = default;
};

struct AgreementDecl {
    std::vector<std::string> parties;
    std::vector<std::string> init_fields;
    std::vector<AgreementGroup> groups;
    std::string initial_state;
    Span span;

    friend bool operator==(const AgreementDecl&, const AgreementDecl&) = default;
};

struct ContractDecl {
    std::string name;
    std::vector<std::string> assets;
    std::vector<std::string> fields;
    AgreementDecl agreement;
    std::vector<FunctionDecl> functions;
    Span span;

    bool is_asset(const std::string& id) const;
    bool is_field(const std::string& id) const;
    bool is_party(const std::string& id) const;

    friend bool operator==(const ContractDecl&, const ContractDecl&) = default;
};

} // namespace stipula
