#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stipula/ast.hpp"

namespace stipula {

enum class Tok {
    Ident,
    Number,
    String,
    KwStipula,
    KwAssets,
    KwFields,
    KwAgreement,
    KwNow,
    KwTrue,
    KwFalse,
    KwUses,
    KwUseOnce,
    At,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semi,
    Arrow,      // ->
    AssetArrow, // -o
    EventArrow, // >>
    Implies,    // =>
    Plus,
    Minus,
    Star,
    Slash,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Not,
    End,
};

const char* token_name(Tok kind);

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Span span;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(Span at, const std::string& message)
        : std::runtime_error(message), span(at) {}
    Span span;
};

class LexError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

class ParseError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

/// Tokenizes ASCII Stipula source. The typeset operators (→ ⊸ ≫ ⇒) are
/// accepted as aliases of their ASCII spellings. The last token is Tok::End.
std::vector<Token> lex(std::string_view source);

/// Builds a contract from a token stream. `E -> X` and `E -o ..., X` are
/// classified as party sends when X is a declared party, otherwise as field
/// or asset updates.
ContractDecl parse(const std::vector<Token>& tokens);

inline ContractDecl parse_source(std::string_view source) { return parse(lex(source)); }

/// Expression parser exposed for tests and the law checker.
Expr parse_expression(std::string_view source);

/// Parses a statement sequence against the names of `context` (used to
/// classify arrow destinations).
std::vector<Stmt> parse_statements(std::string_view source, const ContractDecl& context);

/// Canonical ASCII rendering. parse_source(pretty_print(c)) == c.
std::string pretty_print(const ContractDecl& decl);
std::string pretty_print(const Expr& expr);
std::string pretty_print(const Stmt& stmt);

} // namespace stipula
