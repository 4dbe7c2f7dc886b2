#include "stipula/syntax.hpp"

#include <cctype>
#include <unordered_map>

namespace stipula {

const char* token_name(Tok kind) {
    switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::KwStipula: return "'stipula'";
    case Tok::KwAssets: return "'assets'";
    case Tok::KwFields: return "'fields'";
    case Tok::KwAgreement: return "'agreement'";
    case Tok::KwNow: return "'now'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwUses: return "'uses'";
    case Tok::KwUseOnce: return "'use_once'";
    case Tok::At: return "'@'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Arrow: return "'->'";
    case Tok::AssetArrow: return "'-o'";
    case Tok::EventArrow: return "'>>'";
    case Tok::Implies: return "'=>'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Not: return "'!'";
    case Tok::End: return "end of input";
    }
    return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

const std::unordered_map<std::string_view, Tok>& keywords() {
    static const std::unordered_map<std::string_view, Tok> table = {
        {"stipula", Tok::KwStipula}, {"assets", Tok::KwAssets}, {"fields", Tok::KwFields},
        {"agreement", Tok::KwAgreement}, {"now", Tok::KwNow}, {"true", Tok::KwTrue},
        {"false", Tok::KwFalse}, {"uses", Tok::KwUses}, {"use_once", Tok::KwUseOnce},
    };
    return table;
}

struct Alias {
    std::string_view utf8;
    Tok kind;
    const char* ascii;
};

constexpr Alias unicode_aliases[] = {
    {"\xE2\x86\x92", Tok::Arrow, "->"},
    {"\xE2\x8A\xB8", Tok::AssetArrow, "-o"},
    {"\xE2\x89\xAB", Tok::EventArrow, ">>"},
    {"\xE2\x87\x92", Tok::Implies, "=>"},
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_blank();
            Span at{line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", at});
                return out;
            }
            out.push_back(next(at));
        }
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_blank() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n')
                    advance();
            } else {
                return;
            }
        }
    }

    Token make(Tok kind, std::size_t len, Span at) {
        Token t{kind, std::string(src_.substr(pos_, len)), at};
        advance(len);
        return t;
    }

    Token next(Span at) {
        char c = peek();
        if (ident_start(c)) {
            std::size_t len = 0;
            while (ident_char(peek(len)))
                ++len;
            auto word = src_.substr(pos_, len);
            auto kw = keywords().find(word);
            return make(kw == keywords().end() ? Tok::Ident : kw->second, len, at);
        }
        if (digit(c))
            return number(at);
        if (c == '"')
            return string_literal(at);
        for (const auto& alias : unicode_aliases) {
            if (src_.substr(pos_, alias.utf8.size()) == alias.utf8) {
                Token t{alias.kind, alias.ascii, at};
                advance(alias.utf8.size());
                return t;
            }
        }
        auto two = src_.substr(pos_, 2);
        if (two == "->") return make(Tok::Arrow, 2, at);
        if (two == "-o" && !ident_char(peek(2))) return make(Tok::AssetArrow, 2, at);
        if (two == ">>") return make(Tok::EventArrow, 2, at);
        if (two == "=>") return make(Tok::Implies, 2, at);
        if (two == "==") return make(Tok::EqEq, 2, at);
        if (two == "!=") return make(Tok::NotEq, 2, at);
        if (two == "<=") return make(Tok::Le, 2, at);
        if (two == ">=") return make(Tok::Ge, 2, at);
        if (two == "&&") return make(Tok::AndAnd, 2, at);
        if (two == "||") return make(Tok::OrOr, 2, at);
        switch (c) {
        case '@': return make(Tok::At, 1, at);
        case '(': return make(Tok::LParen, 1, at);
        case ')': return make(Tok::RParen, 1, at);
        case '{': return make(Tok::LBrace, 1, at);
        case '}': return make(Tok::RBrace, 1, at);
        case '[': return make(Tok::LBracket, 1, at);
        case ']': return make(Tok::RBracket, 1, at);
        case ',': return make(Tok::Comma, 1, at);
        case ':': return make(Tok::Colon, 1, at);
        case ';': return make(Tok::Semi, 1, at);
        case '+': return make(Tok::Plus, 1, at);
        case '-': return make(Tok::Minus, 1, at);
        case '*': return make(Tok::Star, 1, at);
        case '/': return make(Tok::Slash, 1, at);
        case '<': return make(Tok::Lt, 1, at);
        case '>': return make(Tok::Gt, 1, at);
        case '!':
        case '~': return make(Tok::Not, 1, at);
        default: break;
        }
        throw LexError(at, std::string("unexpected character '") + c + "'");
    }

    Token number(Span at) {
        std::size_t len = 0;
        while (digit(peek(len)))
            ++len;
        if (peek(len) == ',' && digit(peek(len + 1)))
            throw LexError(at, "decimal comma in number literal; use '.' as the decimal separator");
        if (peek(len) == '.' && digit(peek(len + 1))) {
            ++len;
            while (digit(peek(len)))
                ++len;
        }
        if (ident_char(peek(len)))
            throw LexError(at, "malformed number literal");
        return make(Tok::Number, len, at);
    }

    Token string_literal(Span at) {
        std::string value;
        advance();
        for (;;) {
            char c = peek();
            if (pos_ >= src_.size() || c == '\n')
                throw LexError(at, "unterminated string literal");
            if (c == '"') {
                advance();
                return {Tok::String, value, at};
            }
            if (c == '\\') {
                char e = peek(1);
                if (e != '"' && e != '\\')
                    throw LexError({line_, col_}, "unsupported escape sequence");
                value.push_back(e);
                advance(2);
                continue;
            }
            value.push_back(c);
            advance();
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
};

} // namespace

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

} // namespace stipula
