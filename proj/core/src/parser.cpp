#include "stipula/syntax.hpp"

namespace stipula {

namespace {

class Parser {
public:
    Parser(const std::vector<Token>& tokens, const ContractDecl* context)
        : toks_(tokens), ctx_(context) {
        if (toks_.empty() || toks_.back().kind != Tok::End)
            throw ParseError({}, "token stream must end with an end marker");
    }

    ContractDecl contract() {
        ContractDecl c;
        c.span = cur().span;
        expect(Tok::KwStipula);
        c.name = expect(Tok::Ident).text;
        expect(Tok::LBrace);
        if (accept(Tok::KwAssets))
            c.assets = ident_list();
        if (accept(Tok::KwFields))
            c.fields = ident_list();
        c.agreement = agreement();
        ctx_ = &c;
        while (at(Tok::At))
            c.functions.push_back(function());
        expect(Tok::RBrace);
        expect(Tok::End);
        return c;
    }

    Expr whole_expression() {
        Expr e = expr();
        expect(Tok::End);
        return e;
    }

    std::vector<Stmt> whole_statements() {
        std::vector<Stmt> out = statements(nullptr);
        expect(Tok::End);
        return out;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t ahead) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at(Tok kind) const { return cur().kind == kind; }

    bool accept(Tok kind) {
        if (!at(kind))
            return false;
        ++pos_;
        return true;
    }

    const Token& expect(Tok kind) {
        if (!at(kind))
            fail(std::string("expected ") + token_name(kind));
        return toks_[pos_++];
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::string found = token_name(cur().kind);
        if (cur().kind == Tok::Ident || cur().kind == Tok::Number)
            found += " '" + cur().text + "'";
        throw ParseError(cur().span, what + ", found " + found);
    }

    std::vector<std::string> ident_list() {
        std::vector<std::string> out{expect(Tok::Ident).text};
        while (accept(Tok::Comma))
            out.push_back(expect(Tok::Ident).text);
        return out;
    }

    std::string state_ref() {
        expect(Tok::At);
        return expect(Tok::Ident).text;
    }

    AgreementDecl agreement() {
        AgreementDecl a;
        a.span = cur().span;
        expect(Tok::KwAgreement);
        expect(Tok::LParen);
        if (!at(Tok::RParen))
            a.parties = ident_list();
        expect(Tok::RParen);
        expect(Tok::LParen);
        if (!at(Tok::RParen))
            a.init_fields = ident_list();
        expect(Tok::RParen);
        expect(Tok::LBrace);
        while (at(Tok::Ident)) {
            AgreementGroup g;
            g.span = cur().span;
            g.parties = ident_list();
            expect(Tok::Colon);
            g.fields = ident_list();
            a.groups.push_back(std::move(g));
        }
        expect(Tok::RBrace);
        expect(Tok::Implies);
        a.initial_state = state_ref();
        return a;
    }

    // `(` followed by an identifier list and `)`; distinguishes value
    // parameters from a precondition directly after the function name.
    bool looks_like_param_list() const {
        if (!at(Tok::LParen))
            return false;
        std::size_t k = 1;
        if (peek(k).kind == Tok::RParen)
            return true;
        for (;;) {
            if (peek(k).kind != Tok::Ident)
                return false;
            ++k;
            if (peek(k).kind == Tok::RParen)
                return true;
            if (peek(k).kind != Tok::Comma)
                return false;
            ++k;
        }
    }

    FunctionDecl function() {
        FunctionDecl f;
        f.span = cur().span;
        f.guard_state = state_ref();
        f.caller = expect(Tok::Ident).text;
        expect(Tok::Colon);
        f.name = expect(Tok::Ident).text;
        if (looks_like_param_list()) {
            expect(Tok::LParen);
            if (!at(Tok::RParen))
                f.value_params = ident_list();
            expect(Tok::RParen);
        }
        if (accept(Tok::LBracket)) {
            if (!at(Tok::RBracket))
                f.asset_params = ident_list();
            expect(Tok::RBracket);
        }
        if (accept(Tok::LParen)) {
            f.precondition = expr();
            expect(Tok::RParen);
        }
        expect(Tok::LBrace);
        f.body = statements(&f.events);
        expect(Tok::RBrace);
        expect(Tok::Implies);
        f.next_state = state_ref();
        return f;
    }

    bool is_party(const std::string& id) const { return ctx_ != nullptr && ctx_->is_party(id); }

    // Statements up to a closing brace (or end of input). Events are only
    // accepted when `events` is non-null and must follow all statements.
    std::vector<Stmt> statements(std::vector<EventDecl>* events) {
        std::vector<Stmt> out;
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            Span start = cur().span;
            std::size_t first = pos_;
            Expr value = expr();
            bool parenthesized = last_group_open_ == first && last_group_close_ + 1 == pos_;

            if (parenthesized && at(Tok::LBrace)) {
                if (events != nullptr && !events->empty())
                    throw ParseError(start, "statement after event declarations");
                if (value.kind == ExprKind::Pair)
                    throw ParseError(start, "a pair cannot be used as a condition");
                expect(Tok::LBrace);
                Stmt s = Stmt::conditional(std::move(value), statements(nullptr));
                s.span = start;
                expect(Tok::RBrace);
                out.push_back(std::move(s));
            } else if (accept(Tok::EventArrow)) {
                if (events == nullptr)
                    throw ParseError(start, "events may only appear at the end of a function body");
                EventDecl ev;
                ev.span = start;
                ev.trigger = std::move(value);
                ev.guard_state = state_ref();
                expect(Tok::LBrace);
                ev.handler = statements(nullptr);
                expect(Tok::RBrace);
                expect(Tok::Implies);
                ev.next_state = state_ref();
                events->push_back(std::move(ev));
            } else {
                if (events != nullptr && !events->empty())
                    throw ParseError(start, "statement after event declarations");
                Stmt s = assignment(std::move(value));
                s.span = start;
                out.push_back(std::move(s));
            }
            accept(Tok::Semi);
        }
        return out;
    }

    Stmt assignment(Expr value) {
        if (accept(Tok::Arrow)) {
            std::string dest = expect(Tok::Ident).text;
            if (is_party(dest))
                return Stmt::value_send(std::move(value), std::move(dest));
            return Stmt::field_assign(std::move(value), std::move(dest));
        }
        if (at(Tok::AssetArrow)) {
            Span arrow = cur().span;
            ++pos_;
            std::string first = expect(Tok::Ident).text;
            std::string source;
            std::string dest;
            if (accept(Tok::Comma)) {
                source = std::move(first);
                dest = expect(Tok::Ident).text;
            } else {
                // `h -o h'` abbreviates `h -o h, h'`
                if (value.kind != ExprKind::Name)
                    throw ParseError(arrow, "short asset form 'E -o h' requires E to be an asset name");
                source = value.text;
                dest = std::move(first);
            }
            if (is_party(dest))
                return Stmt::asset_send(std::move(value), std::move(source), std::move(dest));
            return Stmt::asset_move(std::move(value), std::move(source), std::move(dest));
        }
        fail("expected '->', '-o', '>>' or a conditional block");
    }

    // Precedence, loosest first: || , && , ! , relational, + - , * /
    Expr expr() { return disjunction(); }

    Expr disjunction() {
        Expr lhs = conjunction();
        while (at(Tok::OrOr)) {
            Span s = cur().span;
            ++pos_;
            lhs = Expr::binary(BinaryOp::Or, std::move(lhs), conjunction(), s);
        }
        return lhs;
    }

    Expr conjunction() {
        Expr lhs = negation();
        while (at(Tok::AndAnd)) {
            Span s = cur().span;
            ++pos_;
            lhs = Expr::binary(BinaryOp::And, std::move(lhs), negation(), s);
        }
        return lhs;
    }

    Expr negation() {
        if (at(Tok::Not)) {
            Span s = cur().span;
            ++pos_;
            return Expr::negation(negation(), s);
        }
        return relation();
    }

    Expr relation() {
        Expr lhs = additive();
        for (;;) {
            BinaryOp op;
            switch (cur().kind) {
            case Tok::EqEq: op = BinaryOp::Eq; break;
            case Tok::NotEq: op = BinaryOp::Ne; break;
            case Tok::Lt: op = BinaryOp::Lt; break;
            case Tok::Le: op = BinaryOp::Le; break;
            case Tok::Gt: op = BinaryOp::Gt; break;
            case Tok::Ge: op = BinaryOp::Ge; break;
            default: return lhs;
            }
            Span s = cur().span;
            ++pos_;
            lhs = Expr::binary(op, std::move(lhs), additive(), s);
        }
    }

    Expr additive() {
        Expr lhs = multiplicative();
        for (;;) {
            BinaryOp op;
            if (at(Tok::Plus))
                op = BinaryOp::Add;
            else if (at(Tok::Minus))
                op = BinaryOp::Sub;
            else
                return lhs;
            Span s = cur().span;
            ++pos_;
            lhs = Expr::binary(op, std::move(lhs), multiplicative(), s);
        }
    }

    Expr multiplicative() {
        Expr lhs = primary();
        for (;;) {
            BinaryOp op;
            if (at(Tok::Star))
                op = BinaryOp::Mul;
            else if (at(Tok::Slash))
                op = BinaryOp::Div;
            else
                return lhs;
            Span s = cur().span;
            ++pos_;
            lhs = Expr::binary(op, std::move(lhs), primary(), s);
        }
    }

    Expr primary() {
        const Token& t = cur();
        switch (t.kind) {
        case Tok::KwNow:
            ++pos_;
            return Expr::now(t.span);
        case Tok::Number: {
            ++pos_;
            try {
                return Expr::number(Decimal::parse(t.text), t.span);
            } catch (const DecimalError& e) {
                throw ParseError(t.span, e.what());
            }
        }
        case Tok::String:
            ++pos_;
            return Expr::string(t.text, t.span);
        case Tok::KwTrue:
        case Tok::KwFalse:
            ++pos_;
            return Expr::boolean_literal(t.kind == Tok::KwTrue, t.span);
        case Tok::Ident:
            ++pos_;
            return Expr::name(t.text, t.span);
        case Tok::KwUses:
        case Tok::KwUseOnce: {
            bool once = t.kind == Tok::KwUseOnce;
            Span s = t.span;
            ++pos_;
            expect(Tok::LParen);
            std::string asset = expect(Tok::Ident).text;
            std::string party;
            if (accept(Tok::Comma))
                party = expect(Tok::Ident).text;
            expect(Tok::RParen);
            return once ? Expr::use_once(asset, party, s) : Expr::uses(asset, party, s);
        }
        case Tok::LParen: {
            std::size_t open = pos_;
            Span s = t.span;
            ++pos_;
            Expr inner = expr();
            if (accept(Tok::Comma)) {
                Expr second = expr();
                inner = Expr::pair(std::move(inner), std::move(second), s);
            }
            std::size_t close = pos_;
            expect(Tok::RParen);
            last_group_open_ = open;
            last_group_close_ = close;
            return inner;
        }
        default:
            fail("expected an expression");
        }
    }

    const std::vector<Token>& toks_;
    const ContractDecl* ctx_;
    std::size_t pos_ = 0;
    std::size_t last_group_open_ = static_cast<std::size_t>(-1);
    std::size_t last_group_close_ = static_cast<std::size_t>(-1);
};

} // namespace

ContractDecl parse(const std::vector<Token>& tokens) { return Parser(tokens, nullptr).contract(); }

Expr parse_expression(std::string_view source) {
    auto tokens = lex(source);
    return Parser(tokens, nullptr).whole_expression();
}

std::vector<Stmt> parse_statements(std::string_view source, const ContractDecl& context) {
    auto tokens = lex(source);
    return Parser(tokens, &context).whole_statements();
}

} // namespace stipula
