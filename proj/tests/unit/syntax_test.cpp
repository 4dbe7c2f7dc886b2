#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace stipula;
using namespace test_support;

namespace {

std::vector<Tok> kinds(std::string_view src) {
    std::vector<Tok> out;
    for (const auto& t : lex(src))
        out.push_back(t.kind);
    return out;
}

} // namespace

TEST(Lexer, AsciiOperators) {
    EXPECT_EQ(kinds("-> -o >> => == != <= >= && || !"),
              (std::vector<Tok>{Tok::Arrow, Tok::AssetArrow, Tok::EventArrow, Tok::Implies, Tok::EqEq, Tok::NotEq,
                                Tok::Le, Tok::Ge, Tok::AndAnd, Tok::OrOr, Tok::Not, Tok::End}));
}

TEST(Lexer, TypesetAliases) {
    EXPECT_EQ(kinds("→ ⊸ ≫ ⇒"), kinds("-> -o >> =>"));
}

TEST(Lexer, KeywordsNumbersAndStrings) {
    auto toks = lex("stipula assets fields agreement now true false uses use_once 12.5 \"hi\" x_1");
    std::vector<Tok> want = {Tok::KwStipula, Tok::KwAssets, Tok::KwFields, Tok::KwAgreement, Tok::KwNow,
                             Tok::KwTrue,    Tok::KwFalse,  Tok::KwUses,   Tok::KwUseOnce,   Tok::Number,
                             Tok::String,    Tok::Ident,    Tok::End};
    ASSERT_EQ(toks.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        EXPECT_EQ(toks[i].kind, want[i]) << i;
    EXPECT_EQ(toks[9].text, "12.5");
    EXPECT_EQ(toks[10].text, "hi");
}

TEST(Lexer, CommaDecimalIsAnError) { EXPECT_THROW(lex("0,1 -o wallet"), LexError); }

TEST(Lexer, CommentsAndSpans) {
    auto toks = lex("// note\n  x // trailing\ny");
    ASSERT_EQ(toks.size(), 3u);
    EXPECT_EQ(toks[0].span.line, 2u);
    EXPECT_EQ(toks[0].span.column, 3u);
    EXPECT_EQ(toks[1].span.line, 3u);
}

TEST(Lexer, UnterminatedStringIsAnError) { EXPECT_THROW(lex("\"open"), LexError); }

TEST(Parser, ArithmeticPrecedence) {
    Expr e = parse_expression("1 + 2 * 3");
    ASSERT_EQ(e.kind, ExprKind::Binary);
    EXPECT_EQ(e.op, BinaryOp::Add);
    EXPECT_EQ(e.operands[1].op, BinaryOp::Mul);
}

TEST(Parser, LogicalPrecedence) {
    Expr e = parse_expression("a || b && !c == d");
    EXPECT_EQ(e.op, BinaryOp::Or);
    const Expr& rhs = e.operands[1];
    EXPECT_EQ(rhs.op, BinaryOp::And);
    EXPECT_EQ(rhs.operands[1].kind, ExprKind::Not);
    EXPECT_EQ(rhs.operands[1].operands[0].op, BinaryOp::Eq);
}

TEST(Parser, LeftAssociativeSubtraction) {
    Expr e = parse_expression("5 - 2 - 1");
    EXPECT_EQ(e.op, BinaryOp::Sub);
    EXPECT_EQ(e.operands[0].op, BinaryOp::Sub);
    EXPECT_EQ(e.operands[1].real, Decimal::from_int(1));
}

TEST(Parser, BikeRentalShape) {
    ContractDecl c = contract("bike_rental");
    EXPECT_EQ(c.name, "Bike_Rental");
    EXPECT_EQ(c.assets, (std::vector<std::string>{"wallet"}));
    EXPECT_EQ(c.fields, (std::vector<std::string>{"cost", "rent_time", "use_code"}));
    EXPECT_EQ(c.agreement.parties, (std::vector<std::string>{"Lender", "Borrower"}));
    EXPECT_EQ(c.agreement.initial_state, "Inactive");
    ASSERT_EQ(c.functions.size(), 3u);
    const FunctionDecl& accept = c.functions[1];
    EXPECT_EQ(accept.guard_state, "Proposal");
    EXPECT_EQ(accept.caller, "Borrower");
    EXPECT_EQ(accept.asset_params, (std::vector<std::string>{"y"}));
    ASSERT_TRUE(accept.precondition.has_value());
    ASSERT_EQ(accept.body.size(), 2u);
    EXPECT_EQ(accept.body[0].kind, StmtKind::AssetMove);
    EXPECT_EQ(accept.body[1].kind, StmtKind::ValueSend);
    ASSERT_EQ(accept.events.size(), 1u);
    EXPECT_EQ(accept.events[0].guard_state, "Using");
    EXPECT_EQ(accept.events[0].next_state, "End");
    EXPECT_EQ(accept.next_state, "Using");
}

TEST(Parser, ArrowDestinationsAreClassifiedByDeclaredNames) {
    ContractDecl c = contract("licence");
    const FunctionDecl& activate = c.functions[1];
    EXPECT_EQ(activate.body[0].kind, StmtKind::AssetMove);
    EXPECT_EQ(activate.body[1].kind, StmtKind::AssetSend);
    EXPECT_EQ(activate.body[1].target, "Authority");
    EXPECT_EQ(activate.body[2].kind, StmtKind::ValueSend);
    EXPECT_EQ(activate.body[2].value.kind, ExprKind::Uses);
    EXPECT_EQ(activate.body[2].value.party, "Licensee");
}

TEST(Parser, ConditionalsNest) {
    ContractDecl c = contract("alea");
    const FunctionDecl& data = c.functions[2];
    ASSERT_EQ(data.body.size(), 3u);
    for (const auto& s : data.body) {
        EXPECT_EQ(s.kind, StmtKind::If);
        EXPECT_FALSE(s.body.empty());
    }
}

TEST(Parser, ErrorsCarryPositions) {
    try {
        parse_source("stipula C {\n  fields x\n  agreement (A)(x) { A : x } => \n}");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.span.line, 4u);
    }
    EXPECT_THROW(parse_source("stipula C { @Q A : f { } }"), ParseError);
}

TEST(Printer, CorpusRoundTrips) {
    for (const auto& name : corpus_names()) {
        ContractDecl c = contract(name);
        std::string printed = pretty_print(c);
        EXPECT_EQ(parse_source(printed), c) << name;
        EXPECT_EQ(pretty_print(parse_source(printed)), printed) << name;
    }
}

namespace {

Expr random_expr(std::mt19937_64& rng, int depth) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    static const char* names[] = {"x", "y", "cost", "wallet"};
    static const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                   BinaryOp::Eq,  BinaryOp::Ne,  BinaryOp::Lt,  BinaryOp::Le,
                                   BinaryOp::Gt,  BinaryOp::Ge,  BinaryOp::And, BinaryOp::Or};
    if (depth == 0 || pick(3) == 0) {
        switch (pick(6)) {
        case 0:
            return Expr::now();
        case 1:
            return Expr::number(Decimal::from_units(pick(100000)));
        case 2:
            return Expr::string(pick(2) ? "s" : "with \"quote\"");
        case 3:
            return Expr::boolean_literal(pick(2));
        case 4:
            return Expr::uses("wallet", pick(2) ? "" : "A");
        default:
            return Expr::name(names[pick(4)]);
        }
    }
    if (pick(6) == 0)
        return Expr::negation(random_expr(rng, depth - 1));
    return Expr::binary(ops[pick(12)], random_expr(rng, depth - 1), random_expr(rng, depth - 1));
}

} // namespace

TEST(Printer, RandomExpressionsRoundTrip) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 3000; ++i) {
        Expr e = random_expr(rng, 4);
        std::string text = pretty_print(e);
        EXPECT_EQ(parse_expression(text), e) << text;
    }
}

TEST(Printer, StatementsRoundTrip) {
    ContractDecl ctx = contract("bike_rental");
    auto stmts = parse_statements("cost * 2 -> Lender  wallet -o Borrower  1 -o wallet, wallet  (cost > 1) { 3 -> cost }",
                                  ctx);
    ASSERT_EQ(stmts.size(), 4u);
    for (const auto& s : stmts)
        EXPECT_EQ(parse_statements(pretty_print(s), ctx).front(), s) << pretty_print(s);
}
