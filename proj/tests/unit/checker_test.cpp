#include <gtest/gtest.h>

#include "support.hpp"

using namespace stipula;
using namespace test_support;

namespace {

std::vector<std::string> errors(std::string_view src) {
    std::vector<std::string> out;
    for (const auto& d : check_wellformed(parse_source(src)))
        if (d.severity == Severity::Error)
            out.push_back(d.message);
    return out;
}

bool mentions(const std::vector<std::string>& msgs, const std::string& needle) {
    for (const auto& m : msgs)
        if (m.find(needle) != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST(Checker, CorpusIsWellFormed) {
    for (const auto& name : corpus_names())
        EXPECT_FALSE(has_errors(check_wellformed(contract(name)))) << name;
}

TEST(Checker, DuplicateNamesAcrossNamespaces) {
    auto e = errors("stipula C { assets h fields h agreement (A)() { } => @Q }");
    EXPECT_TRUE(mentions(e, "duplicate name 'h'"));
    e = errors("stipula C { fields A agreement (A)() { } => @Q }");
    EXPECT_TRUE(mentions(e, "duplicate name 'A'"));
}

TEST(Checker, AgreementFieldsMustBePartitioned) {
    auto e = errors("stipula C { fields x, y agreement (A, B)(x, y) { A : x  B : x } => @Q }");
    EXPECT_TRUE(mentions(e, "'x' appears in more than one group"));
    EXPECT_TRUE(mentions(e, "'y' is not agreed by any group"));
    e = errors("stipula C { fields x agreement (A)(z) { A : z } => @Q }");
    EXPECT_TRUE(mentions(e, "'z' is not a declared field"));
    e = errors("stipula C { fields x agreement (A)(x) { B : x } => @Q }");
    EXPECT_TRUE(mentions(e, "not an agreement party"));
}

TEST(Checker, ParametersMustNotReachEvents) {
    auto e = errors(R"(stipula C {
      fields x
      agreement (A)(x) { A : x } => @Q
      @Q A : f (z) { now + z >> @Q { z -> A } => @Q } => @Q
    })");
    EXPECT_TRUE(mentions(e, "parameter escapes into event: 'z'"));
}

TEST(Checker, AssetsOnlyMoveWithLollipop) {
    auto e = errors(R"(stipula C {
      assets h
      agreement (A)() { } => @Q
      @Q A : f { 1 -> h } => @Q
    })");
    EXPECT_TRUE(mentions(e, "cannot be the destination of '->'"));
    e = errors(R"(stipula C {
      fields x
      agreement (A)() { } => @Q
      @Q A : f { x -o A } => @Q
    })");
    EXPECT_TRUE(mentions(e, "must be an asset"));
}

TEST(Checker, UnknownNamesAndCallers) {
    auto e = errors(R"(stipula C {
      agreement (A)() { } => @Q
      @Q B : f { ghost -> A } => @Q
    })");
    EXPECT_TRUE(mentions(e, "unknown name 'ghost'"));
    EXPECT_TRUE(mentions(e, "caller 'B'"));
}

TEST(Checker, UnreachableStateIsOnlyAWarning) {
    auto diags = check_wellformed(parse_source(R"(stipula C {
      agreement (A)() { } => @Q
      @Q A : f { } => @Q
      @Lost A : g { } => @Q
    })"));
    EXPECT_FALSE(has_errors(diags));
    ASSERT_FALSE(diags.empty());
    EXPECT_EQ(diags.front().severity, Severity::Warning);
    EXPECT_NE(diags.front().message.find("@Lost"), std::string::npos);
}

TEST(Checker, DrainLintFlagsPartialMoves) {
    auto lints = lint_asset_drain(parse_source(R"(stipula C {
      assets h
      agreement (A)() { } => @Q
      @Q A : f [y] { 1 -o y, h } => @Q
      @Q A : g [y] { y -o h } => @Q
    })"));
    ASSERT_EQ(lints.size(), 1u);
    EXPECT_NE(lints[0].message.find("'f'"), std::string::npos);
    EXPECT_TRUE(lint_asset_drain(contract("bike_rental")).empty());
}

TEST(Checker, StateGraphOfBikeRental) {
    StateGraph g = state_graph(contract("bike_rental"));
    EXPECT_EQ(g.states, (std::set<std::string>{"Inactive", "Proposal", "Using", "End"}));
    EXPECT_EQ(g.reachable, g.states);
    EXPECT_EQ(g.edges["Using"], (std::set<std::string>{"End"}));
}

TEST(Checker, RenderFormat) {
    Diagnostic d{Severity::Error, Span{3, 7}, "boom"};
    EXPECT_EQ(render(d, "c.stipula"), "c.stipula:3:7: error: boom");
}
