#include <gtest/gtest.h>

#include <random>

#include "stipula/equivalence.hpp"
#include "support.hpp"

using namespace stipula;
using namespace test_support;

namespace {

LawContext plain_context() {
    std::mt19937_64 rng(1);
    return random_law_context(rng);
}

LawInstance instance(int law, std::string_view first, std::string_view second) {
    ContractDecl ctx = plain_context().skeleton;
    return LawInstance{law, parse_statements(first, ctx).at(0), parse_statements(second, ctx).at(0)};
}

} // namespace

TEST(Laws, ShapesAreDistinct) {
    std::set<std::string> shapes;
    for (int law = 1; law <= 10; ++law)
        shapes.insert(law_shape(law));
    EXPECT_EQ(shapes.size(), 10u);
    EXPECT_NE(law_shape(4).find("-o"), std::string::npos);
    EXPECT_NE(law_shape(4).find("->"), std::string::npos);
}

TEST(Laws, ContextIsWellFormed) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        LawContext ctx = random_law_context(rng);
        EXPECT_FALSE(has_errors(check_wellformed(fill(ctx, {})))) << pretty_print(ctx.skeleton);
        EXPECT_GE(ctx.universe.horizon, 2);
    }
}

TEST(Laws, FillInsertsAtTheHole) {
    LawContext ctx = plain_context();
    ContractDecl empty = fill(ctx, {});
    LawInstance inst = instance(2, "1 -> A", "2 -> B");
    ContractDecl filled = fill(ctx, {inst.first, inst.second});
    auto body_of = [&](const ContractDecl& d) -> const std::vector<Stmt>& {
        for (const auto& f : d.functions)
            if (f.name == ctx.function)
                return f.body;
        throw std::logic_error("no hole function");
    };
    ASSERT_EQ(body_of(filled).size(), body_of(empty).size() + 2);
    EXPECT_EQ(body_of(filled)[ctx.hole_index], inst.first);
    EXPECT_EQ(body_of(filled)[ctx.hole_index + 1], inst.second);
}

TEST(Laws, SideConditions) {
    EXPECT_NO_THROW(check_side_conditions(instance(1, "x1 -> A", "x2 -> B")));
    EXPECT_NO_THROW(check_side_conditions(instance(2, "1 -> x1", "x2 -> B")));
    EXPECT_THROW(check_side_conditions(instance(2, "1 -> x1", "x1 -> B")), SideConditionViolated);
    EXPECT_NO_THROW(check_side_conditions(instance(3, "1 -> x1", "2 -> x2")));
    EXPECT_THROW(check_side_conditions(instance(3, "1 -> x1", "x1 -> x2")), SideConditionViolated);
    EXPECT_THROW(check_side_conditions(instance(3, "1 -> x1", "2 -> x1")), SideConditionViolated);
    EXPECT_THROW(check_side_conditions(instance(4, "1 -o h1, A", "h1 -> B")), SideConditionViolated);
    EXPECT_NO_THROW(check_side_conditions(instance(4, "1 -o h1, A", "h2 -> B")));
    EXPECT_THROW(check_side_conditions(instance(8, "h2 -o h1, A", "1 -o h2, B")), SideConditionViolated);
    EXPECT_THROW(check_side_conditions(instance(10, "1 -o h1, h2", "1 -o h1, h3")), SideConditionViolated);
    EXPECT_NO_THROW(check_side_conditions(instance(10, "1 -o h1, h2", "1 -o h3, h4")));
}

TEST(Laws, ShapeMismatchIsReported) {
    LawInstance wrong = instance(4, "1 -> A", "2 -> B");
    EXPECT_THROW(check_side_conditions(wrong), SideConditionViolated);
    EXPECT_THROW(check_law(wrong, plain_context()), SideConditionViolated);
}

TEST(Laws, RandomInstancesHold) {
    std::mt19937_64 rng(31);
    for (int law = 1; law <= 10; ++law)
        for (int i = 0; i < 3; ++i) {
            LawInstance inst = random_law_instance(law, rng);
            EXPECT_NO_THROW(check_side_conditions(inst)) << law;
            LawContext ctx = random_law_context(rng);
            BisimVerdict v = check_law(inst, ctx);
            EXPECT_TRUE(v.related) << "law " << law << ": " << pretty_print(inst.first) << " / "
                                   << pretty_print(inst.second) << ": " << v.explanation;
        }
}

TEST(Laws, ViolatingInstancesAreObservable) {
    EXPECT_FALSE(violating_instance(1).has_value());
    for (int law = 2; law <= 10; ++law) {
        auto v = violating_instance(law);
        ASSERT_TRUE(v.has_value()) << law;
        EXPECT_THROW(check_side_conditions(v->first), SideConditionViolated) << law;
        BisimVerdict verdict = compare_orders(v->first, v->second);
        EXPECT_FALSE(verdict.related) << law;
        ASSERT_TRUE(verdict.witness.has_value()) << law;
        EXPECT_TRUE(check_witness(fill(v->second, {v->first.first, v->first.second}),
                                  fill(v->second, {v->first.second, v->first.first}), *verdict.witness)
                        .has_value())
            << law;
    }
}
