#include <gtest/gtest.h>

#include "support.hpp"

using namespace stipula;
using namespace test_support;

namespace {

struct Env {
    Memory memory;
    Time now{100};
    std::uint64_t seq = 0;

    Env() {
        memory.set_value("x", real(3));
        memory.set_value("s", Value("text"));
        memory.set_value("A", Value(Party{"Alice"}));
        memory.set_value("deadline", Value(Time{40}));
        memory.set_asset("wallet", money(5));
        memory.set_asset("box", TokenAsset{"tk1"});
    }

    Value operator()(std::string_view src) { return eval(parse_expression(src), EvalContext{memory, now, &seq}); }
};

} // namespace

TEST(Eval, Literals) {
    Env env;
    EXPECT_EQ(env("2.5"), real("2.5"));
    EXPECT_EQ(env("\"a\""), Value("a"));
    EXPECT_EQ(env("true"), Value(true));
    EXPECT_EQ(env("now"), Value(Time{100}));
}

TEST(Eval, NamesReadMemory) {
    Env env;
    EXPECT_EQ(env("x"), real(3));
    EXPECT_EQ(env("A"), Value(Party{"Alice"}));
    EXPECT_EQ(env("wallet"), real(5));
    EXPECT_EQ(env("box"), Value(TokenRef{"tk1"}));
    EXPECT_THROW(env("missing"), EvalError);
}

TEST(Eval, Arithmetic) {
    Env env;
    EXPECT_EQ(env("x * 2 + 1"), real(7));
    EXPECT_EQ(env("wallet * 0.1"), real("0.5"));
    EXPECT_EQ(env("10 / 4"), real("2.5"));
    EXPECT_THROW(env("1 / 0"), EvalError);
    EXPECT_THROW(env("s + 1"), EvalError);
}

TEST(Eval, TimeArithmetic) {
    Env env;
    EXPECT_EQ(env("now + 3600"), Value(Time{3700}));
    EXPECT_EQ(env("now - deadline"), real(60));
    EXPECT_EQ(env("deadline + x"), Value(Time{43}));
    EXPECT_THROW(env("deadline - 50"), EvalError);
    EXPECT_THROW(env("now + 0.5"), EvalError);
}

TEST(Eval, Comparisons) {
    Env env;
    EXPECT_EQ(env("x == 3"), Value(true));
    EXPECT_EQ(env("s == \"text\""), Value(true));
    EXPECT_EQ(env("s != \"other\""), Value(true));
    EXPECT_EQ(env("now > deadline"), Value(true));
    EXPECT_EQ(env("now >= 100"), Value(true));
    EXPECT_EQ(env("A == A"), Value(true));
    EXPECT_THROW(env("s < 3"), EvalError);
}

TEST(Eval, BooleanShortCircuit) {
    Env env;
    EXPECT_EQ(env("false && missing"), Value(false));
    EXPECT_EQ(env("true || missing"), Value(true));
    EXPECT_THROW(env("true && missing"), EvalError);
    EXPECT_EQ(env("!(x > 5)"), Value(true));
    EXPECT_THROW(env("!x"), EvalError);
}

TEST(Eval, PairsAndUsageCodes) {
    Env env;
    EXPECT_EQ(env("(uses(box), x)"), Value::pair(UsageCode{"use:tk1#1"}, real(3)));
    EXPECT_EQ(env("uses(box, A)"), Value(UsageCode{"use:tk1:Alice#2"}));
    EXPECT_EQ(env("use_once(box)"), Value(UsageCode{"once:tk1#3"}));
    EXPECT_EQ(env.seq, 3u);
    EXPECT_THROW(env("uses(wallet)"), EvalError);
}

TEST(Eval, UsageCodesNeedACounter) {
    Env env;
    EXPECT_THROW(eval(parse_expression("uses(box)"), EvalContext{env.memory, env.now, nullptr}), EvalError);
}

TEST(Eval, OverflowBecomesEvalError) {
    Env env;
    EXPECT_THROW(env("900000000000000 * 900000000000000"), EvalError);
}

TEST(Eval, ToTime) {
    EXPECT_EQ(to_time(Value(Time{5})), Time{5});
    EXPECT_EQ(to_time(real(7)), Time{7});
    EXPECT_THROW(to_time(real("7.5")), EvalError);
    EXPECT_THROW(to_time(real(-1)), EvalError);
    EXPECT_THROW(to_time(Value("7")), EvalError);
}
