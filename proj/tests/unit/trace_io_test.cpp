#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace stipula;
using namespace test_support;

TEST(TraceIo, ParsesTheRentalScript) {
    TraceScript s = trace("bike_rental.table3");
    ASSERT_EQ(s.transactions.size(), 3u);
    EXPECT_EQ(s.transactions[0], agree_at(0, bike_agreement()));
    EXPECT_EQ(s.transactions[1], call_at(1, call("Alice", "offer", {real(123)})));
    EXPECT_EQ(s.transactions[2], call_at(3, call("Bob", "accept", {}, {money(2)})));
}

TEST(TraceIo, SkipsBlankAndCommentLines) {
    TraceScript s = parse_script("\n# comment\n{\"at\":4,\"kind\":\"wait\"}\n   \n");
    ASSERT_EQ(s.transactions.size(), 1u);
    EXPECT_EQ(s.transactions[0], wait_at(4));
}

TEST(TraceIo, ErrorsNameTheLine) {
    try {
        parse_script("{\"at\":0,\"kind\":\"wait\"}\n{\"at\":1,\"kind\":\"dance\"}\n");
        FAIL() << "expected a script error";
    } catch (const ScriptError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(parse_script("{\"kind\":\"wait\"}"), ScriptError);
    EXPECT_THROW(parse_script("{\"at\":-1,\"kind\":\"wait\"}"), ScriptError);
    EXPECT_THROW(parse_script("not json"), ScriptError);
    EXPECT_THROW(parse_script("{\"at\":0,\"kind\":\"call\",\"party\":\"A\"}"), ScriptError);
}

TEST(TraceIo, TransactionDefaultsToNow) {
    Transaction tx = parse_transaction(R"({"kind":"call","party":"Bob","fn":"end"})", Time{9});
    EXPECT_EQ(tx, call_at(9, call("Bob", "end")));
    EXPECT_EQ(parse_transaction(R"({"at":2,"kind":"wait"})", Time{9}).at, Time{2});
}

TEST(TraceIo, ValueEncodings) {
    EXPECT_EQ(value_json(real("2.5")), R"({"real":"2.5000"})");
    EXPECT_EQ(value_json(Value("hi")), R"("hi")");
    EXPECT_EQ(value_json(Value(true)), "true");
    EXPECT_EQ(value_json(Value(Time{7})), R"({"time":7})");
    EXPECT_EQ(value_json(Value(Party{"Ada"})), R"({"party":"Ada"})");
    EXPECT_EQ(value_json(Value(TokenRef{"t"})), R"({"token":"t"})");
    EXPECT_EQ(value_json(Value::pair(real(1), Value("x"))), R"({"pair":[{"real":"1.0000"},"x"]})");
    EXPECT_EQ(asset_json(money(2)), R"({"fungible":"2.0000"})");
    EXPECT_EQ(asset_json(TokenAsset{"locker7"}), R"({"token":"locker7"})");
}

TEST(TraceIo, FormattedScriptsRoundTrip) {
    std::mt19937_64 rng(9);
    for (const auto& name : corpus_names()) {
        ContractDecl decl = contract(name);
        for (int i = 0; i < 20; ++i) {
            TraceScript s = random_script(decl, rng);
            EXPECT_EQ(parse_script(format_script(s)), s) << name;
        }
    }
}

TEST(TraceIo, RecordFormat) {
    RunResult r = run_trace(contract("bike_rental"), trace("bike_rental.table3"));
    EXPECT_EQ(format_record(r.records[1]), R"({"at":1,"kind":"tick","rule":"Tick"})");
    EXPECT_EQ(format_record(r.records[3]), R"({"at":1,"kind":"silent","rule":"Field_Update"})");
    EXPECT_EQ(format_record(r.records[9]),
              R"({"at":3,"kind":"value_out","to":"Bob","value":{"real":"123.0000"},"rule":"Value_Send"})");
    EXPECT_NE(format_record(r.records[0], true).find(R"("contract":"Bike_Rental")"), std::string::npos);
}

TEST(TraceIo, RunFormatOptions) {
    RunResult r = run_trace(contract("bike_rental"), trace("bike_rental.table3"));
    std::string all = format_run(r);
    std::string obs = format_run(r, FormatOptions{true, false});
    std::string dig = format_run(r, FormatOptions{false, true});
    auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
    EXPECT_EQ(lines(all), static_cast<long>(r.records.size()));
    EXPECT_EQ(lines(obs), 4);
    EXPECT_EQ(obs.find("tick"), std::string::npos);
    EXPECT_NE(dig.find("{\"digest\":\"" + digest(r.final_config) + "\"}"), std::string::npos);
}
