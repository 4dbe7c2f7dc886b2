#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stipula/checker.hpp"
#include "stipula/driver.hpp"
#include "stipula/syntax.hpp"
#include "stipula/trace_io.hpp"

namespace test_support {

inline std::string corpus_path(const std::string& rel) { return std::string(STIPULA_CORPUS_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Parses a corpus contract by base name, e.g. "bike_rental".
inline stipula::ContractDecl contract(const std::string& name) {
    return stipula::parse_source(read_text(corpus_path(name + ".stipula")));
}

inline stipula::TraceScript trace(const std::string& name) {
    return stipula::parse_script(read_text(corpus_path("traces/" + name + ".jsonl")));
}

inline const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names = {"bike_rental",  "free_rent",  "licence", "alea",
                                                   "fg_unordered", "fg_sequenced", "fg_renamed", "hello",
                                                   "hello_delayed"};
    return names;
}

inline stipula::Value real(std::int64_t n) { return stipula::Value(stipula::Decimal::from_int(n)); }

inline stipula::Value real(const char* text) { return stipula::Value(stipula::Decimal::parse(text)); }

inline stipula::AssetValue money(std::int64_t n) { return stipula::Fungible{stipula::Decimal::from_int(n)}; }

inline stipula::AgreeLabel agree(std::vector<std::string> parties,
                                 std::vector<stipula::AgreeGroupValues> groups = {}) {
    return stipula::AgreeLabel{std::move(parties), std::move(groups)};
}

inline stipula::CallLabel call(std::string party, std::string fn, std::vector<stipula::Value> args = {},
                               std::vector<stipula::AssetValue> assets = {}) {
    return stipula::CallLabel{std::move(party), std::move(fn), std::move(args), std::move(assets)};
}

inline stipula::Transaction agree_at(std::int64_t t, stipula::AgreeLabel a) {
    stipula::Transaction tx;
    tx.at = stipula::Time{t};
    tx.kind = stipula::Transaction::Kind::Agree;
    tx.agree = std::move(a);
    return tx;
}

inline stipula::Transaction call_at(std::int64_t t, stipula::CallLabel c) {
    stipula::Transaction tx;
    tx.at = stipula::Time{t};
    tx.kind = stipula::Transaction::Kind::Call;
    tx.call = std::move(c);
    return tx;
}

inline stipula::Transaction wait_at(std::int64_t t) {
    stipula::Transaction tx;
    tx.at = stipula::Time{t};
    tx.kind = stipula::Transaction::Kind::Wait;
    return tx;
}

/// Bike_Rental agreement between Alice (Lender) and Bob (Borrower).
inline stipula::AgreeLabel bike_agreement(std::int64_t cost = 2, std::int64_t rent_time = 3600) {
    return agree({"Alice", "Bob"}, {{{"Alice", "Bob"}, {real(cost), real(rent_time)}}});
}

} // namespace test_support
