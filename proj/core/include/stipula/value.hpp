#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "stipula/decimal.hpp"

namespace stipula {

/// Logical clock value in seconds.
struct Time {
    std::int64_t seconds = 0;

    friend constexpr bool operator==(Time, Time) = default;
    friend constexpr auto operator<=>(Time, Time) = default;
};

struct Party {
    std::string name;
    friend bool operator==(const Party&, const Party&) = default;
};

struct UsageCode {
    std::string code;
    friend bool operator==(const UsageCode&, const UsageCode&) = default;
};

/// The value of an asset cell that holds a non-fungible token.
struct TokenRef {
    std::string id;
    friend bool operator==(const TokenRef&, const TokenRef&) = default;
};

class Value;

struct PairValue {
    std::shared_ptr<const Value> first;
    std::shared_ptr<const Value> second;
    friend bool operator==(const PairValue& a, const PairValue& b);
};

class Value {
public:
    using Storage = std::variant<Decimal, std::string, bool, Time, Party, UsageCode, TokenRef, PairValue>;

    Value() : v_(Decimal{}) {}
    Value(Decimal d) : v_(d) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(bool b) : v_(b) {}
    Value(Time t) : v_(t) {}
    Value(Party p) : v_(std::move(p)) {}
    Value(UsageCode u) : v_(std::move(u)) {}
    Value(TokenRef t) : v_(std::move(t)) {}
    Value(PairValue p) : v_(std::move(p)) {}

    static Value pair(Value a, Value b) {
        return PairValue{std::make_shared<const Value>(std::move(a)), std::make_shared<const Value>(std::move(b))};
    }

    template <typename T>
    bool is() const {
        return std::holds_alternative<T>(v_);
    }
    template <typename T>
    const T& as() const {
        return std::get<T>(v_);
    }
    const Storage& storage() const { return v_; }

    friend bool operator==(const Value&, const Value&) = default;

private:
    Storage v_;
};

inline bool operator==(const PairValue& a, const PairValue& b) {
    return *a.first == *b.first && *a.second == *b.second;
}

/// Human-readable rendering, used in REPL output and canonical keys.
std::string to_display(const Value& v);

struct Fungible {
    Decimal amount;
    friend bool operator==(const Fungible&, const Fungible&) = default;
};

struct TokenAsset {
    std::string id;
    friend bool operator==(const TokenAsset&, const TokenAsset&) = default;
};

/// Content of an asset cell. An empty cell is Fungible 0; a cell that held a
/// token returns to Fungible 0 once the token leaves.
using AssetValue = std::variant<Fungible, TokenAsset>;

std::string to_display(const AssetValue& a);

bool is_empty(const AssetValue& a);

using Slot = std::variant<Value, AssetValue>;

/// ℓ: contract fields, assets, bound party parameters and, during a body,
/// the function's parameters.
class Memory {
public:
    const Slot* find(const std::string& name) const;
    const Value* value(const std::string& name) const;
    const AssetValue* asset(const std::string& name) const;

    void set_value(const std::string& name, Value v);
    void set_asset(const std::string& name, AssetValue a);
    void erase(const std::string& name);
    bool contains(const std::string& name) const { return slots_.count(name) > 0; }
    bool empty() const { return slots_.empty(); }

    const std::map<std::string, Slot>& slots() const { return slots_; }

    friend bool operator==(const Memory&, const Memory&) = default;

private:
    std::map<std::string, Slot> slots_;
};

} // namespace stipula
