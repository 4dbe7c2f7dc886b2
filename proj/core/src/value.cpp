#include "stipula/value.hpp"

namespace stipula {

std::string to_display(const Value& v) {
    struct Visitor {
        std::string operator()(const Decimal& d) const { return d.to_string(); }
        std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(Time t) const { return "t" + std::to_string(t.seconds); }
        std::string operator()(const Party& p) const { return p.name; }
        std::string operator()(const UsageCode& u) const { return "<" + u.code + ">"; }
        std::string operator()(const TokenRef& t) const { return "token " + t.id; }
        std::string operator()(const PairValue& p) const {
            return "(" + to_display(*p.first) + ", " + to_display(*p.second) + ")";
        }
    };
    return std::visit(Visitor{}, v.storage());
}

std::string to_display(const AssetValue& a) {
    if (const auto* f = std::get_if<Fungible>(&a))
        return f->amount.to_string();
    return "token " + std::get<TokenAsset>(a).id;
}

bool is_empty(const AssetValue& a) {
    const auto* f = std::get_if<Fungible>(&a);
    return f != nullptr && f->amount.is_zero();
}

const Slot* Memory::find(const std::string& name) const {
    auto it = slots_.find(name);
    return it == slots_.end() ? nullptr : &it->second;
}

const Value* Memory::value(const std::string& name) const {
    const Slot* s = find(name);
    return s == nullptr ? nullptr : std::get_if<Value>(s);
}

const AssetValue* Memory::asset(const std::string& name) const {
    const Slot* s = find(name);
    return s == nullptr ? nullptr : std::get_if<AssetValue>(s);
}

void Memory::set_value(const std::string& name, Value v) { slots_[name] = std::move(v); }

void Memory::set_asset(const std::string& name, AssetValue a) { slots_[name] = std::move(a); }

void Memory::erase(const std::string& name) { slots_.erase(name); }

} // namespace stipula
