#include "json_codec.hpp"

namespace stipula::json_codec {

Json encode(const Value& v) {
    struct Visitor {
        Json operator()(const Decimal& d) const { return Json{{"real", d.to_string()}}; }
        Json operator()(const std::string& s) const { return s; }
        Json operator()(bool b) const { return b; }
        Json operator()(Time t) const { return Json{{"time", t.seconds}}; }
        Json operator()(const Party& p) const { return Json{{"party", p.name}}; }
        Json operator()(const UsageCode& u) const { return Json{{"code", u.code}}; }
        Json operator()(const TokenRef& t) const { return Json{{"token", t.id}}; }
        Json operator()(const PairValue& p) const {
            return Json{{"pair", Json::array({encode(*p.first), encode(*p.second)})}};
        }
    };
    return std::visit(Visitor{}, v.storage());
}

Json encode(const AssetValue& a) {
    if (const auto* f = std::get_if<Fungible>(&a))
        return Json{{"fungible", f->amount.to_string()}};
    return Json{{"token", std::get<TokenAsset>(a).id}};
}

Json encode_agree(const AgreeLabel& label, Json into) {
    into["parties"] = label.parties;
    Json groups = Json::array();
    for (const auto& g : label.groups) {
        Json values = Json::array();
        for (const auto& v : g.values)
            values.push_back(encode(v));
        groups.push_back(Json{{"parties", g.parties}, {"values", values}});
    }
    into["groups"] = groups;
    return into;
}

Json encode_call(const CallLabel& label, Json into) {
    into["party"] = label.party;
    into["fn"] = label.function;
    Json args = Json::array();
    for (const auto& v : label.args)
        args.push_back(encode(v));
    into["args"] = args;
    Json assets = Json::array();
    for (const auto& a : label.assets)
        assets.push_back(encode(a));
    into["assets"] = assets;
    return into;
}

namespace {

Decimal decode_number(const Json& j) {
    try {
        if (j.is_number_integer())
            return Decimal::from_int(j.get<std::int64_t>());
        if (j.is_number())
            return Decimal::from_double(j.get<double>());
        if (j.is_string())
            return Decimal::parse(j.get<std::string>());
    } catch (const DecimalError& e) {
        throw CodecError(e.what());
    }
    throw CodecError("expected a number, got " + j.dump());
}

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw CodecError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string text(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_string())
        throw CodecError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

} // namespace

Value decode_value(const Json& j) {
    if (j.is_number())
        return decode_number(j);
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_boolean())
        return j.get<bool>();
    if (j.is_object() && j.size() == 1) {
        const auto& [key, v] = *j.items().begin();
        if (key == "real")
            return decode_number(v);
        if (key == "str" && v.is_string())
            return v.get<std::string>();
        if (key == "time" && v.is_number_integer() && v.get<std::int64_t>() >= 0)
            return Time{v.get<std::int64_t>()};
        if (key == "party" && v.is_string())
            return Party{v.get<std::string>()};
        if (key == "code" && v.is_string())
            return UsageCode{v.get<std::string>()};
        if (key == "token" && v.is_string())
            return TokenRef{v.get<std::string>()};
        if (key == "pair" && v.is_array() && v.size() == 2)
            return Value::pair(decode_value(v[0]), decode_value(v[1]));
    }
    throw CodecError("not a value: " + j.dump());
}

AssetValue decode_asset(const Json& j) {
    if (j.is_number() || j.is_string())
        return Fungible{decode_number(j)};
    if (j.is_object() && j.size() == 1) {
        if (j.contains("fungible"))
            return Fungible{decode_number(j.at("fungible"))};
        if (j.contains("token") && j.at("token").is_string())
            return TokenAsset{j.at("token").get<std::string>()};
    }
    throw CodecError("not an asset: " + j.dump());
}

AgreeLabel decode_agree(const Json& j) {
    AgreeLabel label;
    const Json& parties = member(j, "parties");
    if (!parties.is_array())
        throw CodecError("'parties' must be an array");
    for (const auto& p : parties) {
        if (!p.is_string())
            throw CodecError("party names must be strings");
        label.parties.push_back(p.get<std::string>());
    }
    if (j.contains("groups")) {
        for (const auto& g : j.at("groups")) {
            AgreeGroupValues row;
            for (const auto& p : member(g, "parties")) {
                if (!p.is_string())
                    throw CodecError("party names must be strings");
                row.parties.push_back(p.get<std::string>());
            }
            for (const auto& v : member(g, "values"))
                row.values.push_back(decode_value(v));
            label.groups.push_back(std::move(row));
        }
    }
    return label;
}

CallLabel decode_call(const Json& j) {
    CallLabel label;
    label.party = text(j, "party");
    label.function = text(j, "fn");
    if (j.contains("args"))
        for (const auto& v : j.at("args"))
            label.args.push_back(decode_value(v));
    if (j.contains("assets"))
        for (const auto& a : j.at("assets"))
            label.assets.push_back(decode_asset(a));
    return label;
}

Time decode_time(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw CodecError(std::string("field '") + key + "' must be a non-negative integer");
    return Time{v.get<std::int64_t>()};
}

} // namespace stipula::json_codec
