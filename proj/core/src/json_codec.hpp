#pragma once

#include <json.hpp>

#include "stipula/driver.hpp"

namespace stipula::json_codec {

using Json = nlohmann::ordered_json;

class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json encode(const Value& v);
Json encode(const AssetValue& a);
Json encode_agree(const AgreeLabel& label, Json into);
Json encode_call(const CallLabel& label, Json into);

Value decode_value(const Json& j);
AssetValue decode_asset(const Json& j);
AgreeLabel decode_agree(const Json& j);
CallLabel decode_call(const Json& j);

/// Required integer field `at`.
Time decode_time(const Json& j, const char* key);

} // namespace stipula::json_codec
