#pragma once

#include <string>
#include <string_view>

#include "stipula/driver.hpp"

namespace stipula {

/// JSON-lines scripts: one transaction object per line, e.g.
/// {"at":3,"kind":"call","party":"Bob","fn":"accept","args":[],"assets":[{"fungible":"2.0000"}]}.
/// Blank lines and lines starting with '#' are ignored. Throws ScriptError
/// with the offending line number.
TraceScript parse_script(std::string_view jsonl);

/// One transaction object; `at` may be omitted and defaults to `now`.
Transaction parse_transaction(std::string_view json, Time now);

std::string format_transaction(const Transaction& tx);
std::string format_script(const TraceScript& script);

/// One JSON object per record; fields in a fixed order (at, kind, payload,
/// rule). The contract name is included when `with_contract` is set.
std::string format_record(const TraceRecord& record, bool with_contract = false);

struct FormatOptions {
    /// Keep only agreements, calls, value and asset sends.
    bool observable_only = false;
    /// Append {"digest": ...} for the final configuration.
    bool digest = false;
};

/// All records, one per line, followed by a stuck/halt line when relevant.
std::string format_run(const RunResult& result, const FormatOptions& options = {});

/// Canonical JSON of values and assets, as used in scripts and records.
std::string value_json(const Value& v);
std::string asset_json(const AssetValue& a);

} // namespace stipula
