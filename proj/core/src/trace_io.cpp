#include "stipula/trace_io.hpp"

#include "json_codec.hpp"

namespace stipula {

using json_codec::Json;

TraceScript parse_script(std::string_view jsonl) {
    TraceScript script;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= jsonl.size()) {
        std::size_t end = jsonl.find('\n', pos);
        if (end == std::string_view::npos)
            end = jsonl.size();
        std::string_view line = jsonl.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#')
            continue;
        auto fail = [&](const std::string& why) -> ScriptError {
            return ScriptError("line " + std::to_string(line_no) + ": " + why);
        };
        try {
            script.transactions.push_back(parse_transaction(line, Time{-1}));
        } catch (const ScriptError& e) {
            throw fail(e.what());
        }
    }
    return script;
}

Transaction parse_transaction(std::string_view line, Time now) {
    try {
        Json j = Json::parse(line);
        if (!j.is_object())
            throw ScriptError("expected a JSON object");
        Transaction tx;
        if (now.seconds < 0 || j.contains("at"))
            tx.at = json_codec::decode_time(j, "at");
        else
            tx.at = now;
        if (j.contains("contract"))
            tx.contract = j.at("contract").get<std::string>();
        std::string kind = j.value("kind", "");
        if (kind == "agree") {
            tx.kind = Transaction::Kind::Agree;
            tx.agree = json_codec::decode_agree(j);
        } else if (kind == "call") {
            tx.kind = Transaction::Kind::Call;
            tx.call = json_codec::decode_call(j);
        } else if (kind == "wait") {
            tx.kind = Transaction::Kind::Wait;
        } else {
            throw ScriptError("unknown transaction kind '" + kind + "'");
        }
        return tx;
    } catch (const Json::exception& e) {
        throw ScriptError(e.what());
    } catch (const json_codec::CodecError& e) {
        throw ScriptError(e.what());
    }
}

std::string format_transaction(const Transaction& tx) {
    Json j;
    j["at"] = tx.at.seconds;
    if (!tx.contract.empty())
        j["contract"] = tx.contract;
    switch (tx.kind) {
    case Transaction::Kind::Agree:
        j["kind"] = "agree";
        j = json_codec::encode_agree(tx.agree, std::move(j));
        break;
    case Transaction::Kind::Call:
        j["kind"] = "call";
        j = json_codec::encode_call(tx.call, std::move(j));
        break;
    case Transaction::Kind::Wait:
        j["kind"] = "wait";
        break;
    }
    return j.dump();
}

std::string format_script(const TraceScript& script) {
    std::string out;
    for (const auto& tx : script.transactions)
        out += format_transaction(tx) + "\n";
    return out;
}

std::string format_record(const TraceRecord& r, bool with_contract) {
    Json j;
    j["at"] = r.at.seconds;
    if (with_contract && !r.contract.empty())
        j["contract"] = r.contract;
    switch (r.kind) {
    case TraceRecord::Kind::Rejected:
        j["kind"] = "rejected";
        if (const auto* c = std::get_if<CallLabel>(&r.label)) {
            j["party"] = c->party;
            j["fn"] = c->function;
        } else {
            j["what"] = "agree";
        }
        j["reason"] = r.detail;
        return j.dump();
    case TraceRecord::Kind::Stuck:
        j["kind"] = "stuck";
        j["reason"] = r.detail;
        j["rule"] = rule_name(Rule::Stuck);
        return j.dump();
    case TraceRecord::Kind::Transition:
        break;
    }
    struct Visitor {
        Json& j;
        void operator()(const SilentLabel&) const { j["kind"] = "silent"; }
        void operator()(const TickLabel&) const { j["kind"] = "tick"; }
        void operator()(const AgreeLabel& a) const {
            j["kind"] = "agree";
            j = json_codec::encode_agree(a, std::move(j));
        }
        void operator()(const CallLabel& c) const {
            j["kind"] = "call";
            j = json_codec::encode_call(c, std::move(j));
        }
        void operator()(const ValueOutLabel& v) const {
            j["kind"] = "value_out";
            j["to"] = v.party;
            j["value"] = json_codec::encode(v.value);
        }
        void operator()(const AssetOutLabel& a) const {
            j["kind"] = "asset_out";
            j["to"] = a.party;
            if (const auto* f = std::get_if<Fungible>(&a.asset))
                j["amount"] = f->amount.to_string();
            else
                j["token"] = std::get<TokenAsset>(a.asset).id;
        }
    };
    std::visit(Visitor{j}, r.label);
    if (r.rule == Rule::EventMatch || r.rule == Rule::DiscardStale)
        j["event"] = Json{{"origin", r.event_origin}, {"trigger", r.event_trigger.seconds}};
    j["rule"] = rule_name(r.rule);
    return j.dump();
}

std::string format_run(const RunResult& result, const FormatOptions& options) {
    bool with_contract = result.final_config.contracts.size() > 1;
    std::string out;
    for (const auto& r : result.records) {
        if (options.observable_only && (r.kind != TraceRecord::Kind::Transition || !is_observable(r.label)))
            continue;
        out += format_record(r, with_contract) + "\n";
    }
    if (result.halted && !options.observable_only) {
        Json j;
        j["at"] = result.final_config.clock.seconds;
        j["kind"] = "halted";
        j["reason"] = *result.halted;
        out += j.dump() + "\n";
    }
    if (options.digest) {
        Json j;
        j["digest"] = digest(result.final_config);
        out += j.dump() + "\n";
    }
    return out;
}

std::string value_json(const Value& v) { return json_codec::encode(v).dump(); }

std::string asset_json(const AssetValue& a) { return json_codec::encode(a).dump(); }

} // namespace stipula
