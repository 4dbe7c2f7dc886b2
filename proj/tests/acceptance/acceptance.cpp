#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "stipula/equivalence.hpp"
#include "support.hpp"

using namespace stipula;
using namespace test_support;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string& why) {
        if (!cond && pass) {
            pass = false;
            detail = why;
        }
    }
};

struct Cli {
    int status = -1;
    std::string out;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

Cli run_cli(const std::string& args) {
    Cli r;
    std::string cmd = quote(STIPULA_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

std::string cpath(const std::string& rel) { return quote(corpus_path(rel)); }

Universe universe(const std::string& name) { return parse_universe(read_text(corpus_path("universes/" + name + ".json"))); }

std::string universe_of(const std::string& contract_name) {
    if (contract_name.rfind("fg_", 0) == 0)
        return "fg";
    if (contract_name.rfind("hello", 0) == 0)
        return "hello";
    return contract_name;
}

bool any_negative_fungible(const Configuration& c) {
    for (const auto& rc : c.contracts)
        for (const auto& [name, slot] : rc.memory.slots())
            if (const auto* a = std::get_if<AssetValue>(&slot))
                if (const auto* f = std::get_if<Fungible>(a); f && f->amount < Decimal{})
                    return true;
    return false;
}

bool has_expired_event(const Configuration& c) {
    for (const auto& rc : c.contracts)
        for (const auto& ev : rc.pending)
            if (ev.trigger < c.clock)
                return true;
    return false;
}

bool idle_everywhere(const Configuration& c) {
    for (const auto& rc : c.contracts)
        if (rc.residual || rc.stuck)
            return false;
    return true;
}

/// Observable asset sends as "party amount" or "party token:id".
std::vector<std::string> payouts(const RunResult& r) {
    std::vector<std::string> out;
    for (const auto& rec : r.records)
        if (rec.kind == TraceRecord::Kind::Transition)
            if (const auto* a = std::get_if<AssetOutLabel>(&rec.label)) {
                if (const auto* f = std::get_if<Fungible>(&a->asset))
                    out.push_back(a->party + " " + f->amount.to_string());
                else
                    out.push_back(a->party + " token:" + std::get<TokenAsset>(a->asset).id);
            }
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v)
        s += (s.empty() ? "" : ", ") + x;
    return s;
}

// ---------------------------------------------------------------------------

Outcome initial_transitions() {
    Outcome o;
    Cli r = run_cli("run " + cpath("bike_rental.stipula") + " " + cpath("traces/bike_rental.table3.jsonl"));
    o.require(r.status == 0, "run exited with " + std::to_string(r.status));
    const std::vector<std::string> want = {
        R"({"at":0,"kind":"agree","parties":["Alice","Bob"],"groups":[{"parties":["Alice","Bob"],"values":[{"real":"2.0000"},{"real":"3600.0000"}]}],"rule":"Agree"})",
        R"({"at":1,"kind":"tick","rule":"Tick"})",
        R"({"at":1,"kind":"call","party":"Alice","fn":"offer","args":[{"real":"123.0000"}],"assets":[],"rule":"Function"})",
        R"({"at":1,"kind":"silent","rule":"Field_Update"})",
        R"({"at":1,"kind":"silent","rule":"State_Change"})",
        R"({"at":2,"kind":"tick","rule":"Tick"})",
        R"({"at":3,"kind":"tick","rule":"Tick"})",
        R"({"at":3,"kind":"call","party":"Bob","fn":"accept","args":[],"assets":[{"fungible":"2.0000"}],"rule":"Function"})",
    };
    auto got = lines(r.out);
    o.require(got.size() >= want.size(), "only " + std::to_string(got.size()) + " records");
    for (std::size_t i = 0; o.pass && i < want.size(); ++i)
        o.require(got[i] == want[i], "record " + std::to_string(i + 1) + " is " + got[i]);

    ContractDecl decl = contract("bike_rental");
    RunResult run = run_trace(decl, trace("bike_rental.table3"));
    std::vector<Configuration> seen;
    replay(decl, run.records, EventMode::DiscardStale, [&](const Configuration& c) { seen.push_back(c); });
    o.require(seen.size() > want.size(), "replay too short");
    if (!o.pass)
        return o;
    auto check_ell = [&](const Configuration& c, const std::string& at) {
        const Memory& m = c.contract("Bike_Rental").memory;
        o.require(m.value("Lender") && *m.value("Lender") == Value(Party{"Alice"}), at + ": Lender");
        o.require(m.value("Borrower") && *m.value("Borrower") == Value(Party{"Bob"}), at + ": Borrower");
        o.require(m.value("cost") && *m.value("cost") == real(2), at + ": cost");
        o.require(m.value("rent_time") && *m.value("rent_time") == real(3600), at + ": rent_time");
    };
    // seen[k] is the configuration after record k (seen[0] is the start).
    const RuntimeContract& agreed = seen[1].contract("Bike_Rental");
    check_ell(seen[1], "after Agree");
    o.require(agreed.state == "Inactive" && seen[1].clock == Time{0}, "after Agree: state or clock");
    const RuntimeContract& called = seen[3].contract("Bike_Rental");
    o.require(called.memory.value("z") && *called.memory.value("z") == real(123), "after offer: z");
    o.require(called.residual.has_value(), "after offer: body not pending");
    check_ell(seen[4], "after Field_Update");
    const Memory& updated = seen[4].contract("Bike_Rental").memory;
    o.require(updated.value("use_code") && *updated.value("use_code") == real(123), "after Field_Update: use_code");
    o.require(seen[5].contract("Bike_Rental").state == "Proposal", "after State_Change: state");
    o.require(seen[7].clock == Time{3} && seen[7].contract("Bike_Rental").state == "Proposal", "after Ticks");
    const RuntimeContract& accepting = seen[8].contract("Bike_Rental");
    check_ell(seen[8], "after accept");
    o.require(accepting.memory.value("use_code") && *accepting.memory.value("use_code") == real(123),
              "after accept: use_code");
    o.require(accepting.memory.asset("y") && *accepting.memory.asset("y") == money(2), "after accept: y");
    o.require(accepting.residual && accepting.residual->target_state == "Using", "after accept: residual");
    return o;
}

Outcome event_precedence() {
    Outcome o;
    Cli r = run_cli("run " + cpath("bike_rental.stipula") + " " + cpath("traces/bike_rental.table3.jsonl") +
                    " --until 3604 --observable");
    o.require(r.status == 0, "run exited with " + std::to_string(r.status));
    auto got = lines(r.out);
    std::vector<std::string> at3603;
    for (const auto& l : got)
        if (l.rfind(R"({"at":3603,)", 0) == 0 || l.rfind(R"({"at":3604,)", 0) == 0)
            at3603.push_back(l);
    const std::vector<std::string> want = {
        R"({"at":3603,"kind":"value_out","to":"Bob","value":"End_Reached","rule":"Value_Send"})",
        R"({"at":3603,"kind":"asset_out","to":"Alice","amount":"2.0000","rule":"Asset_Send"})",
    };
    o.require(at3603 == want, "observations after the deadline: " + join(at3603));

    ContractDecl decl = contract("bike_rental");
    TraceScript base = trace("bike_rental.table3");
    std::vector<CallLabel> calls = universe("bike_rental").calls;
    calls.push_back(call("Bob", "end"));
    calls.push_back(call("Alice", "offer", {real(5)}));
    for (const auto& c : calls) {
        TraceScript s = base;
        s.transactions.push_back(call_at(3603, c));
        RunResult run = run_trace(decl, s);
        const TraceRecord& last = run.records.back();
        o.require(last.kind == TraceRecord::Kind::Rejected && last.at == Time{3603},
                  "call " + c.party + ":" + c.function + " at 3603 was not rejected");
    }
    Cli late = run_cli("run " + cpath("bike_rental.stipula") + " " + cpath("traces/bike_rental.timeout.jsonl"));
    auto late_lines = lines(late.out);
    o.require(!late_lines.empty() && late_lines.back().find(R"("kind":"rejected")") != std::string::npos &&
                  late_lines.back().rfind(R"({"at":3603,)", 0) == 0,
              "scripted end at 3603 was not rejected by the CLI");
    return o;
}

Outcome conservation_fuzz() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    std::size_t scripts = 0;
    for (const auto& name : corpus_names()) {
        ContractDecl decl = contract(name);
        for (int i = 0; i < 1000 && o.pass; ++i) {
            TraceScript s = random_script(decl, rng);
            RunResult run = run_trace(decl, s);
            ConservationLedger ledger = conservation_report(run.labels(), run.final_config);
            o.require(ledger.ok(), name + ": " + (ledger.violations.empty() ? "" : ledger.violations.front()) + "\n" +
                                       format_script(s));
            bool negative = false;
            replay(decl, run.records, EventMode::DiscardStale,
                   [&](const Configuration& c) { negative |= any_negative_fungible(c); });
            o.require(!negative, name + ": negative fungible cell\n" + format_script(s));
            ++scripts;
        }
    }
    o.require(scripts == 1000 * corpus_names().size(), "not every script ran");
    return o;
}

Outcome separation() {
    Outcome o;
    Universe u = universe("fg");
    o.require(u.horizon == 3 && u.calls.size() == 2 && u.calls[0] == call("A", "f") && u.calls[1] == call("B", "g"),
              "fg universe is not horizon 3 over {A:f, B:g}");
    auto timed = [&](const std::string& args, double& secs) {
        auto t0 = std::chrono::steady_clock::now();
        Cli r = run_cli(args);
        secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    };
    std::filesystem::path witness = std::filesystem::temp_directory_path() / "stipula_acceptance_witness.jsonl";
    std::filesystem::remove(witness);
    double secs = 0;
    Cli apart = timed("equiv " + cpath("fg_unordered.stipula") + " " + cpath("fg_sequenced.stipula") + " " +
                          cpath("universes/fg.json") + " --witness " + quote(witness.string()),
                      secs);
    o.require(apart.status == 1 && apart.out.rfind("NOT RELATED\n", 0) == 0, "unordered vs sequenced: " + apart.out);
    o.require(secs < 5.0, "unordered vs sequenced took " + std::to_string(secs) + " s");
    o.require(std::filesystem::exists(witness), "no witness written");
    if (!o.pass)
        return o;
    TraceScript script = parse_script(read_text(witness.string()));
    auto diff = check_witness(contract("fg_unordered"), contract("fg_sequenced"), script);
    o.require(diff.has_value(), "witness does not replay to a difference");
    Cli left = run_cli("run " + cpath("fg_unordered.stipula") + " " + quote(witness.string()) + " --observable");
    Cli right = run_cli("run " + cpath("fg_sequenced.stipula") + " " + quote(witness.string()) + " --observable");
    o.require(left.status == 0 && right.status == 0 && left.out != right.out,
              "CLI runs of the witness do not differ");
    std::filesystem::remove(witness);

    Cli same = timed("equiv " + cpath("fg_unordered.stipula") + " " + cpath("fg_renamed.stipula") + " " +
                         cpath("universes/fg.json"),
                     secs);
    o.require(same.status == 0 && same.out.rfind("RELATED\n", 0) == 0, "renamed pair: " + same.out);
    o.require(secs < 5.0, "renamed pair took " + std::to_string(secs) + " s");
    return o;
}

Outcome renamings() {
    Outcome o;
    std::mt19937_64 rng(4242);
    for (const auto& name : corpus_names()) {
        ContractDecl decl = contract(name);
        Universe u = universe(universe_of(name));
        u.horizon = 4;
        for (int i = 0; i < 50 && o.pass; ++i) {
            Renaming ren = random_renaming(decl, rng);
            ContractDecl renamed = rename(decl, ren);
            BisimVerdict v = bisimilar(decl, renamed, u);
            o.require(v.related, name + " renaming " + std::to_string(i) + ": " + v.explanation);
        }
    }
    return o;
}

Outcome garbage_collection() {
    Outcome o;
    std::mt19937_64 rng(777);
    std::set<std::string> found;
    std::vector<std::pair<Configuration, std::string>> configs;
    FuzzOptions wide;
    wide.max_gap = 8;
    for (int round = 0; round < 4000 && configs.size() < 100; ++round) {
        const std::string& name = corpus_names()[round % corpus_names().size()];
        ContractDecl decl = contract(name);
        RunResult run = run_trace(decl, random_script(decl, rng, wide));
        replay(decl, run.records, EventMode::DiscardStale, [&](const Configuration& c) {
            if (configs.size() < 100 && idle_everywhere(c) && has_expired_event(c) &&
                found.insert(canonical_text(c)).second)
                configs.emplace_back(c, name);
        });
    }
    o.require(configs.size() == 100, "found only " + std::to_string(configs.size()) + " configurations");
    for (const auto& [c, name] : configs) {
        if (!o.pass)
            break;
        Configuration g = gc_events(c);
        o.require(!has_expired_event(g), name + ": gc left an expired event");
        Universe u = universe(universe_of(name));
        u.horizon = 3;
        BisimVerdict v = bisimilar_configs(c, g, u);
        o.require(v.related, name + ": " + v.explanation + "\n" + canonical_text(c));
    }
    return o;
}

Outcome laws() {
    Outcome o;
    std::mt19937_64 rng(99);
    for (int law = 1; law <= 10; ++law)
        for (int i = 0; i < 20 && o.pass; ++i) {
            LawInstance inst = random_law_instance(law, rng);
            LawContext ctx = random_law_context(rng);
            BisimVerdict v = check_law(inst, ctx);
            o.require(v.related, "law " + std::to_string(law) + ": " + pretty_print(inst.first) + " / " +
                                     pretty_print(inst.second) + ": " + v.explanation);
        }
    o.require(!violating_instance(1).has_value(), "law 1 has no side condition to violate");
    for (int law = 2; law <= 10 && o.pass; ++law) {
        auto v = violating_instance(law);
        o.require(v.has_value(), "law " + std::to_string(law) + ": no violating instance");
        if (!v)
            break;
        bool rejected = false;
        try {
            check_side_conditions(v->first);
        } catch (const SideConditionViolated&) {
            rejected = true;
        }
        o.require(rejected, "law " + std::to_string(law) + ": violating instance passes the side conditions");
        BisimVerdict verdict = compare_orders(v->first, v->second);
        o.require(!verdict.related, "law " + std::to_string(law) + ": violating instance is related");
        o.require(verdict.witness.has_value(), "law " + std::to_string(law) + ": no witness");
        if (verdict.witness) {
            ContractDecl one = fill(v->second, {v->first.first, v->first.second});
            ContractDecl two = fill(v->second, {v->first.second, v->first.first});
            o.require(check_witness(one, two, *verdict.witness).has_value(),
                      "law " + std::to_string(law) + ": witness does not replay");
        }
    }
    return o;
}

/// Decimal amounts at scale 4 from integer units, computed without the
/// runtime's arithmetic.
std::string units(std::int64_t ten_thousandths) {
    std::ostringstream s;
    s << ten_thousandths / 10000 << "." << std::setw(4) << std::setfill('0') << ten_thousandths % 10000;
    return s.str();
}

Outcome corpus_behaviour() {
    Outcome o;
    auto timed_run = [&](const std::string& c, const std::string& t) {
        auto t0 = std::chrono::steady_clock::now();
        RunResult r = run_trace(contract(c), trace(t));
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(secs < 1.0, t + " took " + std::to_string(secs) + " s");
        o.require(!r.stuck(), t + " got stuck");
        return r;
    };

    // Licence: cost 100, the Authority keeps a tenth.
    const std::int64_t cost = 100 * 10000;
    const std::int64_t authority = cost / 10;
    const std::int64_t licensor = cost - authority;
    RunResult buy = timed_run("licence", "licence.buy");
    std::vector<std::string> want = {"Ada " + units(authority), "Lisa " + units(licensor), "Leo token:ebook"};
    o.require(payouts(buy) == want, "licence buy: " + join(payouts(buy)));
    RunResult lapse = timed_run("licence", "licence.timeout");
    want = {"Ada " + units(authority), "Leo " + units(licensor), "Lisa token:ebook"};
    o.require(payouts(lapse) == want, "licence timeout: " + join(payouts(lapse)));

    // Alea: stakes of 10 each, fee 1 taken from the loser's stake.
    const std::int64_t stake = 10 * 10000;
    const std::int64_t fee = 1 * 10000;
    RunResult refund = timed_run("alea", "alea.no_data");
    want = {"Bea " + units(stake), "Bo " + units(stake)};
    o.require(payouts(refund) == want, "alea timeout: " + join(payouts(refund)));
    RunResult win1 = timed_run("alea", "alea.winner1");
    want = {"Dan " + units(fee), "Bea " + units(stake - fee), "Bea " + units(stake)};
    o.require(payouts(win1) == want, "alea winner 1: " + join(payouts(win1)));
    RunResult win2 = timed_run("alea", "alea.winner2");
    want = {"Dan " + units(fee), "Bo " + units(stake - fee), "Bo " + units(stake)};
    o.require(payouts(win2) == want, "alea winner 2: " + join(payouts(win2)));

    for (const RunResult* r : {&buy, &lapse, &refund, &win1, &win2}) {
        for (const auto& rc : r->final_config.contracts)
            for (const auto& [n, slot] : rc.memory.slots())
                if (const auto* a = std::get_if<AssetValue>(&slot))
                    o.require(is_empty(*a), "asset '" + n + "' not drained");
        o.require(conservation_report(r->labels(), r->final_config).ok(), "conservation");
    }
    return o;
}

struct Criterion {
    int id;
    std::string title;
    double limit;
    std::function<Outcome()> check;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "Bike_Rental initial transitions", 1.0, initial_transitions},
        {2, "event precedence at the rental deadline", 1.0, event_precedence},
        {3, "asset conservation over random scripts", 60.0, conservation_fuzz},
        {4, "f/g separation and renamed states", 10.0, separation},
        {5, "renamed contracts are bisimilar", 120.0, renamings},
        {6, "expired events can be collected", 60.0, garbage_collection},
        {7, "non-interference laws", 300.0, laws},
        {8, "licence and alea payouts", 5.0, corpus_behaviour},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && secs >= c.limit) {
            o.pass = false;
            o.detail = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit) + " s";
        }
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.3f s", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << timing << ")";
        if (!o.pass)
            std::cout << ": " << o.detail;
        std::cout << std::endl;
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
