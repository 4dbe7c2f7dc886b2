#include "stipula/driver.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "stipula/syntax.hpp"

namespace stipula {

namespace {

bool any_mid_body(const Configuration& config) {
    return std::any_of(config.contracts.begin(), config.contracts.end(),
                       [](const RuntimeContract& rc) { return rc.residual && !rc.stuck; });
}

std::string event_text(const PendingEvent& ev) {
    return ev.origin + " at t=" + std::to_string(ev.trigger.seconds) + " @" + ev.guard_state() + " => @" +
           ev.next_state();
}

} // namespace

std::string to_display(const EnabledChoice& choice, const Configuration& config) {
    struct Visitor {
        const Configuration& config;
        std::string operator()(const DoAgree& c) const { return "agree " + to_display(Label{c.label}); }
        std::string operator()(const DoCall& c) const { return "call " + to_display(Label{c.label}); }
        std::string operator()(const DoFireEvent& c) const {
            return "fire event " + event_text(config.contract(c.contract).pending.at(c.index));
        }
        std::string operator()(const DoDiscardStale& c) const {
            return "discard stale event " + event_text(config.contract(c.contract).pending.at(c.index));
        }
        std::string operator()(const DoExecStep& c) const {
            const auto& res = config.contract(c.contract).residual;
            if (res && !res->stack.empty())
                return "step: " + pretty_print(*res->stack.back());
            return "step: => @" + (res ? res->target_state : std::string("?"));
        }
        std::string operator()(const DoTick&) const { return "tick"; }
    };
    return std::visit(Visitor{config}, choice);
}

std::vector<EnabledChoice> enabled(const Configuration& config, const Alphabet& alphabet, EventMode mode) {
    std::vector<EnabledChoice> out;
    if (any_mid_body(config)) {
        for (const auto& rc : config.contracts)
            if (rc.residual && !rc.stuck)
                out.push_back(DoExecStep{rc.name()});
        return out;
    }
    for (const auto& rc : config.contracts) {
        if (rc.stuck)
            continue;
        if (!rc.active()) {
            for (const auto& a : alphabet.agrees) {
                try {
                    apply_agree(config, rc.name(), a);
                    out.push_back(DoAgree{rc.name(), a});
                } catch (const AgreeError&) {
                }
            }
            continue;
        }
        for (std::size_t i : triggerable_events(rc, config.clock))
            out.push_back(DoFireEvent{rc.name(), i});
        if (mode == EventMode::DiscardStale)
            for (std::size_t i : stale_events(rc, config.clock))
                out.push_back(DoDiscardStale{rc.name(), i});
        const auto& fns = rc.decl->functions;
        for (const auto& call : alphabet.calls)
            for (std::size_t fi = 0; fi < fns.size(); ++fi) {
                if (fns[fi].name != call.function)
                    continue;
                if (attempt_call(config, rc.name(), call, fi, mode).accepted())
                    out.push_back(DoCall{rc.name(), call, fi});
            }
    }
    if (!tick_blocker(config))
        out.push_back(DoTick{});
    return out;
}

Step step(const Configuration& config, const EnabledChoice& choice, EventMode mode) {
    bool exec = std::holds_alternative<DoExecStep>(choice);
    if (!exec && any_mid_body(config))
        throw ChoiceNotEnabled("a contract is executing; only statement steps are enabled");
    try {
        if (const auto* c = std::get_if<DoAgree>(&choice))
            return Step{Rule::Agree, c->label, apply_agree(config, c->contract, c->label)};
        if (const auto* c = std::get_if<DoCall>(&choice)) {
            CallAttempt a = attempt_call(config, c->contract, c->label, c->function_index, mode);
            if (!a.accepted())
                throw ChoiceNotEnabled(std::string("call refused: ") + describe(a.rejection));
            return Step{Rule::Function, c->label, std::move(*a.next)};
        }
        if (const auto* c = std::get_if<DoFireEvent>(&choice))
            return Step{Rule::EventMatch, SilentLabel{}, fire_event(config, c->contract, c->index)};
        if (const auto* c = std::get_if<DoDiscardStale>(&choice)) {
            if (mode == EventMode::Strict)
                throw ChoiceNotEnabled("stale events are not discarded in strict mode");
            return Step{Rule::DiscardStale, SilentLabel{}, discard_stale_event(config, c->contract, c->index)};
        }
        if (const auto* c = std::get_if<DoExecStep>(&choice)) {
            const RuntimeContract& rc = config.contract(c->contract);
            if (!rc.residual || rc.stuck)
                throw ChoiceNotEnabled("contract '" + rc.name() + "' has nothing to execute");
            return advance_body(config, c->contract);
        }
        return Step{Rule::Tick, TickLabel{}, tick(config)};
    } catch (const AgreeError& e) {
        throw ChoiceNotEnabled(e.what());
    } catch (const EventNotReady& e) {
        throw ChoiceNotEnabled(e.what());
    } catch (const TickBlocked& e) {
        throw ChoiceNotEnabled(e.what());
    } catch (const std::out_of_range& e) {
        throw ChoiceNotEnabled(e.what());
    } catch (const RuntimeUsageError& e) {
        throw ChoiceNotEnabled(e.what());
    }
}

// ---------------------------------------------------------------------------
// run_trace

bool RunResult::stuck() const {
    return std::any_of(final_config.contracts.begin(), final_config.contracts.end(),
                       [](const RuntimeContract& rc) { return rc.stuck.has_value(); });
}

std::vector<ContractLabel> RunResult::labels() const {
    std::vector<ContractLabel> out;
    for (const auto& r : records)
        if (r.kind == TraceRecord::Kind::Transition && is_observable(r.label))
            out.push_back({r.contract, r.label});
    return out;
}

Executor::Executor(Configuration config, EventMode mode) : config_(std::move(config)), mode_(mode) {}

RunResult Executor::finish() && { return RunResult{std::move(records_), std::move(config_), std::move(halted_)}; }

void Executor::push(Rule rule, Label label, const std::string& contract) {
    TraceRecord r;
    r.at = config_.clock;
    r.contract = contract;
    r.rule = rule;
    r.label = std::move(label);
    records_.push_back(std::move(r));
}

void Executor::reject(Label label, const std::string& contract, std::string why) {
    TraceRecord r;
    r.kind = TraceRecord::Kind::Rejected;
    r.at = config_.clock;
    r.contract = contract;
    r.rule = std::holds_alternative<AgreeLabel>(label) ? Rule::Agree : Rule::Function;
    r.label = std::move(label);
    r.detail = std::move(why);
    records_.push_back(std::move(r));
}

void Executor::run_body(const std::string& contract) {
    while (true) {
        const RuntimeContract& rc = config_.contract(contract);
        if (!rc.residual || rc.stuck)
            return;
        Step s = advance_body(config_, contract);
        config_ = std::move(s.next);
        if (s.rule == Rule::Stuck) {
            TraceRecord r;
            r.kind = TraceRecord::Kind::Stuck;
            r.at = config_.clock;
            r.contract = contract;
            r.rule = Rule::Stuck;
            r.detail = *config_.contract(contract).stuck;
            records_.push_back(std::move(r));
            return;
        }
        push(s.rule, std::move(s.label), contract);
    }
}

void Executor::settle() {
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& rc : config_.contracts) {
            if (!rc.idle())
                continue;
            auto due = triggerable_events(rc, config_.clock);
            if (due.empty())
                continue;
            std::size_t pick = *std::min_element(due.begin(), due.end(), [&](std::size_t a, std::size_t b) {
                return rc.pending[a].seq < rc.pending[b].seq;
            });
            fire(rc.name(), pick);
            progress = true;
            break;
        }
    }
}

void Executor::fire(const std::string& contract, std::size_t index) {
    const PendingEvent ev = config_.contract(contract).pending[index];
    config_ = fire_event(config_, contract, index);
    push(Rule::EventMatch, SilentLabel{}, contract);
    records_.back().event_origin = ev.origin;
    records_.back().event_trigger = ev.trigger;
    run_body(contract);
}

void Executor::discard_stale() {
    if (mode_ != EventMode::DiscardStale)
        return;
    for (std::size_t ci = 0; ci < config_.contracts.size(); ++ci) {
        std::string name = config_.contracts[ci].name();
        while (config_.contracts[ci].idle()) {
            auto stale = stale_events(config_.contracts[ci], config_.clock);
            if (stale.empty())
                break;
            const PendingEvent ev = config_.contracts[ci].pending[stale.front()];
            config_ = discard_stale_event(config_, name, stale.front());
            push(Rule::DiscardStale, SilentLabel{}, name);
            records_.back().event_origin = ev.origin;
            records_.back().event_trigger = ev.trigger;
        }
    }
}

bool Executor::advance_to(Time target) {
    if (halted_)
        return false;
    if (target < config_.clock)
        throw ScriptError("transaction at t=" + std::to_string(target.seconds) + " is before the clock (t=" +
                          std::to_string(config_.clock.seconds) + ")");
    while (true) {
        settle();
        if (config_.clock >= target)
            return true;
        bool any_active = std::any_of(config_.contracts.begin(), config_.contracts.end(),
                                      [](const RuntimeContract& rc) { return rc.active(); });
        if (!any_active) {
            // No agreement yet: the clock carries no obligations.
            config_.clock = target;
            continue;
        }
        discard_stale();
        if (auto why = tick_blocker(config_)) {
            halted_ = "clock halted at t=" + std::to_string(config_.clock.seconds) + ": " + *why;
            return false;
        }
        config_ = tick(config_);
        push(Rule::Tick, TickLabel{}, {});
    }
}

bool Executor::apply(const Transaction& tx) {
    std::string contract = tx.contract.empty() ? config_.contracts.front().name() : tx.contract;
    switch (tx.kind) {
    case Transaction::Kind::Wait:
        return true;
    case Transaction::Kind::Agree:
        try {
            config_ = apply_agree(config_, contract, tx.agree);
            push(Rule::Agree, tx.agree, contract);
            return true;
        } catch (const AgreeError& e) {
            reject(tx.agree, contract, e.what());
            return false;
        }
    case Transaction::Kind::Call: {
        CallAttempt a = attempt_call(config_, contract, tx.call, std::nullopt, mode_);
        if (!a.accepted()) {
            reject(tx.call, contract,
                   a.detail.empty() ? describe(a.rejection) : std::string(describe(a.rejection)) + ": " + a.detail);
            return false;
        }
        config_ = std::move(*a.next);
        push(Rule::Function, tx.call, contract);
        records_.back().function_index = a.function_index;
        run_body(contract);
        return true;
    }
    }
    return false;
}

namespace {

void check_times(const TraceScript& script) {
    for (std::size_t i = 1; i < script.transactions.size(); ++i)
        if (script.transactions[i].at < script.transactions[i - 1].at)
            throw ScriptError("transaction " + std::to_string(i + 1) + " at t=" +
                              std::to_string(script.transactions[i].at.seconds) + " goes back in time");
    for (const auto& tx : script.transactions)
        if (tx.at.seconds < 0)
            throw ScriptError("negative transaction time");
}

} // namespace

RunResult run_trace(std::vector<std::shared_ptr<const ContractDecl>> decls, const TraceScript& script,
                    const RunOptions& options) {
    check_times(script);
    Time start = script.transactions.empty() ? Time{} : script.transactions.front().at;
    Executor exec(initial_configuration(std::move(decls), start), options.mode);
    bool running = true;
    for (const auto& tx : script.transactions) {
        if (!exec.advance_to(tx.at)) {
            running = false;
            break;
        }
        exec.apply(tx);
    }
    if (running) {
        exec.settle();
        if (options.until)
            exec.advance_to(*options.until);
    }
    return std::move(exec).finish();
}

RunResult run_trace(const ContractDecl& decl, const TraceScript& script, const RunOptions& options) {
    return run_trace({std::make_shared<const ContractDecl>(decl)}, script, options);
}

// ---------------------------------------------------------------------------
// replay

namespace {

std::size_t find_event(const RuntimeContract& rc, const TraceRecord& r) {
    for (std::size_t i = 0; i < rc.pending.size(); ++i)
        if (rc.pending[i].origin == r.event_origin && rc.pending[i].trigger == r.event_trigger)
            return i;
    throw ReplayMismatch("no pending event " + r.event_origin + " at t=" + std::to_string(r.event_trigger.seconds));
}

} // namespace

Configuration replay(std::vector<std::shared_ptr<const ContractDecl>> decls, const std::vector<TraceRecord>& records,
                     EventMode mode, const StepObserver& observe) {
    Configuration config = initial_configuration(std::move(decls), records.empty() ? Time{} : records.front().at);
    if (observe)
        observe(config);
    for (const auto& r : records) {
        bool any_active = std::any_of(config.contracts.begin(), config.contracts.end(),
                                      [](const RuntimeContract& rc) { return rc.active(); });
        if (!any_active && config.clock < r.at)
            config.clock = r.at;
        Time expected = r.kind == TraceRecord::Kind::Transition && r.rule == Rule::Tick
                            ? Time{config.clock.seconds + 1}
                            : config.clock;
        if (r.at != expected)
            throw ReplayMismatch("record at t=" + std::to_string(r.at.seconds) + " but expected t=" +
                                 std::to_string(expected.seconds));
        if (r.kind == TraceRecord::Kind::Rejected) {
            if (const auto* call = std::get_if<CallLabel>(&r.label)) {
                if (attempt_call(config, r.contract, *call, std::nullopt, mode).accepted())
                    throw ReplayMismatch("recorded rejection of " + to_display(r.label) + " is accepted on replay");
            }
            continue;
        }
        EnabledChoice choice = DoTick{};
        switch (r.rule) {
        case Rule::Agree:
            choice = DoAgree{r.contract, std::get<AgreeLabel>(r.label)};
            break;
        case Rule::Function:
            choice = DoCall{r.contract, std::get<CallLabel>(r.label), r.function_index};
            break;
        case Rule::EventMatch:
            choice = DoFireEvent{r.contract, find_event(config.contract(r.contract), r)};
            break;
        case Rule::DiscardStale:
            choice = DoDiscardStale{r.contract, find_event(config.contract(r.contract), r)};
            break;
        case Rule::Tick:
            choice = DoTick{};
            break;
        default:
            choice = DoExecStep{r.contract};
            break;
        }
        Step s = [&] {
            try {
                return step(config, choice, mode);
            } catch (const ChoiceNotEnabled& e) {
                throw ReplayMismatch(std::string(rule_name(r.rule)) + " at t=" + std::to_string(r.at.seconds) +
                                     " not enabled: " + e.what());
            }
        }();
        if (s.rule != r.rule || !(s.label == r.label))
            throw ReplayMismatch(std::string("expected ") + rule_name(r.rule) + " " + to_display(r.label) + ", got " +
                                 rule_name(s.rule) + " " + to_display(s.label));
        config = std::move(s.next);
        if (observe)
            observe(config);
    }
    return config;
}

Configuration replay(const ContractDecl& decl, const std::vector<TraceRecord>& records, EventMode mode,
                     const StepObserver& observe) {
    return replay({std::make_shared<const ContractDecl>(decl)}, records, mode, observe);
}

// ---------------------------------------------------------------------------
// digests

std::string canonical_text(const Configuration& config) {
    std::ostringstream out;
    out << "clock " << config.clock.seconds << "\n";
    for (const auto& rc : config.contracts) {
        out << "contract " << rc.name() << " state " << (rc.state ? "@" + *rc.state : std::string("-")) << "\n";
        for (const auto& [name, slot] : rc.memory.slots()) {
            out << "  " << name << " = ";
            if (const auto* v = std::get_if<Value>(&slot))
                out << to_display(*v);
            else
                out << "asset " << to_display(std::get<AssetValue>(slot));
            out << "\n";
        }
        std::vector<std::string> events;
        for (const auto& ev : rc.pending)
            events.push_back(event_text(ev));
        std::sort(events.begin(), events.end());
        for (const auto& e : events)
            out << "  event " << e << "\n";
        if (rc.residual)
            out << "  executing " << rc.residual->stack.size() << " => @" << rc.residual->target_state << "\n";
        if (rc.stuck)
            out << "  stuck " << *rc.stuck << "\n";
        out << "  usage " << rc.usage_seq << "\n";
    }
    return out.str();
}

std::string digest(const Configuration& config) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical_text(config)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// random scripts

TraceScript random_script(const ContractDecl& decl, std::mt19937_64& rng, const FuzzOptions& options) {
    static const int pool[] = {0, 1, 2, 3, 5, 10};
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    auto small = [&] { return Value(Decimal::from_int(pool[pick(std::size(pool))])); };

    const auto& a = decl.agreement;
    std::map<std::string, std::string> actual;
    std::vector<std::string> parties;
    for (const auto& p : a.parties) {
        actual[p] = p;
        parties.push_back(p);
    }

    TraceScript script;
    std::int64_t at = static_cast<std::int64_t>(pick(3));
    auto gap = [&] { return std::uniform_int_distribution<std::int64_t>(0, options.max_gap)(rng); };

    if (!decl.functions.empty() && chance(0.05)) {
        Transaction early;
        early.at = Time{at};
        early.kind = Transaction::Kind::Call;
        early.call.party = parties.empty() ? "X" : parties[pick(parties.size())];
        early.call.function = decl.functions[pick(decl.functions.size())].name;
        script.transactions.push_back(early);
    }

    Transaction agree;
    agree.at = Time{at};
    agree.kind = Transaction::Kind::Agree;
    agree.agree.parties = parties;
    for (const auto& g : a.groups) {
        AgreeGroupValues row;
        for (const auto& p : g.parties)
            row.parties.push_back(actual[p]);
        for (std::size_t k = 0; k < g.fields.size(); ++k)
            row.values.push_back(small());
        agree.agree.groups.push_back(std::move(row));
    }
    script.transactions.push_back(agree);

    int token_counter = 0;
    std::size_t n = decl.functions.empty() ? 0 : pick(options.max_transactions + 1);
    for (std::size_t i = 0; i < n; ++i) {
        at += gap();
        const FunctionDecl& f = decl.functions[pick(decl.functions.size())];
        Transaction tx;
        tx.at = Time{at};
        tx.kind = Transaction::Kind::Call;
        tx.call.function = f.name;
        tx.call.party = chance(0.85) || parties.empty() ? actual[f.caller] : parties[pick(parties.size())];
        for (std::size_t k = 0; k < f.value_params.size(); ++k)
            tx.call.args.push_back(small());
        for (std::size_t k = 0; k < f.asset_params.size(); ++k) {
            if (chance(options.token_bias)) {
                int id = token_counter > 0 && chance(0.1) ? token_counter : ++token_counter;
                tx.call.assets.push_back(TokenAsset{"tk" + std::to_string(id)});
            } else {
                tx.call.assets.push_back(Fungible{Decimal::from_int(pool[pick(std::size(pool))])});
            }
        }
        script.transactions.push_back(std::move(tx));
    }
    Transaction wait;
    wait.at = Time{at + static_cast<std::int64_t>(pick(16))};
    wait.kind = Transaction::Kind::Wait;
    script.transactions.push_back(wait);
    return script;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(const ContractDecl& decl, EventMode mode)
    : mode_(mode), config_(initial_configuration(decl)) {}

std::string Session::describe() const {
    std::ostringstream out;
    out << "t=" << config_.clock.seconds << "\n";
    for (const auto& rc : config_.contracts) {
        out << rc.name() << " " << (rc.state ? "@" + *rc.state : std::string("(not agreed)"));
        if (rc.stuck)
            out << " STUCK: " << *rc.stuck;
        out << "\n";
        for (const auto& [name, slot] : rc.memory.slots()) {
            out << "  " << name << " = ";
            if (const auto* v = std::get_if<Value>(&slot))
                out << to_display(*v);
            else
                out << to_display(std::get<AssetValue>(slot)) << " (asset)";
            out << "\n";
        }
        for (const auto& ev : rc.pending)
            out << "  pending " << event_text(ev) << "\n";
    }
    return out.str();
}

std::vector<Session::MenuItem> Session::menu() const {
    std::vector<MenuItem> items;
    for (const auto& c : enabled(config_, Alphabet{}, mode_))
        items.push_back({to_display(c, config_), c});
    if (any_mid_body(config_))
        return items;
    for (const auto& rc : config_.contracts) {
        if (rc.stuck)
            continue;
        if (!rc.active()) {
            const auto& a = rc.decl->agreement;
            std::string text = "agree (" ;
            for (std::size_t i = 0; i < a.parties.size(); ++i)
                text += (i ? ", " : "") + a.parties[i];
            text += ")(";
            for (std::size_t i = 0; i < a.init_fields.size(); ++i)
                text += (i ? ", " : "") + a.init_fields[i];
            items.push_back({text + ")  [submit an agree transaction]", std::nullopt});
            continue;
        }
        bool blocked = !(mode_ == EventMode::Strict ? due_events(rc, config_.clock)
                                                     : triggerable_events(rc, config_.clock))
                            .empty();
        if (blocked)
            continue;
        for (const auto& f : rc.decl->functions) {
            if (f.guard_state != *rc.state)
                continue;
            std::string text = "call " + f.caller + " : " + f.name + "(";
            for (std::size_t i = 0; i < f.value_params.size(); ++i)
                text += (i ? ", " : "") + f.value_params[i];
            text += ")[";
            for (std::size_t i = 0; i < f.asset_params.size(); ++i)
                text += (i ? ", " : "") + f.asset_params[i];
            items.push_back({text + "]  [submit a call transaction]", std::nullopt});
        }
    }
    return items;
}

void Session::record(const Step& s) {
    if (is_observable(s.label))
        labels_.push_back({config_.contracts.front().name(), s.label});
}

Step Session::select(std::size_t item) {
    auto items = menu();
    if (item >= items.size())
        throw std::out_of_range("no menu item " + std::to_string(item));
    if (!items[item].choice)
        throw ChoiceNotEnabled("this item needs a transaction");
    Step s = step(config_, *items[item].choice, mode_);
    record(s);
    config_ = s.next;
    return s;
}

std::optional<std::string> Session::submit(const Transaction& tx) {
    std::string contract = tx.contract.empty() ? config_.contracts.front().name() : tx.contract;
    if (any_mid_body(config_))
        return std::string("a contract is executing");
    switch (tx.kind) {
    case Transaction::Kind::Wait:
        return std::string("wait is not a transaction; tick instead");
    case Transaction::Kind::Agree:
        try {
            config_ = apply_agree(config_, contract, tx.agree);
        } catch (const AgreeError& e) {
            return std::string(e.what());
        }
        labels_.push_back({contract, tx.agree});
        break;
    case Transaction::Kind::Call: {
        CallAttempt a = attempt_call(config_, contract, tx.call, std::nullopt, mode_);
        if (!a.accepted())
            return a.detail.empty() ? std::string(stipula::describe(a.rejection))
                                    : std::string(stipula::describe(a.rejection)) + ": " + a.detail;
        config_ = std::move(*a.next);
        labels_.push_back({contract, tx.call});
        break;
    }
    }
    Transaction logged = tx;
    logged.at = config_.clock;
    log_.push_back(std::move(logged));
    return std::nullopt;
}

void Session::gc() { config_ = gc_events(config_); }

TraceScript Session::export_script() const {
    TraceScript script;
    script.transactions = log_;
    Transaction wait;
    wait.at = config_.clock;
    wait.kind = Transaction::Kind::Wait;
    script.transactions.push_back(wait);
    return script;
}

} // namespace stipula
