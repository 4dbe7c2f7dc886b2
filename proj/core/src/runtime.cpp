#include "stipula/runtime.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace stipula {

// ---------------------------------------------------------------------------
// Labels

bool is_observable(const Label& label) {
    return !std::holds_alternative<SilentLabel>(label) && !std::holds_alternative<TickLabel>(label);
}

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? ", " : "") + items[i];
    return out;
}

template <typename T>
std::string join_display(const std::vector<T>& items) {
    std::vector<std::string> parts;
    for (const auto& v : items)
        parts.push_back(to_display(v));
    return join(parts);
}

} // namespace

std::string to_display(const Label& label) {
    struct Visitor {
        std::string operator()(const SilentLabel&) const { return "_"; }
        std::string operator()(const TickLabel&) const { return "tick"; }
        std::string operator()(const AgreeLabel& a) const {
            std::string out = "(" + join(a.parties);
            for (const auto& g : a.groups)
                out += ", {" + join(g.parties) + "} : (" + join_display(g.values) + ")";
            return out + ")";
        }
        std::string operator()(const CallLabel& c) const {
            return c.party + ":" + c.function + "(" + join_display(c.args) + ")[" + join_display(c.assets) + "]";
        }
        std::string operator()(const ValueOutLabel& v) const { return to_display(v.value) + " -> " + v.party; }
        std::string operator()(const AssetOutLabel& a) const { return to_display(a.asset) + " -o " + a.party; }
    };
    return std::visit(Visitor{}, label);
}

const char* rule_name(Rule rule) {
    switch (rule) {
    case Rule::Agree: return "Agree";
    case Rule::Function: return "Function";
    case Rule::StateChange: return "State_Change";
    case Rule::EventMatch: return "Event_Match";
    case Rule::Tick: return "Tick";
    case Rule::ValueSend: return "Value_Send";
    case Rule::AssetSend: return "Asset_Send";
    case Rule::FieldUpdate: return "Field_Update";
    case Rule::AssetUpdate: return "Asset_Update";
    case Rule::CondTrue: return "Cond_true";
    case Rule::CondFalse: return "Cond_false";
    case Rule::DiscardStale: return "Discard_Stale";
    case Rule::Stuck: return "Stuck";
    }
    return "?";
}

const char* describe(Rejection r) {
    switch (r) {
    case Rejection::UnknownContract: return "unknown contract";
    case Rejection::Inactive: return "contract not active";
    case Rejection::Busy: return "contract is executing";
    case Rejection::Stuck: return "contract is stuck";
    case Rejection::EventPending: return "event pending at this instant";
    case Rejection::WrongState: return "wrong state";
    case Rejection::WrongCaller: return "wrong caller";
    case Rejection::Arity: return "arity mismatch";
    case Rejection::NegativeAmount: return "negative asset amount";
    case Rejection::DuplicateToken: return "token already held";
    case Rejection::PreconditionFalse: return "precondition false";
    case Rejection::PreconditionError: return "precondition error";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Configurations

std::size_t Configuration::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < contracts.size(); ++i)
        if (contracts[i].name() == name)
            return i;
    throw std::out_of_range("no contract named '" + std::string(name) + "'");
}

const RuntimeContract& Configuration::contract(std::string_view name) const { return contracts[index_of(name)]; }

RuntimeContract& Configuration::contract(std::string_view name) { return contracts[index_of(name)]; }

Configuration initial_configuration(std::vector<std::shared_ptr<const ContractDecl>> decls, Time clock) {
    Configuration config;
    config.clock = clock;
    std::set<std::string> names;
    for (auto& d : decls) {
        if (!names.insert(d->name).second)
            throw std::invalid_argument("duplicate contract name '" + d->name + "'");
        RuntimeContract rc;
        rc.decl = std::move(d);
        config.contracts.push_back(std::move(rc));
    }
    return config;
}

Configuration initial_configuration(const ContractDecl& decl, Time clock) {
    return initial_configuration({std::make_shared<const ContractDecl>(decl)}, clock);
}

namespace {

RuntimeContract& require_contract(Configuration& config, std::string_view name) {
    try {
        return config.contract(name);
    } catch (const std::out_of_range& e) {
        throw RuntimeUsageError(e.what());
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Agree

Configuration apply_agree(const Configuration& config, std::string_view contract, const AgreeLabel& label) {
    Configuration next = config;
    RuntimeContract* rc = nullptr;
    try {
        rc = &next.contract(contract);
    } catch (const std::out_of_range& e) {
        throw AgreeError(e.what());
    }
    const AgreementDecl& a = rc->decl->agreement;
    if (rc->active())
        throw AgreeError("contract '" + rc->name() + "' already active");
    if (label.parties.size() != a.parties.size())
        throw AgreeError("group mismatch: expected " + std::to_string(a.parties.size()) + " parties, got " +
                         std::to_string(label.parties.size()));
    if (label.groups.size() != a.groups.size())
        throw AgreeError("group mismatch: expected " + std::to_string(a.groups.size()) + " groups, got " +
                         std::to_string(label.groups.size()));
    std::map<std::string, std::string> actual;
    for (std::size_t i = 0; i < a.parties.size(); ++i)
        actual[a.parties[i]] = label.parties[i];

    Memory mem;
    for (std::size_t i = 0; i < a.parties.size(); ++i)
        mem.set_value(a.parties[i], Party{label.parties[i]});
    for (std::size_t g = 0; g < a.groups.size(); ++g) {
        const auto& decl_group = a.groups[g];
        const auto& row = label.groups[g];
        std::multiset<std::string> expected;
        for (const auto& p : decl_group.parties)
            expected.insert(actual[p]);
        std::multiset<std::string> given(row.parties.begin(), row.parties.end());
        if (expected != given)
            throw AgreeError("group mismatch: group " + std::to_string(g + 1) + " expects parties {" +
                             join(std::vector<std::string>(expected.begin(), expected.end())) + "}");
        if (row.values.size() != decl_group.fields.size())
            throw AgreeError("missing field value: group " + std::to_string(g + 1) + " agrees on " +
                             std::to_string(decl_group.fields.size()) + " fields");
        for (std::size_t k = 0; k < decl_group.fields.size(); ++k)
            mem.set_value(decl_group.fields[k], row.values[k]);
    }
    for (const auto& h : rc->decl->assets)
        mem.set_asset(h, Fungible{});

    rc->state = a.initial_state;
    rc->memory = std::move(mem);
    rc->residual.reset();
    rc->pending.clear();
    return next;
}

// ---------------------------------------------------------------------------
// Function

std::vector<std::size_t> due_events(const RuntimeContract& contract, Time clock) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < contract.pending.size(); ++i)
        if (contract.pending[i].trigger == clock)
            out.push_back(i);
    return out;
}

std::vector<std::size_t> triggerable_events(const RuntimeContract& contract, Time clock) {
    std::vector<std::size_t> out;
    for (std::size_t i : due_events(contract, clock))
        if (contract.state && contract.pending[i].guard_state() == *contract.state)
            out.push_back(i);
    return out;
}

std::vector<std::size_t> stale_events(const RuntimeContract& contract, Time clock) {
    std::vector<std::size_t> out;
    for (std::size_t i : due_events(contract, clock))
        if (!contract.state || contract.pending[i].guard_state() != *contract.state)
            out.push_back(i);
    return out;
}

namespace {

void collect_tokens(const Memory& mem, std::multiset<std::string>& out) {
    for (const auto& [name, slot] : mem.slots())
        if (const auto* a = std::get_if<AssetValue>(&slot))
            if (const auto* t = std::get_if<TokenAsset>(a))
                out.insert(t->id);
}

} // namespace

CallAttempt attempt_call(const Configuration& config, std::string_view contract, const CallLabel& label,
                         std::optional<std::size_t> function_index, EventMode mode) {
    CallAttempt out;
    auto reject = [&](Rejection r, std::string detail = {}) {
        out.rejection = r;
        out.detail = std::move(detail);
        return out;
    };
    std::size_t ci = 0;
    try {
        ci = config.index_of(contract);
    } catch (const std::out_of_range&) {
        return reject(Rejection::UnknownContract, std::string(contract));
    }
    const RuntimeContract& rc = config.contracts[ci];
    if (!rc.active())
        return reject(Rejection::Inactive);
    if (rc.stuck)
        return reject(Rejection::Stuck, *rc.stuck);
    if (rc.residual)
        return reject(Rejection::Busy);
    auto blocking = mode == EventMode::Strict ? due_events(rc, config.clock) : triggerable_events(rc, config.clock);
    if (!blocking.empty())
        return reject(Rejection::EventPending, "t=" + std::to_string(config.clock.seconds));

    const auto& fns = rc.decl->functions;
    std::vector<std::size_t> candidates;
    if (function_index) {
        if (*function_index < fns.size() && fns[*function_index].name == label.function)
            candidates.push_back(*function_index);
    } else {
        for (std::size_t i = 0; i < fns.size(); ++i)
            if (fns[i].name == label.function)
                candidates.push_back(i);
    }
    if (candidates.empty())
        return reject(Rejection::WrongState, "no function '" + label.function + "'");

    std::optional<std::pair<Rejection, std::string>> first;
    auto note = [&](Rejection r, std::string detail = {}) {
        if (!first)
            first.emplace(r, std::move(detail));
    };
    for (std::size_t fi : candidates) {
        const FunctionDecl& f = fns[fi];
        if (f.guard_state != *rc.state) {
            note(Rejection::WrongState, "'" + f.name + "' expects @" + f.guard_state + ", contract is @" + *rc.state);
            continue;
        }
        const Value* caller = rc.memory.value(f.caller);
        if (caller == nullptr || !caller->is<Party>() || caller->as<Party>().name != label.party) {
            note(Rejection::WrongCaller, "'" + f.name + "' is reserved to " + f.caller);
            continue;
        }
        if (label.args.size() != f.value_params.size() || label.assets.size() != f.asset_params.size()) {
            note(Rejection::Arity, "'" + f.name + "' takes " + std::to_string(f.value_params.size()) + " values and " +
                                       std::to_string(f.asset_params.size()) + " assets");
            continue;
        }
        bool negative = std::any_of(label.assets.begin(), label.assets.end(), [](const AssetValue& a) {
            const auto* g = std::get_if<Fungible>(&a);
            return g != nullptr && g->amount.is_negative();
        });
        if (negative) {
            note(Rejection::NegativeAmount);
            continue;
        }
        std::multiset<std::string> tokens;
        collect_tokens(rc.memory, tokens);
        bool duplicate = false;
        for (const auto& a : label.assets)
            if (const auto* t = std::get_if<TokenAsset>(&a)) {
                if (tokens.count(t->id))
                    duplicate = true;
                tokens.insert(t->id);
            }
        if (duplicate) {
            note(Rejection::DuplicateToken);
            continue;
        }

        RuntimeContract updated = rc;
        for (std::size_t k = 0; k < f.value_params.size(); ++k)
            updated.memory.set_value(f.value_params[k], label.args[k]);
        for (std::size_t k = 0; k < f.asset_params.size(); ++k)
            updated.memory.set_asset(f.asset_params[k], label.assets[k]);
        if (f.precondition) {
            try {
                Value ok = eval(*f.precondition, EvalContext{updated.memory, config.clock, &updated.usage_seq});
                if (!ok.is<bool>()) {
                    note(Rejection::PreconditionError, "precondition is not a boolean");
                    continue;
                }
                if (!ok.as<bool>()) {
                    note(Rejection::PreconditionFalse);
                    continue;
                }
            } catch (const EvalError& e) {
                note(Rejection::PreconditionError, e.what());
                continue;
            }
        }
        Residual res;
        for (auto it = f.body.rbegin(); it != f.body.rend(); ++it)
            res.stack.push_back(&*it);
        res.function = &f;
        res.target_state = f.next_state;
        updated.residual = std::move(res);

        out.next = config;
        out.next->contracts[ci] = std::move(updated);
        out.function_index = fi;
        return out;
    }
    return reject(first->first, first->second);
}

Configuration apply_call(const Configuration& config, std::string_view contract, const CallLabel& label,
                         std::optional<std::size_t> function_index, EventMode mode) {
    CallAttempt a = attempt_call(config, contract, label, function_index, mode);
    if (!a.accepted())
        throw CallRejected(a.rejection, a.detail);
    return std::move(*a.next);
}

// ---------------------------------------------------------------------------
// Statements

namespace {

struct StuckSignal {
    std::string reason;
};

Step stuck_step(Configuration next, std::size_t ci, std::string reason) {
    next.contracts[ci].stuck = std::move(reason);
    return Step{Rule::Stuck, SilentLabel{}, std::move(next)};
}

std::string party_of(const Memory& mem, const std::string& name) {
    const Value* v = mem.value(name);
    if (v == nullptr || !v->is<Party>())
        throw StuckSignal{"'" + name + "' is not a bound party"};
    return v->as<Party>().name;
}

// Takes `amount` out of asset cell `source`, returning what left the cell.
AssetValue withdraw(Memory& mem, const std::string& source, const Value& amount) {
    const AssetValue* cell = mem.asset(source);
    if (cell == nullptr)
        throw StuckSignal{"'" + source + "' is not an asset"};
    if (amount.is<Decimal>()) {
        Decimal v = amount.as<Decimal>();
        if (v.is_negative())
            throw StuckSignal{"negative amount " + v.to_string() + " moved from '" + source + "'"};
        const auto* f = std::get_if<Fungible>(cell);
        if (f == nullptr) {
            if (v.is_zero())
                return Fungible{};
            throw StuckSignal{"asset '" + source + "' holds a token and cannot be split"};
        }
        if (f->amount < v)
            throw StuckSignal{"insufficient asset: '" + source + "' holds " + f->amount.to_string() + ", " +
                              v.to_string() + " requested"};
        mem.set_asset(source, Fungible{f->amount - v});
        return Fungible{v};
    }
    if (amount.is<TokenRef>()) {
        const auto* t = std::get_if<TokenAsset>(cell);
        if (t == nullptr || t->id != amount.as<TokenRef>().id)
            throw StuckSignal{"asset '" + source + "' does not hold token " + amount.as<TokenRef>().id};
        AssetValue moved = *t;
        mem.set_asset(source, Fungible{});
        return moved;
    }
    throw StuckSignal{"cannot move " + to_display(amount) + " out of an asset"};
}

void deposit(Memory& mem, const std::string& target, const AssetValue& moved) {
    const AssetValue* cell = mem.asset(target);
    if (cell == nullptr)
        throw StuckSignal{"'" + target + "' is not an asset"};
    if (const auto* f = std::get_if<Fungible>(cell)) {
        if (const auto* g = std::get_if<Fungible>(&moved)) {
            try {
                mem.set_asset(target, Fungible{f->amount + g->amount});
            } catch (const DecimalError& e) {
                throw StuckSignal{e.what()};
            }
            return;
        }
        if (!f->amount.is_zero())
            throw StuckSignal{"asset '" + target + "' is not empty and cannot receive a token"};
        mem.set_asset(target, moved);
        return;
    }
    if (is_empty(moved))
        return;
    throw StuckSignal{"asset '" + target + "' already holds a token"};
}

} // namespace

Step exec_step(const Configuration& config, std::string_view contract) {
    Configuration next = config;
    RuntimeContract& rc = require_contract(next, contract);
    std::size_t ci = next.index_of(contract);
    if (rc.stuck)
        throw RuntimeUsageError("contract '" + rc.name() + "' is stuck");
    if (!rc.residual || rc.residual->stack.empty())
        throw RuntimeUsageError("contract '" + rc.name() + "' has no statement to execute");
    const Stmt& s = *rc.residual->stack.back();
    rc.residual->stack.pop_back();
    EvalContext ctx{rc.memory, next.clock, &rc.usage_seq};
    try {
        switch (s.kind) {
        case StmtKind::FieldAssign: {
            Value v = eval(s.value, ctx);
            rc.memory.set_value(s.target, std::move(v));
            return Step{Rule::FieldUpdate, SilentLabel{}, std::move(next)};
        }
        case StmtKind::ValueSend: {
            Value v = eval(s.value, ctx);
            std::string to = party_of(rc.memory, s.target);
            return Step{Rule::ValueSend, ValueOutLabel{std::move(v), std::move(to)}, std::move(next)};
        }
        case StmtKind::AssetMove: {
            Value amount = eval(s.value, ctx);
            AssetValue moved = withdraw(rc.memory, s.source, amount);
            deposit(rc.memory, s.target, moved);
            return Step{Rule::AssetUpdate, SilentLabel{}, std::move(next)};
        }
        case StmtKind::AssetSend: {
            Value amount = eval(s.value, ctx);
            std::string to = party_of(rc.memory, s.target);
            AssetValue moved = withdraw(rc.memory, s.source, amount);
            return Step{Rule::AssetSend, AssetOutLabel{std::move(moved), std::move(to)}, std::move(next)};
        }
        case StmtKind::If: {
            Value cond = eval(s.value, ctx);
            if (!cond.is<bool>())
                throw StuckSignal{"condition is not a boolean"};
            if (!cond.as<bool>())
                return Step{Rule::CondFalse, SilentLabel{}, std::move(next)};
            for (auto it = s.body.rbegin(); it != s.body.rend(); ++it)
                rc.residual->stack.push_back(&*it);
            return Step{Rule::CondTrue, SilentLabel{}, std::move(next)};
        }
        }
    } catch (const EvalError& e) {
        return stuck_step(config, ci, e.what());
    } catch (const StuckSignal& e) {
        return stuck_step(config, ci, e.reason);
    }
    throw RuntimeUsageError("unknown statement");
}

Step finish_body(const Configuration& config, std::string_view contract) {
    Configuration next = config;
    RuntimeContract& rc = require_contract(next, contract);
    std::size_t ci = next.index_of(contract);
    if (rc.stuck)
        throw RuntimeUsageError("contract '" + rc.name() + "' is stuck");
    if (!rc.residual || !rc.residual->stack.empty())
        throw RuntimeUsageError("contract '" + rc.name() + "' has no completed body");
    const FunctionDecl* f = rc.residual->function;
    if (f != nullptr) {
        for (std::size_t i = 0; i < f->events.size(); ++i) {
            const EventDecl& ev = f->events[i];
            try {
                Time trigger = to_time(eval(ev.trigger, EvalContext{rc.memory, next.clock, &rc.usage_seq}));
                rc.pending.push_back(PendingEvent{trigger, &ev, f->name + "#" + std::to_string(i), rc.schedule_seq++});
            } catch (const EvalError& e) {
                return stuck_step(config, ci, std::string("event guard: ") + e.what());
            }
        }
        for (const auto& y : f->asset_params) {
            const AssetValue* cell = rc.memory.asset(y);
            if (cell != nullptr && !is_empty(*cell))
                return stuck_step(config, ci, "asset parameter '" + y + "' not drained (holds " + to_display(*cell) + ")");
        }
        for (const auto& z : f->value_params)
            rc.memory.erase(z);
        for (const auto& y : f->asset_params)
            rc.memory.erase(y);
    }
    rc.state = rc.residual->target_state;
    rc.residual.reset();
    return Step{Rule::StateChange, SilentLabel{}, std::move(next)};
}

Step advance_body(const Configuration& config, std::string_view contract) {
    const RuntimeContract& rc = config.contract(contract);
    if (rc.residual && rc.residual->stack.empty())
        return finish_body(config, contract);
    return exec_step(config, contract);
}

// ---------------------------------------------------------------------------
// Events and time

Configuration fire_event(const Configuration& config, std::string_view contract, std::size_t index) {
    Configuration next = config;
    RuntimeContract& rc = require_contract(next, contract);
    if (!rc.idle())
        throw EventNotReady("contract '" + rc.name() + "' is not idle");
    if (index >= rc.pending.size())
        throw EventNotReady("no pending event #" + std::to_string(index));
    const PendingEvent& ev = rc.pending[index];
    if (ev.trigger != next.clock)
        throw EventNotReady("event " + ev.origin + " is due at t=" + std::to_string(ev.trigger.seconds));
    if (ev.guard_state() != *rc.state)
        throw EventNotReady("event " + ev.origin + " expects @" + ev.guard_state() + ", contract is @" + *rc.state);
    Residual res;
    for (auto it = ev.handler().rbegin(); it != ev.handler().rend(); ++it)
        res.stack.push_back(&*it);
    res.target_state = ev.next_state();
    rc.residual = std::move(res);
    rc.pending.erase(rc.pending.begin() + static_cast<std::ptrdiff_t>(index));
    return next;
}

Configuration discard_stale_event(const Configuration& config, std::string_view contract, std::size_t index) {
    Configuration next = config;
    RuntimeContract& rc = require_contract(next, contract);
    if (!rc.idle())
        throw EventNotReady("contract '" + rc.name() + "' is not idle");
    if (index >= rc.pending.size())
        throw EventNotReady("no pending event #" + std::to_string(index));
    const PendingEvent& ev = rc.pending[index];
    if (ev.trigger != next.clock)
        throw EventNotReady("event " + ev.origin + " is not due");
    if (ev.guard_state() == *rc.state)
        throw EventNotReady("event " + ev.origin + " is not stale");
    rc.pending.erase(rc.pending.begin() + static_cast<std::ptrdiff_t>(index));
    return next;
}

Configuration gc_events(const Configuration& config) {
    Configuration next = config;
    for (auto& rc : next.contracts)
        std::erase_if(rc.pending, [&](const PendingEvent& ev) { return ev.trigger < next.clock; });
    return next;
}

std::optional<std::string> tick_blocker(const Configuration& config) {
    bool any_active = false;
    for (const auto& rc : config.contracts) {
        if (rc.stuck)
            return "contract '" + rc.name() + "' is stuck";
        if (rc.residual)
            return "contract '" + rc.name() + "' is executing";
        if (!due_events(rc, config.clock).empty())
            return "an event of '" + rc.name() + "' is due at t=" + std::to_string(config.clock.seconds);
        any_active = any_active || rc.active();
    }
    if (!any_active)
        return std::string("no contract has been agreed");
    return std::nullopt;
}

Configuration tick(const Configuration& config) {
    if (auto why = tick_blocker(config))
        throw TickBlocked(*why);
    Configuration next = config;
    next.clock.seconds += 1;
    return next;
}

// ---------------------------------------------------------------------------
// Conservation

ConservationLedger conservation_report(const std::vector<ContractLabel>& labels, const Configuration& final_config) {
    ConservationLedger ledger;
    for (const auto& rc : final_config.contracts) {
        ConservationLedger::Row row{rc.name(), {}, {}, {}};
        std::map<std::string, int> received, held, emitted;
        try {
            for (const auto& cl : labels) {
                if (cl.contract != rc.name())
                    continue;
                if (const auto* call = std::get_if<CallLabel>(&cl.label)) {
                    for (const auto& a : call->assets) {
                        if (const auto* f = std::get_if<Fungible>(&a))
                            row.received = row.received + f->amount;
                        else
                            ++received[std::get<TokenAsset>(a).id];
                    }
                } else if (const auto* out = std::get_if<AssetOutLabel>(&cl.label)) {
                    if (const auto* f = std::get_if<Fungible>(&out->asset)) {
                        if (f->amount.is_negative())
                            ledger.violations.push_back(rc.name() + ": negative emission " + f->amount.to_string());
                        row.emitted = row.emitted + f->amount;
                    } else {
                        ++emitted[std::get<TokenAsset>(out->asset).id];
                    }
                }
            }
            for (const auto& [name, slot] : rc.memory.slots()) {
                const auto* a = std::get_if<AssetValue>(&slot);
                if (a == nullptr)
                    continue;
                if (const auto* f = std::get_if<Fungible>(a)) {
                    if (f->amount.is_negative())
                        ledger.violations.push_back(rc.name() + ": asset '" + name + "' is negative (" +
                                                    f->amount.to_string() + ")");
                    row.held = row.held + f->amount;
                } else {
                    ++held[std::get<TokenAsset>(*a).id];
                }
            }
        } catch (const DecimalError& e) {
            ledger.violations.push_back(rc.name() + ": " + e.what());
        }
        if (row.received != row.held + row.emitted)
            ledger.violations.push_back(rc.name() + ": received " + row.received.to_string() + " but held " +
                                        row.held.to_string() + " and emitted " + row.emitted.to_string());
        std::set<std::string> ids;
        for (const auto* m : {&received, &held, &emitted})
            for (const auto& [id, n] : *m)
                ids.insert(id);
        for (const auto& id : ids) {
            int r = received[id], h = held[id], e = emitted[id];
            if (h > 1)
                ledger.violations.push_back(rc.name() + ": token " + id + " held " + std::to_string(h) + " times");
            if (r != h + e)
                ledger.violations.push_back(rc.name() + ": token " + id + " received " + std::to_string(r) +
                                            " times, held " + std::to_string(h) + ", emitted " + std::to_string(e));
        }
        ledger.rows.push_back(std::move(row));
    }
    return ledger;
}

void verify(const ConservationLedger& ledger) {
    if (ledger.ok())
        return;
    std::string msg = "conservation violated:";
    for (const auto& v : ledger.violations)
        msg += "\n  " + v;
    throw ConservationViolation(msg);
}

} // namespace stipula
