#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stipula/ast.hpp"
#include "stipula/value.hpp"

namespace stipula {

// ---------------------------------------------------------------------------
// Errors

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AgreeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EventNotReady : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TickBlocked : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Misuse of the step API (e.g. executing a statement of an idle contract).
class RuntimeUsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Labels

struct AgreeGroupValues {
    std::vector<std::string> parties;
    std::vector<Value> values;
    friend bool operator==(const AgreeGroupValues&, const AgreeGroupValues&) = default;
};

/// (A, A_1 : v_1, ..., A_n : v_n): actual parties bound to the agreement's
/// party parameters in order, then one row per agreement group.
struct AgreeLabel {
    std::vector<std::string> parties;
    std::vector<AgreeGroupValues> groups;
    friend bool operator==(const AgreeLabel&, const AgreeLabel&) = default;
};

/// A : f(u)[v]
struct CallLabel {
    std::string party;
    std::string function;
    std::vector<Value> args;
    std::vector<AssetValue> assets;
    friend bool operator==(const CallLabel&, const CallLabel&) = default;
};

/// v -> A
struct ValueOutLabel {
    Value value;
    std::string party;
    friend bool operator==(const ValueOutLabel&, const ValueOutLabel&) = default;
};

/// v -o A
struct AssetOutLabel {
    AssetValue asset;
    std::string party;
    friend bool operator==(const AssetOutLabel&, const AssetOutLabel&) = default;
};

struct SilentLabel {
    friend bool operator==(const SilentLabel&, const SilentLabel&) = default;
};
struct TickLabel {
    friend bool operator==(const TickLabel&, const TickLabel&) = default;
};

using Label = std::variant<SilentLabel, AgreeLabel, CallLabel, ValueOutLabel, AssetOutLabel, TickLabel>;

bool is_observable(const Label& label);
std::string to_display(const Label& label);

/// Transition rules, plus the stale-event discard and the stuck marker.
enum class Rule {
    Agree,
    Function,
    StateChange,
    EventMatch,
    Tick,
    ValueSend,
    AssetSend,
    FieldUpdate,
    AssetUpdate,
    CondTrue,
    CondFalse,
    DiscardStale,
    Stuck,
};

const char* rule_name(Rule rule);

// ---------------------------------------------------------------------------
// Runtime state

struct PendingEvent {
    Time trigger;
    const EventDecl* event = nullptr;
    /// "<function>#<index>": which declaration scheduled it.
    std::string origin;
    /// Scheduling order within the contract.
    std::uint64_t seq = 0;

    const std::string& guard_state() const { return event->guard_state; }
    const std::string& next_state() const { return event->next_state; }
    const std::vector<Stmt>& handler() const { return event->handler; }
};

/// Σ = S W => @Q'. `stack` holds the remaining statements, next one last.
struct Residual {
    std::vector<const Stmt*> stack;
    /// Function whose body is running (its events and parameters), or null
    /// while an event handler runs.
    const FunctionDecl* function = nullptr;
    std::string target_state;
};

struct RuntimeContract {
    std::shared_ptr<const ContractDecl> decl;
    std::optional<std::string> state; // Φ
    Memory memory;                    // ℓ
    std::optional<Residual> residual; // Σ
    std::vector<PendingEvent> pending; // Ψ, in scheduling order
    std::uint64_t usage_seq = 0;
    std::uint64_t schedule_seq = 0;
    /// Set when a transition could not complete; the contract is frozen.
    std::optional<std::string> stuck;

    const std::string& name() const { return decl->name; }
    bool active() const { return state.has_value(); }
    bool idle() const { return active() && !residual && !stuck; }
};

struct Configuration {
    std::vector<RuntimeContract> contracts;
    Time clock;

    const RuntimeContract& contract(std::string_view name) const;
    RuntimeContract& contract(std::string_view name);
    std::size_t index_of(std::string_view name) const;
};

/// C(_, ∅, _, _), t for each contract. Contract names must be distinct.
Configuration initial_configuration(std::vector<std::shared_ptr<const ContractDecl>> decls, Time clock = {});
Configuration initial_configuration(const ContractDecl& decl, Time clock = {});

// ---------------------------------------------------------------------------
// Expression evaluation

struct EvalContext {
    const Memory& memory;
    Time now;
    /// Counter for usage codes; intrinsics fail when absent.
    std::uint64_t* usage_seq = nullptr;
};

/// ⟦E⟧ℓ. Names of fungible asset cells evaluate to their amount, token
/// cells to a TokenRef. Real and Time mix in arithmetic and comparisons;
/// any other cross-type operation is an EvalError.
Value eval(const Expr& expr, const EvalContext& ctx);

/// Conversion used for event guards: Time as is, or a non-negative integral
/// Real read as seconds.
Time to_time(const Value& v);

// ---------------------------------------------------------------------------
// Transitions

struct Step {
    Rule rule;
    Label label;
    Configuration next;
};

Configuration apply_agree(const Configuration& config, std::string_view contract, const AgreeLabel& label);

enum class EventMode {
    /// A due event whose guard state mismatches neither fires nor blocks
    /// calls; it is discarded (silently) before the clock may advance.
    DiscardStale,
    /// Literal premises: any due event blocks calls and ticks.
    Strict,
};

enum class Rejection {
    UnknownContract,
    Inactive,
    Busy,
    Stuck,
    EventPending,
    WrongState,
    WrongCaller,
    Arity,
    NegativeAmount,
    DuplicateToken,
    PreconditionFalse,
    PreconditionError,
};

const char* describe(Rejection r);

class CallRejected : public std::runtime_error {
public:
    explicit CallRejected(Rejection r, const std::string& detail = {})
        : std::runtime_error(detail.empty() ? describe(r) : std::string(describe(r)) + ": " + detail), reason(r) {}
    Rejection reason;
};

struct CallAttempt {
    std::optional<Configuration> next;
    Rejection rejection = Rejection::WrongState;
    std::string detail;
    /// Declaration that accepted the call.
    std::size_t function_index = 0;

    bool accepted() const { return next.has_value(); }
};

/// Rule Function. When several declarations match the label, the first one
/// whose premises hold is used unless `function_index` pins one.
CallAttempt attempt_call(const Configuration& config, std::string_view contract, const CallLabel& label,
                         std::optional<std::size_t> function_index = std::nullopt,
                         EventMode mode = EventMode::DiscardStale);

/// Throwing form of attempt_call.
Configuration apply_call(const Configuration& config, std::string_view contract, const CallLabel& label,
                         std::optional<std::size_t> function_index = std::nullopt,
                         EventMode mode = EventMode::DiscardStale);

/// Executes the leading statement of Σ. Failures (insufficient asset,
/// evaluation errors) yield Rule::Stuck with the contract frozen.
Step exec_step(const Configuration& config, std::string_view contract);

/// Rule State Change for Σ = _ W => @Q'. Events are scheduled with their
/// guards evaluated now; undrained asset parameters make the contract stuck.
Step finish_body(const Configuration& config, std::string_view contract);

/// exec_step or finish_body, whichever applies.
Step advance_body(const Configuration& config, std::string_view contract);

/// Rule Event Match for pending event `index`.
Configuration fire_event(const Configuration& config, std::string_view contract, std::size_t index);

/// Removes a due event whose guard state no longer matches (silent).
Configuration discard_stale_event(const Configuration& config, std::string_view contract, std::size_t index);

/// Reason tick is not possible, if any.
std::optional<std::string> tick_blocker(const Configuration& config);

/// Rule Tick (Tick+ for several contracts).
Configuration tick(const Configuration& config);

/// Removes every pending event whose trigger is before the clock; such
/// events can never fire.
Configuration gc_events(const Configuration& config);

/// Indices of pending events due at the clock.
std::vector<std::size_t> due_events(const RuntimeContract& contract, Time clock);

/// Due events whose guard state is the contract's state.
std::vector<std::size_t> triggerable_events(const RuntimeContract& contract, Time clock);

/// Due events whose guard state is not the contract's state.
std::vector<std::size_t> stale_events(const RuntimeContract& contract, Time clock);

// ---------------------------------------------------------------------------
// Asset conservation

struct ConservationLedger {
    struct Row {
        std::string contract;
        Decimal received;
        Decimal held;
        Decimal emitted;
    };
    std::vector<Row> rows;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

class ConservationViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ContractLabel {
    std::string contract;
    Label label;
};

/// Received = held + emitted for fungible amounts; each token held at most
/// once and accounted for exactly once. Never throws; see `verify`.
ConservationLedger conservation_report(const std::vector<ContractLabel>& labels, const Configuration& final_config);

/// Throws ConservationViolation when the ledger has violations.
void verify(const ConservationLedger& ledger);

} // namespace stipula
