#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "stipula/runtime.hpp"

namespace stipula {

// ---------------------------------------------------------------------------
// Choices

struct DoAgree {
    std::string contract;
    AgreeLabel label;
    friend bool operator==(const DoAgree&, const DoAgree&) = default;
};

struct DoCall {
    std::string contract;
    CallLabel label;
    std::size_t function_index = 0;
    friend bool operator==(const DoCall&, const DoCall&) = default;
};

struct DoFireEvent {
    std::string contract;
    std::size_t index = 0;
    friend bool operator==(const DoFireEvent&, const DoFireEvent&) = default;
};

struct DoDiscardStale {
    std::string contract;
    std::size_t index = 0;
    friend bool operator==(const DoDiscardStale&, const DoDiscardStale&) = default;
};

struct DoExecStep {
    std::string contract;
    friend bool operator==(const DoExecStep&, const DoExecStep&) = default;
};

struct DoTick {
    friend bool operator==(const DoTick&, const DoTick&) = default;
};

using EnabledChoice = std::variant<DoAgree, DoCall, DoFireEvent, DoDiscardStale, DoExecStep, DoTick>;

std::string to_display(const EnabledChoice& choice, const Configuration& config);

/// Agreements and calls offered to every contract they fit.
struct Alphabet {
    std::vector<AgreeLabel> agrees;
    std::vector<CallLabel> calls;
};

/// Every choice whose rule premises hold, restricted to `alphabet` for
/// agreements and calls. Mid-body configurations offer only DoExecStep.
std::vector<EnabledChoice> enabled(const Configuration& config, const Alphabet& alphabet,
                                   EventMode mode = EventMode::DiscardStale);

class ChoiceNotEnabled : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Applies exactly one rule.
Step step(const Configuration& config, const EnabledChoice& choice, EventMode mode = EventMode::DiscardStale);

// ---------------------------------------------------------------------------
// Scripts and runs

struct Transaction {
    enum class Kind { Agree, Call, Wait };

    Time at;
    Kind kind = Kind::Wait;
    /// Target contract; empty means the first one.
    std::string contract;
    AgreeLabel agree;
    CallLabel call;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct TraceScript {
    std::vector<Transaction> transactions;
    friend bool operator==(const TraceScript&, const TraceScript&) = default;
};

class ScriptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TraceRecord {
    enum class Kind { Transition, Rejected, Stuck };

    Kind kind = Kind::Transition;
    Time at;
    std::string contract;
    Rule rule = Rule::Tick;
    /// The emitted label; for a rejection, the refused agreement or call.
    Label label;
    /// Rejection or stuck reason.
    std::string detail;
    /// Declaration used by an accepted call.
    std::size_t function_index = 0;
    /// Event records: the pending event's origin and trigger.
    std::string event_origin;
    Time event_trigger;
};

struct RunOptions {
    std::optional<Time> until;
    EventMode mode = EventMode::DiscardStale;
};

struct RunResult {
    std::vector<TraceRecord> records;
    Configuration final_config;
    /// Set when the run could not advance the clock any further.
    std::optional<std::string> halted;

    bool stuck() const;
    /// Labels of the accepted transitions, for conservation checks.
    std::vector<ContractLabel> labels() const;
};

/// Incremental form of run_trace; copyable, so searches can branch.
class Executor {
public:
    Executor(Configuration config, EventMode mode);

    /// Settles the current instant, then ticks up to `target` settling each
    /// instant. Returns false when the clock cannot advance (see halted()).
    /// Throws ScriptError when `target` is in the past.
    bool advance_to(Time target);

    /// Applies an agreement or call at the current clock and runs its body.
    /// Returns false when the transaction is refused.
    bool apply(const Transaction& tx);

    /// Fires every triggerable event at the current instant.
    void settle();

    const Configuration& config() const { return config_; }
    const std::vector<TraceRecord>& records() const { return records_; }
    const std::optional<std::string>& halted() const { return halted_; }

    RunResult finish() &&;

private:
    void push(Rule rule, Label label, const std::string& contract);
    void reject(Label label, const std::string& contract, std::string why);
    void run_body(const std::string& contract);
    void fire(const std::string& contract, std::size_t index);
    void discard_stale();

    Configuration config_;
    EventMode mode_;
    std::vector<TraceRecord> records_;
    std::optional<std::string> halted_;
};

/// Deterministic execution: ticks up to each transaction's time, firing due
/// events in scheduling order and running bodies eagerly; stale events are
/// discarded just before a tick. Refused transactions are recorded and
/// skipped. The clock starts at the first transaction's time.
RunResult run_trace(const ContractDecl& decl, const TraceScript& script, const RunOptions& options = {});
RunResult run_trace(std::vector<std::shared_ptr<const ContractDecl>> decls, const TraceScript& script,
                    const RunOptions& options = {});

class ReplayMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sees every configuration a replay passes through.
using StepObserver = std::function<void(const Configuration&)>;

/// Re-derives a run by feeding its records through `step`.
Configuration replay(std::vector<std::shared_ptr<const ContractDecl>> decls, const std::vector<TraceRecord>& records,
                     EventMode mode = EventMode::DiscardStale, const StepObserver& observe = {});
Configuration replay(const ContractDecl& decl, const std::vector<TraceRecord>& records,
                     EventMode mode = EventMode::DiscardStale, const StepObserver& observe = {});

/// Stable textual rendering of a configuration, and its 64-bit FNV-1a hash.
std::string canonical_text(const Configuration& config);
std::string digest(const Configuration& config);

// ---------------------------------------------------------------------------
// Random scripts

struct FuzzOptions {
    std::size_t max_transactions = 12;
    std::int64_t max_gap = 4;
    /// Probability that an asset argument is a token rather than currency.
    double token_bias = 0.4;
};

/// A random, well-timed script: one agreement followed by calls drawn from
/// the contract's functions with small values, plus a final wait.
TraceScript random_script(const ContractDecl& decl, std::mt19937_64& rng, const FuzzOptions& options = {});

// ---------------------------------------------------------------------------
// Interactive stepping

class Session {
public:
    struct MenuItem {
        std::string text;
        /// Empty for agreement/call templates, which need a transaction.
        std::optional<EnabledChoice> choice;
    };

    explicit Session(const ContractDecl& decl, EventMode mode = EventMode::DiscardStale);

    const Configuration& config() const { return config_; }

    /// State, clock, memory and pending events.
    std::string describe() const;

    std::vector<MenuItem> menu() const;

    /// Applies a concrete menu item. Throws std::out_of_range or
    /// ChoiceNotEnabled.
    Step select(std::size_t item);

    /// Applies an agreement or call at the current clock. Returns a
    /// rejection message, or nothing on success.
    std::optional<std::string> submit(const Transaction& tx);

    /// Drops expired events.
    void gc();

    const std::vector<ContractLabel>& labels() const { return labels_; }

    /// Accepted transactions with their times, ending with a wait at the
    /// current clock.
    TraceScript export_script() const;

private:
    void record(const Step& s);

    EventMode mode_;
    Configuration config_;
    std::vector<ContractLabel> labels_;
    std::vector<Transaction> log_;
};

} // namespace stipula
