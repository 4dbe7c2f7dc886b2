#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stipula/driver.hpp"
#include "stipula/runtime.hpp"

namespace stipula {

// ---------------------------------------------------------------------------
// Universes

/// The finite slice of behaviour explored by the checker.
struct Universe {
    /// Number of clock values explored: start .. start + horizon - 1. The
    /// tick out of the last one leads to a shared frontier node.
    std::int64_t horizon = 1;
    Time start;
    /// Agreements plus calls accepted per instant.
    std::size_t max_calls_per_tick = 2;
    std::vector<AgreeLabel> agrees;
    std::vector<CallLabel> calls;
    EventMode mode = EventMode::DiscardStale;
    /// Node cap per LTS; 0 uses node_cap().
    std::size_t node_cap = 0;
};

class UniverseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"horizon": 3, "start": 0, "max_calls_per_tick": 2, "strict_events": false,
///  "agree": [{"parties": [...], "groups": [...]}],
///  "calls": [{"party": "A", "fn": "f", "args": [], "assets": []}]}
Universe parse_universe(std::string_view json);
std::string format_universe(const Universe& u);

class ExplosionError : public std::runtime_error {
public:
    ExplosionError(const std::string& what, std::size_t count) : std::runtime_error(what), nodes(count) {}
    std::size_t nodes;
};

/// STIPULA_NODE_CAP when set to a positive integer, else 200000.
std::size_t node_cap();

// ---------------------------------------------------------------------------
// Bounded LTS

struct LtsEdge {
    enum class Kind { Agree, Call, Event, Discard, Tick };

    Kind kind = Kind::Tick;
    /// Observable labels emitted along the edge, in order.
    std::vector<Label> labels;
    std::size_t target = 0;
};

/// An idle configuration (or a stuck one, which has no edges). Bodies and
/// handlers run to completion inside an edge.
struct LtsNode {
    Configuration config;
    /// Agreements and calls already accepted at this instant.
    std::size_t calls_used = 0;
    bool stuck = false;
    bool frontier = false;
    std::vector<LtsEdge> edges;
};

struct Lts {
    std::vector<LtsNode> nodes;
    std::size_t root = 0;

    std::size_t edge_count() const;
};

Lts explore(const ContractDecl& decl, const Universe& u);
/// Explores from `config`; the universe's start is ignored.
Lts explore(const Configuration& config, const Universe& u);

std::string to_dot(const Lts& lts);

/// Canonical key of an observable label. Agreements are compared up to
/// reordering of parties and of whole group rows.
std::string label_key(const Label& label);

// ---------------------------------------------------------------------------
// Legal bisimulation

struct BisimVerdict {
    bool related = false;
    /// Why the roots are not related, in terms of the first failed
    /// obligation.
    std::string explanation;
    /// A script whose runs differ observably, when one was found.
    std::optional<TraceScript> witness;
    std::string witness_difference;
    std::size_t nodes_left = 0;
    std::size_t nodes_right = 0;
    std::size_t pairs = 0;
};

/// Decides bisimilarity of the two initial configurations at u.start.
/// A negative verdict carries a witness script when a deterministic one
/// exists within the universe.
BisimVerdict bisimilar(const ContractDecl& c1, const ContractDecl& c2, const Universe& u);

/// Decides bisimilarity of two configurations at the same clock; the
/// universe's start is ignored. No witness is searched.
BisimVerdict bisimilar_configs(const Configuration& c1, const Configuration& c2, const Universe& u);

/// Runs `script` on both contracts and describes the first observable
/// difference: per-instant multisets of labels, refusals, stuck and halted
/// runs. Nothing when the runs look alike.
std::optional<std::string> check_witness(const ContractDecl& c1, const ContractDecl& c2, const TraceScript& script,
                                         EventMode mode = EventMode::DiscardStale);

struct TimeShiftResult {
    bool related_at_start = false;
    bool related_at_shifted = false;
};

/// Plays the game from fresh configurations at `t` and at `t_shifted`.
TimeShiftResult check_time_shift(const ContractDecl& c1, const ContractDecl& c2, const Universe& u, Time t,
                                 Time t_shifted);

// ---------------------------------------------------------------------------
// Renaming

struct Renaming {
    std::map<std::string, std::string> states;
    std::map<std::string, std::string> assets;
    std::map<std::string, std::string> fields;
    std::optional<std::string> contract;
};

/// Applies the renaming everywhere the names occur. Unmapped names stay.
ContractDecl rename(const ContractDecl& decl, const Renaming& r);

/// A random bijection on states, assets and fields (a permutation mixed
/// with fresh names), and a fresh contract name.
Renaming random_renaming(const ContractDecl& decl, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Non-interference laws

/// `first second` against `second first` for law 1..10.
struct LawInstance {
    int law = 1;
    Stmt first;
    Stmt second;
};

/// A contract with a hole in the body of one function.
struct LawContext {
    ContractDecl skeleton;
    std::string function;
    std::size_t hole_index = 0;
    Universe universe;
};

class SideConditionViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Statement shapes of each law, e.g. law 4 is `E -o h, A` then `E' -> A'`.
std::string law_shape(int law);

/// Checks the law's shape and freshness conditions, plus x != x' for law 3
/// and disjoint asset names for laws 8 to 10.
void check_side_conditions(const LawInstance& inst);

/// The context with `stmts` in its hole.
ContractDecl fill(const LawContext& ctx, const std::vector<Stmt>& stmts);

/// Checks side conditions, then compares the two orders.
BisimVerdict check_law(const LawInstance& inst, const LawContext& ctx);

/// Compares the two orders without checking side conditions.
BisimVerdict compare_orders(const LawInstance& inst, const LawContext& ctx);

/// One-function context over fields x1..x3 and assets h1..h4: `f` funds the
/// assets from its asset parameter before the hole; `g` reveals every cell.
LawContext random_law_context(std::mt19937_64& rng);

/// A random instance satisfying the side conditions whose statements cannot
/// get stuck in the contexts above.
LawInstance random_law_instance(int law, std::mt19937_64& rng);

/// For laws 2..10: an instance breaking a freshness condition, and a
/// context in which the two orders are observably different.
std::optional<std::pair<LawInstance, LawContext>> violating_instance(int law);

} // namespace stipula
