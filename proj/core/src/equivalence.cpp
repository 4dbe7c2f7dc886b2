#include "stipula/equivalence.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json_codec.hpp"

namespace stipula {

using json_codec::Json;

// ---------------------------------------------------------------------------
// Universes

Universe parse_universe(std::string_view text) {
    Universe u;
    try {
        Json j = Json::parse(text);
        if (!j.is_object())
            throw UniverseError("universe must be a JSON object");
        if (!j.contains("horizon") || !j.at("horizon").is_number_integer())
            throw UniverseError("'horizon' must be an integer");
        u.horizon = j.at("horizon").get<std::int64_t>();
        if (u.horizon < 1)
            throw UniverseError("'horizon' must be at least 1");
        if (j.contains("start"))
            u.start = json_codec::decode_time(j, "start");
        if (j.contains("max_calls_per_tick")) {
            const Json& k = j.at("max_calls_per_tick");
            if (!k.is_number_integer() || k.get<std::int64_t>() < 1)
                throw UniverseError("'max_calls_per_tick' must be a positive integer");
            u.max_calls_per_tick = k.get<std::size_t>();
        }
        if (j.value("strict_events", false))
            u.mode = EventMode::Strict;
        if (j.contains("agree"))
            for (const auto& a : j.at("agree"))
                u.agrees.push_back(json_codec::decode_agree(a));
        if (j.contains("calls"))
            for (const auto& c : j.at("calls"))
                u.calls.push_back(json_codec::decode_call(c));
    } catch (const Json::exception& e) {
        throw UniverseError(e.what());
    } catch (const json_codec::CodecError& e) {
        throw UniverseError(e.what());
    }
    return u;
}

std::string format_universe(const Universe& u) {
    Json j;
    j["horizon"] = u.horizon;
    j["start"] = u.start.seconds;
    j["max_calls_per_tick"] = u.max_calls_per_tick;
    if (u.mode == EventMode::Strict)
        j["strict_events"] = true;
    Json agrees = Json::array();
    for (const auto& a : u.agrees)
        agrees.push_back(json_codec::encode_agree(a, Json::object()));
    j["agree"] = agrees;
    Json calls = Json::array();
    for (const auto& c : u.calls)
        calls.push_back(json_codec::encode_call(c, Json::object()));
    j["calls"] = calls;
    return j.dump(2);
}

std::size_t node_cap() {
    if (const char* env = std::getenv("STIPULA_NODE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return 200000;
}

// ---------------------------------------------------------------------------
// Labels

std::string label_key(const Label& label) {
    if (const auto* a = std::get_if<AgreeLabel>(&label)) {
        std::vector<std::string> parties = a->parties;
        std::sort(parties.begin(), parties.end());
        std::vector<std::string> rows;
        for (const auto& g : a->groups) {
            std::vector<std::string> ps = g.parties;
            std::sort(ps.begin(), ps.end());
            Json values = Json::array();
            for (const auto& v : g.values)
                values.push_back(json_codec::encode(v));
            rows.push_back(Json{{"parties", ps}, {"values", values}}.dump());
        }
        std::sort(rows.begin(), rows.end());
        return "agree " + Json(parties).dump() + " " + Json(rows).dump();
    }
    if (const auto* c = std::get_if<CallLabel>(&label))
        return "call " + json_codec::encode_call(*c, Json::object()).dump();
    if (const auto* v = std::get_if<ValueOutLabel>(&label))
        return "value " + v->party + " " + json_codec::encode(v->value).dump();
    if (const auto* a = std::get_if<AssetOutLabel>(&label))
        return "asset " + a->party + " " + json_codec::encode(a->asset).dump();
    if (std::holds_alternative<TickLabel>(label))
        return "tick";
    return "silent";
}

namespace {

using Multiset = std::vector<std::string>;

Multiset keys_of(const std::vector<Label>& labels) {
    Multiset out;
    for (const auto& l : labels)
        out.push_back(label_key(l));
    std::sort(out.begin(), out.end());
    return out;
}

std::string show_multiset(const Multiset& ms) {
    if (ms.empty())
        return "{}";
    std::string out = "{";
    for (std::size_t i = 0; i < ms.size(); ++i)
        out += (i ? ", " : "") + ms[i];
    return out + "}";
}

bool any_stuck(const Configuration& c) {
    return std::any_of(c.contracts.begin(), c.contracts.end(),
                       [](const RuntimeContract& rc) { return rc.stuck.has_value(); });
}

bool any_residual(const Configuration& c) {
    return std::any_of(c.contracts.begin(), c.contracts.end(),
                       [](const RuntimeContract& rc) { return rc.residual && !rc.stuck; });
}

/// Runs every in-flight body to completion, collecting observable labels.
void run_to_idle(Configuration& config, std::vector<Label>& labels) {
    while (!any_stuck(config) && any_residual(config)) {
        for (const auto& rc : config.contracts) {
            if (!rc.residual || rc.stuck)
                continue;
            Step s = advance_body(config, rc.name());
            if (is_observable(s.label))
                labels.push_back(std::move(s.label));
            config = std::move(s.next);
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Exploration

class Explorer {
public:
    explicit Explorer(const Universe& u)
        : u_(u), alphabet_{u.agrees, u.calls}, cap_(u.node_cap ? u.node_cap : node_cap()) {}

    Lts run(Configuration root) {
        last_clock_ = root.clock.seconds + u_.horizon - 1;
        lts_.root = intern(std::move(root), 0);
        while (!queue_.empty()) {
            std::size_t id = queue_.front();
            queue_.pop_front();
            expand(id);
        }
        return std::move(lts_);
    }

private:
    std::size_t intern(Configuration config, std::size_t calls) {
        bool stuck = any_stuck(config);
        if (stuck)
            calls = 0;
        std::string key = canonical_text(config) + "#" + std::to_string(calls);
        if (auto it = index_.find(key); it != index_.end())
            return it->second;
        check_cap();
        LtsNode node;
        node.config = std::move(config);
        node.calls_used = calls;
        node.stuck = stuck;
        lts_.nodes.push_back(std::move(node));
        std::size_t id = lts_.nodes.size() - 1;
        index_.emplace(std::move(key), id);
        if (!stuck)
            queue_.push_back(id);
        return id;
    }

    std::size_t frontier() {
        if (!frontier_) {
            check_cap();
            LtsNode node;
            node.frontier = true;
            lts_.nodes.push_back(std::move(node));
            frontier_ = lts_.nodes.size() - 1;
        }
        return *frontier_;
    }

    void check_cap() {
        if (lts_.nodes.size() >= cap_)
            throw ExplosionError("state space exceeds the cap of " + std::to_string(cap_) + " nodes",
                                 lts_.nodes.size());
    }

    void expand(std::size_t id) {
        Configuration config = lts_.nodes[id].config;
        std::size_t calls = lts_.nodes[id].calls_used;
        std::vector<LtsEdge> edges;
        bool discarded = false;
        for (const auto& choice : enabled(config, alphabet_, u_.mode)) {
            LtsEdge edge;
            std::size_t next_calls = calls;
            if (std::holds_alternative<DoTick>(choice)) {
                edge.kind = LtsEdge::Kind::Tick;
                edge.target = config.clock.seconds >= last_clock_ ? frontier() : intern(tick(config), 0);
                edges.push_back(std::move(edge));
                continue;
            }
            if (std::holds_alternative<DoAgree>(choice) || std::holds_alternative<DoCall>(choice)) {
                if (calls >= u_.max_calls_per_tick)
                    continue;
                edge.kind = std::holds_alternative<DoAgree>(choice) ? LtsEdge::Kind::Agree : LtsEdge::Kind::Call;
                ++next_calls;
            } else if (std::holds_alternative<DoFireEvent>(choice)) {
                edge.kind = LtsEdge::Kind::Event;
            } else if (std::holds_alternative<DoDiscardStale>(choice)) {
                // Discards commute; one order suffices.
                if (discarded)
                    continue;
                discarded = true;
                edge.kind = LtsEdge::Kind::Discard;
            } else {
                continue;
            }
            Step s = step(config, choice, u_.mode);
            if (is_observable(s.label))
                edge.labels.push_back(std::move(s.label));
            Configuration next = std::move(s.next);
            run_to_idle(next, edge.labels);
            edge.target = intern(std::move(next), next_calls);
            edges.push_back(std::move(edge));
        }
        lts_.nodes[id].edges = std::move(edges);
    }

    const Universe& u_;
    Alphabet alphabet_;
    std::size_t cap_;
    std::int64_t last_clock_ = 0;
    Lts lts_;
    std::unordered_map<std::string, std::size_t> index_;
    std::deque<std::size_t> queue_;
    std::optional<std::size_t> frontier_;
};

} // namespace

std::size_t Lts::edge_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes)
        n += node.edges.size();
    return n;
}

Lts explore(const Configuration& config, const Universe& u) { return Explorer(u).run(config); }

Lts explore(const ContractDecl& decl, const Universe& u) {
    return explore(initial_configuration(decl, u.start), u);
}

std::string to_dot(const Lts& lts) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '\n') {
                out += "\\n";
                continue;
            }
            if (c == '"' || c == '\\')
                out += '\\';
            out += c;
        }
        return out + "\"";
    };
    std::ostringstream out;
    out << "digraph lts {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < lts.nodes.size(); ++i) {
        const LtsNode& n = lts.nodes[i];
        std::string text;
        std::string shape = "ellipse";
        if (n.frontier) {
            text = "frontier";
            shape = "plaintext";
        } else {
            text = "t=" + std::to_string(n.config.clock.seconds);
            for (const auto& rc : n.config.contracts)
                text += " " + (rc.state ? "@" + *rc.state : std::string("-"));
            if (n.calls_used)
                text += " calls=" + std::to_string(n.calls_used);
            if (n.stuck) {
                text += " stuck";
                shape = "box";
            }
        }
        out << "  n" << i << " [label=" << quote(text) << ", shape=" << shape
            << (i == lts.root ? ", peripheries=2" : "") << "];\n";
    }
    for (std::size_t i = 0; i < lts.nodes.size(); ++i)
        for (const auto& e : lts.nodes[i].edges) {
            std::string text;
            if (e.kind == LtsEdge::Kind::Tick)
                text = "tick";
            for (const auto& l : e.labels)
                text += (text.empty() ? "" : "\n") + to_display(l);
            if (text.empty())
                text = e.kind == LtsEdge::Kind::Discard ? "discard" : "event";
            out << "  n" << i << " -> n" << e.target << " [label=" << quote(text)
                << (e.kind == LtsEdge::Kind::Tick ? ", style=dashed" : "") << "];\n";
        }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// The game

namespace {

struct Move {
    Multiset labels;
    std::size_t target;
    friend bool operator<(const Move& a, const Move& b) {
        return std::tie(a.labels, a.target) < std::tie(b.labels, b.target);
    }
};

/// Weak moves and tick-blocks of one LTS, memoized per node.
class Moves {
public:
    explicit Moves(const Lts& lts) : lts_(lts), weak_(lts.nodes.size()), blocks_(lts.nodes.size()) {}

    const std::vector<Move>& weak(std::size_t n) {
        if (!weak_[n]) {
            std::set<Move> out;
            for (std::size_t m : closure(n))
                for (const auto& e : lts_.nodes[m].edges) {
                    if (e.kind == LtsEdge::Kind::Tick || e.labels.empty())
                        continue;
                    Multiset ms = keys_of(e.labels);
                    for (std::size_t t : closure(e.target))
                        out.insert(Move{ms, t});
                }
            weak_[n] = std::vector<Move>(out.begin(), out.end());
        }
        return *weak_[n];
    }

    /// Every (label multiset, successor after the tick) reachable from n by
    /// steps within the instant followed by a tick.
    const std::vector<Move>& blocks(std::size_t n) {
        if (!blocks_[n]) {
            std::set<Move> out;
            for (const auto& e : lts_.nodes[n].edges) {
                if (e.kind == LtsEdge::Kind::Tick) {
                    out.insert(Move{{}, e.target});
                    continue;
                }
                Multiset head = keys_of(e.labels);
                for (const auto& b : blocks(e.target)) {
                    Multiset ms = head;
                    ms.insert(ms.end(), b.labels.begin(), b.labels.end());
                    std::sort(ms.begin(), ms.end());
                    out.insert(Move{std::move(ms), b.target});
                }
            }
            blocks_[n] = std::vector<Move>(out.begin(), out.end());
        }
        return *blocks_[n];
    }

private:
    std::vector<std::size_t> closure(std::size_t n) {
        std::vector<std::size_t> out{n};
        std::unordered_set<std::size_t> seen{n};
        for (std::size_t i = 0; i < out.size(); ++i)
            for (const auto& e : lts_.nodes[out[i]].edges)
                if (e.kind != LtsEdge::Kind::Tick && e.labels.empty() && seen.insert(e.target).second)
                    out.push_back(e.target);
        return out;
    }

    const Lts& lts_;
    std::vector<std::optional<std::vector<Move>>> weak_;
    std::vector<std::optional<std::vector<Move>>> blocks_;
};

struct Obligation {
    /// Pair ids that would discharge it.
    std::vector<std::size_t> candidates;
    std::string text;
    /// Used when candidates exist but none is related.
    std::string text_unrelated;
};

struct PairInfo {
    std::size_t left;
    std::size_t right;
    bool base_failure = false;
    std::string base_reason;
    std::vector<Obligation> obligations;
};

class Game {
public:
    Game(const Lts& l, const Lts& r, std::size_t cap) : lts_{&l, &r}, moves_{Moves(l), Moves(r)}, cap_(cap) {}

    BisimVerdict solve() {
        std::size_t root = pair_id(lts_[0]->root, lts_[1]->root);
        for (std::size_t i = 0; i < pairs_.size(); ++i)
            build(i);
        std::vector<bool> in(pairs_.size());
        for (std::size_t i = 0; i < pairs_.size(); ++i)
            in[i] = !pairs_[i].base_failure;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < pairs_.size(); ++i) {
                if (!in[i])
                    continue;
                for (const auto& ob : pairs_[i].obligations) {
                    bool met = std::any_of(ob.candidates.begin(), ob.candidates.end(),
                                           [&](std::size_t c) { return in[c]; });
                    if (!met) {
                        in[i] = false;
                        changed = true;
                        break;
                    }
                }
            }
        }
        BisimVerdict v;
        v.related = in[root];
        v.nodes_left = lts_[0]->nodes.size();
        v.nodes_right = lts_[1]->nodes.size();
        v.pairs = pairs_.size();
        if (!v.related) {
            const PairInfo& p = pairs_[root];
            if (p.base_failure) {
                v.explanation = p.base_reason;
            } else {
                for (const auto& ob : p.obligations)
                    if (std::none_of(ob.candidates.begin(), ob.candidates.end(), [&](std::size_t c) { return in[c]; })) {
                        v.explanation = ob.candidates.empty() ? ob.text : ob.text_unrelated;
                        break;
                    }
            }
        }
        return v;
    }

private:
    std::size_t pair_id(std::size_t l, std::size_t r) {
        auto key = (static_cast<std::uint64_t>(l) << 32) | r;
        if (auto it = ids_.find(key); it != ids_.end())
            return it->second;
        if (pairs_.size() >= cap_)
            throw ExplosionError("bisimulation game exceeds the cap of " + std::to_string(cap_) + " pairs",
                                 pairs_.size());
        pairs_.push_back(PairInfo{l, r, false, {}, {}});
        ids_.emplace(key, pairs_.size() - 1);
        return pairs_.size() - 1;
    }

    static std::string side_name(int side) { return side == 0 ? "left" : "right"; }

    void build(std::size_t id) {
        std::size_t l = pairs_[id].left;
        std::size_t r = pairs_[id].right;
        const LtsNode& nl = lts_[0]->nodes[l];
        const LtsNode& nr = lts_[1]->nodes[r];
        std::string when = nl.frontier ? "" : " at t=" + std::to_string(nl.config.clock.seconds);
        if (nl.frontier || nr.frontier) {
            if (nl.frontier != nr.frontier)
                fail(id, "only one side reaches the end of the horizon");
            return;
        }
        if (nl.stuck || nr.stuck) {
            if (nl.stuck != nr.stuck)
                fail(id, side_name(nl.stuck ? 0 : 1) + " is stuck" + when + " and " + side_name(nl.stuck ? 1 : 0) +
                             " is not");
            return;
        }
        std::vector<Obligation> obs;
        for (int side = 0; side < 2; ++side) {
            std::size_t own = side == 0 ? l : r;
            std::size_t other = side == 0 ? r : l;
            auto orient = [&](std::size_t mine, std::size_t theirs) {
                return side == 0 ? pair_id(mine, theirs) : pair_id(theirs, mine);
            };
            for (const auto& m : moves_[side].weak(own)) {
                Obligation ob;
                std::string head = side_name(side) + " performs " + show_multiset(m.labels) + when + "; ";
                ob.text = head + side_name(1 - side) + " cannot match it";
                ob.text_unrelated = head + "every matching move of " + side_name(1 - side) + " leads to an unrelated pair";
                for (const auto& o : moves_[1 - side].weak(other))
                    if (o.labels == m.labels)
                        ob.candidates.push_back(orient(m.target, o.target));
                obs.push_back(std::move(ob));
            }
            for (const auto& m : moves_[side].blocks(own)) {
                Obligation ob;
                std::string head = side_name(side) + " performs " + show_multiset(m.labels) + when + " and then ticks; ";
                ob.text = head + side_name(1 - side) + " cannot match that block";
                ob.text_unrelated = head + "every matching block of " + side_name(1 - side) + " leads to an unrelated pair";
                for (const auto& o : moves_[1 - side].blocks(other))
                    if (o.labels == m.labels)
                        ob.candidates.push_back(orient(m.target, o.target));
                obs.push_back(std::move(ob));
            }
        }
        for (const auto& ob : obs)
            if (ob.candidates.empty()) {
                fail(id, ob.text);
                break;
            }
        pairs_[id].obligations = std::move(obs);
    }

    void fail(std::size_t id, std::string why) {
        pairs_[id].base_failure = true;
        pairs_[id].base_reason = std::move(why);
    }

    const Lts* lts_[2];
    Moves moves_[2];
    std::size_t cap_;
    std::vector<PairInfo> pairs_;
    std::unordered_map<std::uint64_t, std::size_t> ids_;
};

BisimVerdict play(const Configuration& c1, const Configuration& c2, const Universe& u) {
    Lts l = explore(c1, u);
    Lts r = explore(c2, u);
    std::size_t cap = u.node_cap ? u.node_cap : node_cap();
    return Game(l, r, cap * 4).solve();
}

// ---------------------------------------------------------------------------
// Witnesses

/// Observable footprint of a run: per instant, the sorted labels,
/// refusals and failures.
using Footprint = std::map<std::int64_t, Multiset>;

Footprint footprint(const std::vector<TraceRecord>& records, const std::optional<std::string>& halted,
                    Time final_clock) {
    Footprint out;
    for (const auto& r : records) {
        switch (r.kind) {
        case TraceRecord::Kind::Transition:
            if (is_observable(r.label))
                out[r.at.seconds].push_back(label_key(r.label));
            break;
        case TraceRecord::Kind::Rejected:
            out[r.at.seconds].push_back("refused " + label_key(r.label));
            break;
        case TraceRecord::Kind::Stuck:
            out[r.at.seconds].push_back("stuck");
            break;
        }
    }
    if (halted)
        out[final_clock.seconds].push_back("halted");
    for (auto& [t, ms] : out)
        std::sort(ms.begin(), ms.end());
    return out;
}

std::optional<std::string> compare(const Footprint& a, const Footprint& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ia != a.end() && ib != b.end() && ia->first == ib->first && ia->second == ib->second) {
            ++ia;
            ++ib;
            continue;
        }
        std::int64_t t;
        if (ia == a.end())
            t = ib->first;
        else if (ib == b.end())
            t = ia->first;
        else
            t = std::min(ia->first, ib->first);
        auto at = [&](const Footprint& f) {
            auto it = f.find(t);
            return it == f.end() ? Multiset{} : it->second;
        };
        return "at t=" + std::to_string(t) + ": left shows " + show_multiset(at(a)) + ", right shows " +
               show_multiset(at(b));
    }
    return std::nullopt;
}

std::optional<TraceScript> search_witness(const ContractDecl& c1, const ContractDecl& c2, const Universe& u) {
    struct State {
        Executor left;
        Executor right;
        TraceScript script;
        std::size_t calls = 0;
    };
    const std::size_t state_cap = 20000;
    std::int64_t last = u.start.seconds + u.horizon - 1;

    std::vector<Transaction> moves;
    for (const auto& a : u.agrees) {
        Transaction tx;
        tx.kind = Transaction::Kind::Agree;
        tx.agree = a;
        moves.push_back(tx);
    }
    for (const auto& c : u.calls) {
        Transaction tx;
        tx.kind = Transaction::Kind::Call;
        tx.call = c;
        moves.push_back(tx);
    }

    auto differs = [&](const State& s) {
        Footprint a = footprint(s.left.records(), s.left.halted(), s.left.config().clock);
        Footprint b = footprint(s.right.records(), s.right.halted(), s.right.config().clock);
        return compare(a, b).has_value() && check_witness(c1, c2, s.script, u.mode).has_value();
    };
    auto key = [](const State& s) {
        return canonical_text(s.left.config()) + "|" + canonical_text(s.right.config()) + "|" +
               std::to_string(s.calls) + (s.left.halted() ? "H" : "") + (s.right.halted() ? "H" : "");
    };

    Transaction first;
    first.at = u.start;
    State init{Executor(initial_configuration(c1, u.start), u.mode),
               Executor(initial_configuration(c2, u.start), u.mode), TraceScript{{first}}, 0};
    std::deque<State> queue;
    std::unordered_set<std::string> seen{key(init)};
    queue.push_back(std::move(init));
    while (!queue.empty() && seen.size() < state_cap) {
        State s = std::move(queue.front());
        queue.pop_front();
        if (s.left.halted() || s.right.halted())
            continue;
        Time now = s.left.config().clock;
        std::vector<State> next;
        if (s.calls < u.max_calls_per_tick)
            for (Transaction tx : moves) {
                tx.at = now;
                State n = s;
                n.left.apply(tx);
                n.right.apply(tx);
                n.left.settle();
                n.right.settle();
                n.script.transactions.push_back(tx);
                ++n.calls;
                next.push_back(std::move(n));
            }
        if (now.seconds < last) {
            Transaction wait;
            wait.at = Time{now.seconds + 1};
            State n = s;
            n.left.advance_to(wait.at);
            n.right.advance_to(wait.at);
            n.script.transactions.push_back(wait);
            n.calls = 0;
            next.push_back(std::move(n));
        }
        for (auto& n : next) {
            if (differs(n))
                return std::move(n.script);
            if (seen.insert(key(n)).second)
                queue.push_back(std::move(n));
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<std::string> check_witness(const ContractDecl& c1, const ContractDecl& c2, const TraceScript& script,
                                         EventMode mode) {
    RunOptions options;
    options.mode = mode;
    RunResult a = run_trace(c1, script, options);
    RunResult b = run_trace(c2, script, options);
    return compare(footprint(a.records, a.halted, a.final_config.clock),
                   footprint(b.records, b.halted, b.final_config.clock));
}

BisimVerdict bisimilar_configs(const Configuration& c1, const Configuration& c2, const Universe& u) {
    if (c1.clock != c2.clock)
        throw std::invalid_argument("configurations must share the clock");
    return play(c1, c2, u);
}

BisimVerdict bisimilar(const ContractDecl& c1, const ContractDecl& c2, const Universe& u) {
    BisimVerdict v = play(initial_configuration(c1, u.start), initial_configuration(c2, u.start), u);
    if (!v.related) {
        v.witness = search_witness(c1, c2, u);
        if (v.witness)
            v.witness_difference = *check_witness(c1, c2, *v.witness, u.mode);
    }
    return v;
}

TimeShiftResult check_time_shift(const ContractDecl& c1, const ContractDecl& c2, const Universe& u, Time t,
                                 Time t_shifted) {
    if (t_shifted < t)
        throw std::invalid_argument("the shifted time must not precede the start time");
    TimeShiftResult out;
    out.related_at_start = play(initial_configuration(c1, t), initial_configuration(c2, t), u).related;
    out.related_at_shifted =
        play(initial_configuration(c1, t_shifted), initial_configuration(c2, t_shifted), u).related;
    return out;
}

} // namespace stipula
