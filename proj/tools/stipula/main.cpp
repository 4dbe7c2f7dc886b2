#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "stipula/checker.hpp"
#include "stipula/driver.hpp"
#include "stipula/equivalence.hpp"
#include "stipula/syntax.hpp"
#include "stipula/trace_io.hpp"

namespace {

using namespace stipula;

enum Status { Ok = 0, Failure = 1, IoError = 2, CapExceeded = 3 };

/// Thrown to leave a command with a status after printing to stderr.
struct Exit {
    int status;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << path << "\n";
        throw Exit{IoError};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        std::cerr << "error: cannot write " << path << "\n";
        throw Exit{IoError};
    }
}

/// Parses and checks; prints diagnostics (warnings too when `lints`).
ContractDecl load_contract(const std::string& path, bool lints = false) {
    std::string source = read_file(path);
    ContractDecl decl;
    try {
        decl = parse_source(source);
    } catch (const SyntaxError& e) {
        std::cerr << render(Diagnostic{Severity::Error, e.span, e.what()}, path) << "\n";
        throw Exit{Failure};
    }
    auto diags = check_wellformed(decl);
    if (lints) {
        auto more = lint_asset_drain(decl);
        diags.insert(diags.end(), more.begin(), more.end());
    }
    for (const auto& d : diags)
        if (lints || d.severity == Severity::Error)
            std::cerr << render(d, path) << "\n";
    if (has_errors(diags))
        throw Exit{Failure};
    return decl;
}

Universe load_universe(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_universe(text);
    } catch (const UniverseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        throw Exit{Failure};
    }
}

TraceScript load_script(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_script(text);
    } catch (const ScriptError& e) {
        std::cerr << path << ":" << e.what() << "\n";
        throw Exit{Failure};
    }
}

EventMode mode_of(bool strict) { return strict ? EventMode::Strict : EventMode::DiscardStale; }

// ---------------------------------------------------------------------------

int cmd_parse(const std::string& file) {
    std::cout << pretty_print(load_contract(file));
    return Ok;
}

int cmd_check(const std::string& file) {
    load_contract(file, true);
    return Ok;
}

struct RunFlags {
    std::optional<std::int64_t> until;
    bool strict = false;
    bool observable = false;
    bool digest = false;
};

int cmd_run(const std::string& file, const std::string& trace, const RunFlags& flags) {
    ContractDecl decl = load_contract(file);
    TraceScript script = load_script(trace);
    RunOptions options;
    options.mode = mode_of(flags.strict);
    if (flags.until)
        options.until = Time{*flags.until};
    RunResult result;
    try {
        result = run_trace(decl, script, options);
    } catch (const ScriptError& e) {
        std::cerr << trace << ": " << e.what() << "\n";
        return Failure;
    }
    std::cout << format_run(result, FormatOptions{flags.observable, flags.digest});
    for (const auto& r : result.records)
        if (r.kind == TraceRecord::Kind::Stuck) {
            std::cerr << "error: contract " << r.contract << " stuck at t=" << r.at.seconds << ": " << r.detail
                      << "\n";
            return Failure;
        }
    return Ok;
}

void print_menu(const Session& s) {
    std::cout << s.describe();
    auto items = s.menu();
    for (std::size_t i = 0; i < items.size(); ++i)
        std::cout << "  [" << i << "] " << items[i].text << "\n";
}

int cmd_repl(const std::string& file, bool strict) {
    ContractDecl decl = load_contract(file);
    Session session(decl, mode_of(strict));
    std::cout << "commands: <n> selects a menu item; a JSON agree/call object submits it;\n"
                 "  :tick [n]  :labels  :gc  :export <file>  :quit\n";
    print_menu(session);
    std::string line;
    while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        line = line.substr(first);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r'))
            line.pop_back();
        if (line == ":quit" || line == ":q")
            break;
        if (line == ":labels") {
            for (const auto& l : session.labels())
                std::cout << "  " << to_display(l.label) << "\n";
            continue;
        }
        if (line == ":gc") {
            session.gc();
            print_menu(session);
            continue;
        }
        if (line.rfind(":tick", 0) == 0) {
            std::size_t n = 1;
            std::istringstream count(line.substr(5));
            if (!(count >> n))
                n = 1;
            std::size_t done = 0;
            for (; done < n; ++done) {
                auto items = session.menu();
                auto it = std::find_if(items.begin(), items.end(), [](const Session::MenuItem& m) {
                    return m.choice && std::holds_alternative<DoTick>(*m.choice);
                });
                if (it == items.end())
                    break;
                session.select(static_cast<std::size_t>(it - items.begin()));
            }
            if (done < n)
                std::cout << "tick not enabled after " << done << " tick(s)\n";
            print_menu(session);
            continue;
        }
        if (line.rfind(":export", 0) == 0) {
            std::string path = line.size() > 8 ? line.substr(8) : "-";
            try {
                write_file(path, format_script(session.export_script()));
            } catch (const Exit&) {
            }
            continue;
        }
        if (line.front() == '{') {
            try {
                Transaction tx = parse_transaction(line, session.config().clock);
                if (tx.at != session.config().clock) {
                    std::cout << "transactions run at the current clock (t=" << session.config().clock.seconds
                              << ")\n";
                    continue;
                }
                if (auto why = session.submit(tx))
                    std::cout << "refused: " << *why << "\n";
            } catch (const ScriptError& e) {
                std::cout << "invalid transaction: " << e.what() << "\n";
                continue;
            }
            print_menu(session);
            continue;
        }
        std::size_t pick = 0;
        std::istringstream in(line);
        if (!(in >> pick) || !in.eof()) {
            std::cout << "unknown command\n";
            continue;
        }
        try {
            Step s = session.select(pick);
            if (is_observable(s.label))
                std::cout << "  " << to_display(s.label) << "\n";
            std::cout << "  (" << rule_name(s.rule) << ")\n";
        } catch (const std::out_of_range& e) {
            std::cout << e.what() << "\n";
            continue;
        } catch (const ChoiceNotEnabled& e) {
            std::cout << e.what() << "\n";
            continue;
        }
        print_menu(session);
    }
    return Ok;
}

int cmd_lts(const std::string& file, const std::string& universe, const std::string& dot) {
    ContractDecl decl = load_contract(file);
    Universe u = load_universe(universe);
    Lts lts = explore(decl, u);
    (dot == "-" ? std::cerr : std::cout) << "nodes " << lts.nodes.size() << "\nedges " << lts.edge_count() << "\n";
    if (!dot.empty())
        write_file(dot, to_dot(lts));
    return Ok;
}

int cmd_equiv(const std::string& file1, const std::string& file2, const std::string& universe,
              const std::string& witness) {
    ContractDecl c1 = load_contract(file1);
    ContractDecl c2 = load_contract(file2);
    Universe u = load_universe(universe);
    BisimVerdict v = bisimilar(c1, c2, u);
    if (v.related) {
        std::cout << "RELATED\n";
        return Ok;
    }
    std::cout << "NOT RELATED\n" << v.explanation << "\n";
    if (v.witness) {
        std::cout << "witness (" << v.witness_difference << "):\n" << format_script(*v.witness);
        if (!witness.empty())
            write_file(witness, format_script(*v.witness));
    } else {
        std::cout << "no deterministic witness within the universe\n";
    }
    return Failure;
}

int cmd_fuzz(const std::string& file, std::uint64_t seed, std::size_t runs) {
    ContractDecl decl = load_contract(file);
    std::mt19937_64 rng(seed);
    std::size_t violations = 0;
    std::size_t stuck = 0;
    for (std::size_t i = 0; i < runs; ++i) {
        TraceScript script = random_script(decl, rng);
        RunResult r = run_trace(decl, script);
        if (r.stuck())
            ++stuck;
        ConservationLedger ledger = conservation_report(r.labels(), r.final_config);
        if (!ledger.ok()) {
            ++violations;
            std::cout << "violation in run " << i << ":\n";
            for (const auto& v : ledger.violations)
                std::cout << "  " << v << "\n";
            std::cout << format_script(script);
        }
    }
    std::cout << runs << " runs, " << stuck << " stuck, " << violations << " conservation violations\n";
    return violations ? Failure : Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stipula toolchain: parse, check, run and compare legal contracts"};
    app.require_subcommand(1);

    std::string file, file2, trace, universe, dot, witness;
    RunFlags flags;
    bool strict = false;
    std::uint64_t seed = 1;
    std::size_t runs = 1000;

    auto* parse = app.add_subcommand("parse", "Parse a contract and print it in canonical form");
    parse->add_option("file", file, "Contract source")->required();

    auto* check = app.add_subcommand("check", "Check well-formedness and print lints");
    check->add_option("file", file, "Contract source")->required();

    auto* run = app.add_subcommand("run", "Execute a JSON-lines trace script");
    run->add_option("file", file, "Contract source")->required();
    run->add_option("trace", trace, "Trace script")->required();
    run->add_option("--until", flags.until, "Advance the clock to T after the script");
    run->add_flag("--strict-events", flags.strict, "Due events block calls and ticks regardless of state");
    run->add_flag("--observable", flags.observable, "Print only observable labels");
    run->add_flag("--digest", flags.digest, "Print the final configuration digest");

    auto* repl = app.add_subcommand("repl", "Step through a contract interactively");
    repl->add_option("file", file, "Contract source")->required();
    repl->add_flag("--strict-events", strict, "Due events block calls and ticks regardless of state");

    auto* lts = app.add_subcommand("lts", "Explore the bounded transition system");
    lts->add_option("file", file, "Contract source")->required();
    lts->add_option("universe", universe, "Universe file")->required();
    lts->add_option("--dot", dot, "Write the LTS in DOT format ('-' for stdout)");

    auto* equiv = app.add_subcommand("equiv", "Decide bounded legal bisimilarity");
    equiv->add_option("file1", file, "First contract")->required();
    equiv->add_option("file2", file2, "Second contract")->required();
    equiv->add_option("universe", universe, "Universe file")->required();
    equiv->add_option("--witness", witness, "Write a distinguishing script");

    auto* fuzz = app.add_subcommand("fuzz", "Run random scripts and check asset conservation");
    fuzz->add_option("file", file, "Contract source")->required();
    fuzz->add_option("--seed", seed, "Random seed");
    fuzz->add_option("--runs", runs, "Number of scripts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : IoError;
    }

    try {
        if (*parse)
            return cmd_parse(file);
        if (*check)
            return cmd_check(file);
        if (*run)
            return cmd_run(file, trace, flags);
        if (*repl)
            return cmd_repl(file, strict);
        if (*lts)
            return cmd_lts(file, universe, dot);
        if (*equiv)
            return cmd_equiv(file, file2, universe, witness);
        if (*fuzz)
            return cmd_fuzz(file, seed, runs);
    } catch (const Exit& e) {
        return e.status;
    } catch (const ExplosionError& e) {
        std::cerr << "error: " << e.what() << " (" << e.nodes << " explored)\n";
        return CapExceeded;
    }
    return Ok;
}
