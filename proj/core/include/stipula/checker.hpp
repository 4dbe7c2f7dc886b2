#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stipula/ast.hpp"

namespace stipula {

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    Span span;
    std::string message;
};

/// `file:line:col: severity: message`
std::string render(const Diagnostic& d, std::string_view file);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Well-formedness: name disjointness, agreement partition, parameter
/// scoping (including parameters leaking into events), statement
/// destinations, and name resolution. Warnings flag unreachable states.
std::vector<Diagnostic> check_wellformed(const ContractDecl& decl);

/// Warns for each asset parameter that some path through its function body
/// leaves without a full drain (`y -o ...` of the whole parameter).
std::vector<Diagnostic> lint_asset_drain(const ContractDecl& decl);

/// Edges state -> successor states, through functions and events.
struct StateGraph {
    std::map<std::string, std::set<std::string>> edges;
    std::set<std::string> states;
    std::set<std::string> reachable;
};

StateGraph state_graph(const ContractDecl& decl);

} // namespace stipula
