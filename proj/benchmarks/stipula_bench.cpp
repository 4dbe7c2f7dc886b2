#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "stipula/equivalence.hpp"
#include "stipula/syntax.hpp"
#include "stipula/trace_io.hpp"

using namespace stipula;

namespace {

std::string slurp(const std::string& rel) {
    std::ifstream in(std::string(STIPULA_CORPUS_DIR) + "/" + rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void BM_Parse(benchmark::State& state) {
    std::string src = slurp("alea.stipula");
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_source(src));
}
BENCHMARK(BM_Parse);

void BM_RunTrace(benchmark::State& state) {
    ContractDecl decl = parse_source(slurp("bike_rental.stipula"));
    TraceScript script = parse_script(slurp("traces/bike_rental.happy.jsonl"));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_trace(decl, script));
}
BENCHMARK(BM_RunTrace)->Unit(benchmark::kMillisecond);

void BM_Explore(benchmark::State& state) {
    ContractDecl decl = parse_source(slurp("bike_rental.stipula"));
    Universe u = parse_universe(slurp("universes/bike_rental.json"));
    u.horizon = static_cast<std::int64_t>(state.range(0));
    for (auto _ : state) {
        Lts lts = explore(decl, u);
        state.counters["nodes"] = static_cast<double>(lts.nodes.size());
    }
}
BENCHMARK(BM_Explore)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Bisimilar(benchmark::State& state) {
    ContractDecl a = parse_source(slurp("fg_unordered.stipula"));
    ContractDecl b = parse_source(slurp("fg_renamed.stipula"));
    Universe u = parse_universe(slurp("universes/fg.json"));
    for (auto _ : state)
        benchmark::DoNotOptimize(bisimilar(a, b, u).related);
}
BENCHMARK(BM_Bisimilar)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
