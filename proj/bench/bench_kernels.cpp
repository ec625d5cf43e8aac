// Serial vs OpenMP timings for the two parallel kernels: exhaustive 0-1
// enumeration and alignment edge scoring.

#include <random>

#include <benchmark/benchmark.h>

#include "supportgraph/graph.hpp"
#include "supportgraph/ilp.hpp"
#include "supportgraph/view_model.hpp"

namespace sg = supportgraph;

namespace {

sg::IlpModel knapsack(int n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> w(0.1, 1.0);
    sg::IlpModel m;
    std::vector<sg::Term> row;
    for (int j = 0; j < n; ++j) {
        const sg::VarId x = m.add_variable("x" + std::to_string(j), w(rng));
        row.push_back({x, w(rng)});
    }
    m.add_constraint(row, sg::Sense::LessEqual, n / 4.0);
    return m;
}

void exhaustive(benchmark::State& state, sg::Execution execution) {
    const sg::IlpModel m = knapsack(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sg::exhaustive_solve(m, execution));
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

void BM_ExhaustiveSerial(benchmark::State& s) { exhaustive(s, sg::Execution::Serial); }
void BM_ExhaustiveParallel(benchmark::State& s) { exhaustive(s, sg::Execution::Parallel); }
BENCHMARK(BM_ExhaustiveSerial)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveParallel)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BranchAndBound(benchmark::State& state) {
    const sg::IlpModel m = knapsack(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sg::solve(m));
}
BENCHMARK(BM_BranchAndBound)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

// Every paragraph token against every paragraph token of the full fixture.
void alignment(benchmark::State& state, sg::Execution execution) {
    const sg::QAInstance inst = sg::load_instance(std::string(SUPPORTGRAPH_FIXTURES) + "/morata_full.json");
    const sg::EmbeddingTable table = sg::load_embeddings(std::string(SUPPORTGRAPH_FIXTURES) + "/embeddings.txt");
    const sg::Selector tokens{sg::Side::Paragraph, sg::ViewKind::Tokens, sg::LabelFilter::Any, false};
    const sg::Endpoint ep{&inst.paragraph, sg::Side::Paragraph, -1, tokens};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sg::build_alignment_edges(ep, ep, sg::ScorerKind::Entailment, 0.5, table, "bench", execution));
    }
}

void BM_AlignmentSerial(benchmark::State& s) { alignment(s, sg::Execution::Serial); }
void BM_AlignmentParallel(benchmark::State& s) { alignment(s, sg::Execution::Parallel); }
BENCHMARK(BM_AlignmentSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AlignmentParallel)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
