#include <benchmark/benchmark.h>

#include "plateau/oracle.hpp"
#include "plateau/zx.hpp"

using namespace plateau;

namespace {

Family family_of(int64_t f) { return f == 0 ? Family::qMPS : (f == 1 ? Family::qTTN : Family::qMERA); }

void BM_contract_tn(benchmark::State& st) {
    const Circuit c = build_ansatz(family_of(st.range(0)), static_cast<int>(st.range(1)));
    const Observable obs = Observable::X(c.n_qubits());
    for (auto _ : st) benchmark::DoNotOptimize(zx::contract_variance_tn(c, obs, {1, 1}));
    st.SetLabel(family_name(c.family()));
}
BENCHMARK(BM_contract_tn)->Args({0, 8})->Args({0, 12})->Args({1, 16})->Args({1, 64})->Args({2, 16})->Args({2, 64});

void BM_contract_all_params(benchmark::State& st) {
    const Circuit c = build_ansatz(family_of(st.range(0)), static_cast<int>(st.range(1)));
    const Observable obs = Observable::X(1);
    for (auto _ : st) benchmark::DoNotOptimize(zx::contract_variance_all_params(c, obs));
    st.counters["params"] = static_cast<double>(c.param_count());
}
BENCHMARK(BM_contract_all_params)->Args({0, 10})->Args({1, 16})->Args({2, 16});

void BM_grid(benchmark::State& st) {
    const Circuit c = build_ansatz(Family::qMPS, static_cast<int>(st.range(0)));
    const Observable obs = Observable::X(c.n_qubits());
    for (auto _ : st) benchmark::DoNotOptimize(oracle::grid_variance(c, obs, {1, 1}));
}
BENCHMARK(BM_grid)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_mc(benchmark::State& st) {
    const Circuit c = build_ansatz(Family::qMERA, 8);
    const Observable obs = Observable::X(8);
    for (auto _ : st) benchmark::DoNotOptimize(oracle::mc_variance(c, obs, {1, 1}, static_cast<std::uint64_t>(st.range(0)), 1));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_mc)->Arg(1000)->Arg(10000)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_statevector(benchmark::State& st) {
    const Circuit c = build_ansatz(Family::qMPS, static_cast<int>(st.range(0)));
    std::vector<double> theta(c.param_count(), 0.3);
    for (auto _ : st) benchmark::DoNotOptimize(oracle::expectation(c, Observable::X(1), theta));
}
BENCHMARK(BM_statevector)->Arg(10)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
