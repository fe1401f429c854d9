#include <benchmark/benchmark.h>

#include <random>

#include "gf2gen/certificate.hpp"
#include "gf2gen/echelon.hpp"
#include "gf2gen/psi_builder.hpp"

using namespace gf2gen;

namespace {

FinVec random_vec(std::mt19937_64& rng, Index ground, std::size_t len) {
    std::set<Index> elems;
    for (std::size_t i = 0; i < len; ++i) elems.insert(static_cast<Index>(rng() % ground));
    return FinVec(std::vector<Index>(elems.begin(), elems.end()));
}

std::vector<FinVec> random_family(std::size_t size, Index ground) {
    std::mt19937_64 rng(size * 7919 + ground);
    std::vector<FinVec> family;
    for (std::size_t i = 0; i < size; ++i) family.push_back(random_vec(rng, ground, 5));
    return family;
}

}  // namespace

static void BM_sym_diff(benchmark::State& state) {
    std::mt19937_64 rng(17);
    FinVec a = random_vec(rng, 256, 32);
    FinVec b = random_vec(rng, 256, 32);
    for (auto _ : state) benchmark::DoNotOptimize(sym_diff(a, b));
}
BENCHMARK(BM_sym_diff);

static void BM_rank(benchmark::State& state) {
    auto family = random_family(static_cast<std::size_t>(state.range(0)), 64);
    for (auto _ : state) benchmark::DoNotOptimize(rank(family));
}
BENCHMARK(BM_rank)->Arg(8)->Arg(16)->Arg(32);

static void BM_is_independent(benchmark::State& state) {
    auto family = random_family(static_cast<std::size_t>(state.range(0)), 64);
    for (auto _ : state) benchmark::DoNotOptimize(is_independent(family));
}
BENCHMARK(BM_is_independent)->Arg(8)->Arg(16)->Arg(32);

static void BM_solve_functional(benchmark::State& state) {
    std::mt19937_64 rng(23);
    Index bound = 64;
    Functional hidden(bound);
    for (Index i = 0; i < bound; ++i) hidden.set_bit(i, rng() & 1);
    std::vector<Constraint> cons;
    for (int c = 0; c < 32; ++c) {
        FinVec v = random_vec(rng, bound, 6);
        cons.emplace_back(v, hidden.eval(v));
    }
    for (auto _ : state) benchmark::DoNotOptimize(solve_functional(cons, bound));
}
BENCHMARK(BM_solve_functional);

static void BM_build_psi(benchmark::State& state) {
    std::vector<int> columns;
    std::vector<std::vector<FinVec>> entries;
    for (int j = 0; j < 8; ++j) {
        columns.push_back(j);
        entries.push_back({FinVec{static_cast<Index>(8 + 2 * j)}});
    }
    HTable table = HTable::create(1, columns, entries, 64);
    std::vector<ScheduleItem> schedule;
    for (std::uint8_t s : {0, 1}) {
        for (int rep = 0; rep < 3; ++rep) schedule.push_back({&table, {s}, {}, 0});
    }
    std::vector<FinVec> targets{FinVec{0, 3}, FinVec{1}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_psi(1, targets, schedule, 64, kWholeGround, 64));
    }
}
BENCHMARK(BM_build_psi);

static void BM_run_build(benchmark::State& state) {
    RunConfig cfg = gen_config(7, 1, 12);
    for (auto _ : state) benchmark::DoNotOptimize(run_build(cfg));
}
BENCHMARK(BM_run_build);

static void BM_run_verify(benchmark::State& state) {
    RunConfig cfg = gen_config(7, 1, 12);
    Certificate cert = run_build(cfg);
    for (auto _ : state) {
        Certificate copy = cert;
        benchmark::DoNotOptimize(run_verify(copy));
    }
}
BENCHMARK(BM_run_verify);

BENCHMARK_MAIN();
