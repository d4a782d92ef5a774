#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "codeeff/assignment.hpp"
#include "codeeff/codebleu.hpp"
#include "codeeff/efficiency.hpp"
#include "codeeff/lccs.hpp"
#include "codeeff/pynorm.hpp"

using namespace codeeff;

namespace {

std::string fixture_source(int i) {
    char name[16];
    std::snprintf(name, sizeof name, "p%02d.py", i % 50);
    std::ifstream in(std::string(CODEEFF_FIXTURE_DIR) + "/normalize/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// a few fixtures glued together, roughly the size of a long submission
std::string long_source(int first, int count) {
    std::string s;
    for (int i = 0; i < count; ++i) s += fixture_source(first + i);
    return s;
}

}  // namespace

static void BM_Lccs(benchmark::State& state) {
    std::string a = long_source(0, static_cast<int>(state.range(0)));
    std::string b = long_source(7, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lccs_similarity(a, b));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * (a.size() + b.size())));
}
BENCHMARK(BM_Lccs)->Arg(1)->Arg(4)->Arg(16);

static void BM_Normalize(benchmark::State& state) {
    std::string src = long_source(0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pynorm::normalize(src));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_Normalize)->Arg(1)->Arg(8);

static void BM_CodeBleu(benchmark::State& state) {
    std::string a = pynorm::normalize(fixture_source(3)).source;
    std::string b = pynorm::normalize(fixture_source(11)).source;
    for (auto _ : state) benchmark::DoNotOptimize(codebleu(a, b));
}
BENCHMARK(BM_CodeBleu);

static void BM_CodeBleuPrecomputed(benchmark::State& state) {
    CodeFeatures a = analyze(pynorm::normalize(fixture_source(3)).source);
    CodeFeatures b = analyze(pynorm::normalize(fixture_source(11)).source);
    for (auto _ : state) benchmark::DoNotOptimize(codebleu(a, b));
}
BENCHMARK(BM_CodeBleuPrecomputed);

static void BM_Hungarian(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 100);
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (auto& row : m)
        for (double& v : row) v = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(max_weight_assignment(m));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(4)->Range(8, 512)->Complexity(benchmark::oNCubed);

static void BM_ProfileFromTimes(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::lognormal_distribution<double> d(5, 1);
    std::vector<double> times(static_cast<std::size_t>(state.range(0)));
    for (double& t : times) t = d(rng);
    for (auto _ : state) benchmark::DoNotOptimize(profile_from_times(times));
}
BENCHMARK(BM_ProfileFromTimes)->Arg(1000)->Arg(100000);
BENCHMARK_MAIN();
