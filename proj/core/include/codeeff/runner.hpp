#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "codeeff/corpus.hpp"
#include "codeeff/executor.hpp"

namespace codeeff {

// Number of I/O tests every scaled time is normalized to.
inline constexpr double k_reference_test_count = 47.0;

enum class TestStatus { pass, wrong_answer, timeout, runtime_error, compile_error };

std::string_view to_string(TestStatus status);

struct TestResult {
    TestStatus status = TestStatus::pass;
    double median_wall_ms = 0;
    double median_cpu_ms = 0;
    std::int64_t max_rss_kb = 0;
    int runs = 0;
    std::string note;  // e.g. "out of memory", stderr tail
};

struct RunResult {
    std::string sample_id;
    std::vector<TestResult> per_test;
    int passed = 0;
    int total = 0;
    std::optional<double> scaled_time_ms;  // present iff io_pass
    bool io_pass = false;
};

nlohmann::json to_json(const RunResult& result);

struct Limits {
    std::int64_t time_limit_ms = 1000;
    std::int64_t memory_limit_kb = 262144;
    int runs_per_test = 30;
};

// sum(per_test_times) * 47 / n_tests. Throws Error when the list is empty
// or its length differs from n_tests.
double scale_time(const std::vector<double>& per_test_times, std::size_t n_tests);

// Judge comparison: trailing whitespace on each line and trailing blank
// lines are ignored, everything else must match exactly.
bool outputs_match(std::string_view actual, std::string_view expected);

struct Candidate {
    std::string sample_id;
    std::string source;
};

// Runs each candidate on every test. Each test runs limits.runs_per_test
// times unless its first run fails; the reported time is the median wall
// time. Every run gets a fresh working directory. Work is spread over
// `jobs` threads and merged by (candidate, test, run) index.
// Throws InfraError when the executor fails.
std::vector<RunResult> run_candidates(const Executor& executor, const std::vector<Candidate>& candidates,
                                      const std::vector<IoTest>& tests, const Limits& limits, unsigned jobs = 1);

RunResult run_candidate(const Executor& executor, const std::string& sample_id, std::string_view source,
                        const std::vector<IoTest>& tests, const Limits& limits, unsigned jobs = 1);

// Measures every sample of `corpus` that has no scaled time, using its
// problem's hidden tests (public ones when there are none) and limits.
// Samples that fail a test, or whose problem has no tests, are removed
// and logged. Returns the number of samples timed.
std::size_t time_samples(Corpus& corpus, const Executor& executor, int runs_per_test, unsigned jobs = 1,
                         std::vector<std::string>* log = nullptr);

}  // namespace codeeff
