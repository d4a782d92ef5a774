#include "codeeff/runner.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include "codeeff/error.hpp"
#include "codeeff/parallel.hpp"

namespace codeeff {

namespace fs = std::filesystem;

std::string_view to_string(TestStatus status) {
    switch (status) {
        case TestStatus::pass: return "pass";
        case TestStatus::wrong_answer: return "wrong_answer";
        case TestStatus::timeout: return "timeout";
        case TestStatus::runtime_error: return "runtime_error";
        case TestStatus::compile_error: return "compile_error";
    }
    return "runtime_error";
}

nlohmann::json to_json(const RunResult& r) {
    nlohmann::json tests = nlohmann::json::array();
    for (const TestResult& t : r.per_test) {
        nlohmann::json j = {{"status", to_string(t.status)},
                            {"median_wall_ms", t.median_wall_ms},
                            {"median_cpu_ms", t.median_cpu_ms},
                            {"max_rss_kb", t.max_rss_kb},
                            {"runs", t.runs}};
        if (!t.note.empty()) j["note"] = t.note;
        tests.push_back(std::move(j));
    }
    nlohmann::json j = {{"sample_id", r.sample_id}, {"per_test", std::move(tests)}, {"passed", r.passed},
                        {"total", r.total},         {"io_pass", r.io_pass}};
    if (r.scaled_time_ms) j["scaled_time_ms"] = *r.scaled_time_ms;
    return j;
}

double scale_time(const std::vector<double>& per_test_times, std::size_t n_tests) {
    if (per_test_times.empty() || per_test_times.size() != n_tests)
        throw Error("scale_time needs one time per test and at least one test");
    double sum = std::accumulate(per_test_times.begin(), per_test_times.end(), 0.0);
    return sum * k_reference_test_count / static_cast<double>(n_tests);
}

namespace {

std::string canonical_output(std::string_view s) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t end = s.find('\n', pos);
        if (end == std::string_view::npos) end = s.size();
        std::string_view line = s.substr(pos, end - pos);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r' ||
                                 line.back() == '\f' || line.back() == '\v'))
            line.remove_suffix(1);
        lines.push_back(line);
        pos = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

bool report_matches(const ShimReport& r, const std::string& expected) {
    if (!r.stdout_digest) return outputs_match(r.stdout_text, expected);
    std::string canon = canonical_output(expected);
    return *r.stdout_digest == sha256_digest(expected) || *r.stdout_digest == sha256_digest(canon) ||
           *r.stdout_digest == sha256_digest(canon + "\n");
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

struct RunSlot {
    ShimReport report;
    bool passed = false;
    bool done = false;
};

struct Task {
    std::size_t candidate;
    std::size_t test;
    std::size_t run;
};

TestStatus status_of(const ShimReport& r, bool output_ok) {
    if (r.status == "timeout") return TestStatus::timeout;
    if (r.status == "runtime_error" || r.status == "oom") return TestStatus::runtime_error;
    return output_ok ? TestStatus::pass : TestStatus::wrong_answer;
}

}  // namespace

bool outputs_match(std::string_view actual, std::string_view expected) {
    return canonical_output(actual) == canonical_output(expected);
}

std::vector<RunResult> run_candidates(const Executor& executor, const std::vector<Candidate>& candidates,
                                      const std::vector<IoTest>& tests, const Limits& limits, unsigned jobs) {
    if (tests.empty()) throw Error("run_candidate needs at least one test");
    if (limits.time_limit_ms <= 0 || limits.memory_limit_kb <= 0 || limits.runs_per_test <= 0)
        throw Error("limits must be positive");

    ScratchDir root("codeeff-run");
    for (std::size_t t = 0; t < tests.size(); ++t) {
        std::ofstream out(root.path() / ("input_" + std::to_string(t) + ".txt"), std::ios::binary);
        out << tests[t].input;
    }

    std::size_t nc = candidates.size(), nt = tests.size();
    auto runs = static_cast<std::size_t>(limits.runs_per_test);
    std::vector<char> compiled(nc, 0);
    std::vector<std::string> diagnostics(nc);
    parallel_for(nc, jobs, [&](std::size_t c) {
        compiled[c] = executor.compiles(candidates[c].source, &diagnostics[c]) ? 1 : 0;
        if (!compiled[c]) return;
        fs::create_directories(root.path() / ("c" + std::to_string(c)));
        std::ofstream out(root.path() / ("c" + std::to_string(c)) / "program.py", std::ios::binary);
        out << candidates[c].source;
    });

    std::vector<RunSlot> slots(nc * nt * runs);
    auto slot = [&](const Task& k) -> RunSlot& { return slots[(k.candidate * nt + k.test) * runs + k.run]; };
    auto execute = [&](const Task& k) {
        fs::path dir = root.path() / ("run_" + std::to_string(k.candidate) + "_" + std::to_string(k.test) + "_" +
                                      std::to_string(k.run));
        fs::create_directories(dir);
        RunSlot& s = slot(k);
        s.report = executor.execute(root.path() / ("c" + std::to_string(k.candidate)) / "program.py",
                                    root.path() / ("input_" + std::to_string(k.test) + ".txt"), limits.time_limit_ms,
                                    limits.memory_limit_kb, dir);
        s.passed = s.report.status == "ok" && report_matches(s.report, tests[k.test].expected_output);
        s.done = true;
        std::error_code ec;
        fs::remove_all(dir, ec);
    };

    // Phase 1: one run per (candidate, test). Phase 2: the remaining runs of
    // every test whose first run passed.
    std::vector<Task> first;
    for (std::size_t c = 0; c < nc; ++c)
        if (compiled[c])
            for (std::size_t t = 0; t < nt; ++t) first.push_back({c, t, 0});
    parallel_for(first.size(), jobs, [&](std::size_t i) { execute(first[i]); });
    std::vector<Task> rest;
    for (const Task& k : first)
        if (slot(k).passed)
            for (std::size_t r = 1; r < runs; ++r) rest.push_back({k.candidate, k.test, r});
    parallel_for(rest.size(), jobs, [&](std::size_t i) { execute(rest[i]); });

    std::vector<RunResult> results(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        RunResult& res = results[c];
        res.sample_id = candidates[c].sample_id;
        res.total = static_cast<int>(nt);
        std::vector<double> medians;
        for (std::size_t t = 0; t < nt; ++t) {
            TestResult tr;
            if (!compiled[c]) {
                tr.status = TestStatus::compile_error;
                tr.note = diagnostics[c];
                res.per_test.push_back(std::move(tr));
                continue;
            }
            std::vector<double> wall, cpu;
            for (std::size_t r = 0; r < runs; ++r) {
                const RunSlot& s = slot({c, t, r});
                if (!s.done) continue;
                ++tr.runs;
                wall.push_back(s.report.wall_ms);
                cpu.push_back(s.report.cpu_ms);
                tr.max_rss_kb = std::max(tr.max_rss_kb, s.report.max_rss_kb);
                TestStatus st = status_of(s.report, s.passed);
                if (st != TestStatus::pass && tr.status == TestStatus::pass) {
                    tr.status = st;
                    if (s.report.status == "oom") tr.note = "out of memory";
                    else if (st == TestStatus::runtime_error) tr.note = s.report.stderr_tail;
                    if (r > 0) tr.note = "run " + std::to_string(r + 1) + " failed after a passing first run. " + tr.note;
                }
            }
            tr.median_wall_ms = median(wall);
            tr.median_cpu_ms = median(cpu);
            if (tr.status == TestStatus::pass) ++res.passed;
            medians.push_back(tr.median_wall_ms);
            res.per_test.push_back(std::move(tr));
        }
        res.io_pass = res.passed == res.total;
        if (res.io_pass) res.scaled_time_ms = scale_time(medians, nt);
    }
    return results;
}

RunResult run_candidate(const Executor& executor, const std::string& sample_id, std::string_view source,
                        const std::vector<IoTest>& tests, const Limits& limits, unsigned jobs) {
    return run_candidates(executor, {Candidate{sample_id, std::string(source)}}, tests, limits, jobs).front();
}

std::size_t time_samples(Corpus& corpus, const Executor& executor, int runs_per_test, unsigned jobs,
                         std::vector<std::string>* log) {
    auto note = [&](std::string line) {
        if (log) log->push_back(std::move(line));
    };
    std::map<std::string, std::vector<std::size_t>> pending;
    for (std::size_t i = 0; i < corpus.samples.size(); ++i)
        if (!corpus.samples[i].scaled_time_ms) pending[corpus.samples[i].problem_id].push_back(i);

    std::vector<bool> drop(corpus.samples.size(), false);
    std::size_t timed = 0;
    for (const auto& [pid, idx] : pending) {
        const Problem* p = corpus.find_problem(pid);
        if (!p) throw SchemaError(corpus.samples[idx.front()].id, "problem_id", "unknown problem '" + pid + "'");
        const std::vector<IoTest>& tests = p->hidden_tests.empty() ? p->public_tests : p->hidden_tests;
        if (tests.empty()) {
            for (std::size_t i : idx) drop[i] = true;
            note(pid + ": no tests to time " + std::to_string(idx.size()) + " sample(s); dropped");
            continue;
        }
        Limits lim;
        lim.time_limit_ms = p->time_limit_ms;
        lim.memory_limit_kb = p->memory_limit_kb;
        lim.runs_per_test = runs_per_test;
        std::vector<Candidate> cands;
        for (std::size_t i : idx) cands.push_back({corpus.samples[i].id, corpus.samples[i].source});
        std::vector<RunResult> results = run_candidates(executor, cands, tests, lim, jobs);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            CodeSample& s = corpus.samples[idx[k]];
            const RunResult& r = results[k];
            if (!r.io_pass) {
                drop[idx[k]] = true;
                note(pid + ": sample " + s.id + " passed " + std::to_string(r.passed) + " of " +
                     std::to_string(r.total) + " tests; dropped");
                continue;
            }
            s.scaled_time_ms = r.scaled_time_ms;
            std::int64_t rss = 0;
            for (const TestResult& t : r.per_test) rss = std::max(rss, t.max_rss_kb);
            s.peak_memory_kb = rss;
            ++timed;
        }
    }
    std::vector<CodeSample> kept;
    for (std::size_t i = 0; i < corpus.samples.size(); ++i)
        if (!drop[i]) kept.push_back(std::move(corpus.samples[i]));
    corpus.samples = std::move(kept);
    return timed;
}

}  // namespace codeeff
