#include <doctest.h>

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>

#include <nlohmann/json.hpp>

#include "codeeff/executor.hpp"
#include "codeeff/pynorm.hpp"
#include "codeeff/runner.hpp"
#include "../support.hpp"

using namespace codeeff;
using testsupport::fixture;

namespace {

// Interprets the program text instead of running it:
//   "#fake echo"   stdout = input
//   "#fake wall"   walls cycle 10, 20, 30 over successive calls with the same input
//   "#fake status=<s>"
class FakeExecutor : public Executor {
public:
    mutable std::atomic<int> calls{0};
    mutable std::mutex mu;
    mutable std::map<std::string, int> per_input;

    ShimReport execute(const std::filesystem::path& program, const std::filesystem::path& input, std::int64_t time_ms,
                       std::int64_t, const std::filesystem::path&) const override {
        ++calls;
        std::string src = testsupport::slurp(program);
        int n;
        {
            std::lock_guard<std::mutex> lock(mu);
            n = per_input[testsupport::slurp(input)]++;
        }
        ShimReport r;
        r.wall_ms = 5;
        r.cpu_ms = 4;
        r.max_rss_kb = 100;
        if (src.find("#fake echo") != std::string::npos || src.find("#fake wall") != std::string::npos)
            r.stdout_text = testsupport::slurp(input);
        if (src.find("#fake wall") != std::string::npos) r.wall_ms = 10.0 * (n % 3 + 1);
        if (auto p = src.find("#fake status="); p != std::string::npos) {
            r.status = src.substr(p + 13, src.find('\n', p) - p - 13);
            if (r.status == "timeout") r.wall_ms = static_cast<double>(time_ms);
            r.stderr_tail = "Traceback: boom";
        }
        return r;
    }
};

const std::vector<IoTest> k_tests = {{"1\n", "1\n"}, {"2\n", "2\n"}, {"3\n", "3\n"}};

}  // namespace

TEST_CASE("scale_time: linear in test count") {
    CHECK(scale_time(std::vector<double>(47, 10.0), 47) == doctest::Approx(470));
    CHECK(scale_time({10}, 1) == doctest::Approx(470));
    CHECK(scale_time(std::vector<double>(10, 10.0), 10) == doctest::Approx(470));
    CHECK_THROWS_AS(scale_time({}, 0), Error);
    CHECK_THROWS_AS(scale_time({1, 2}, 3), Error);
}

TEST_CASE("outputs_match: judge comparison") {
    CHECK(outputs_match("1\n", "1\n"));
    CHECK(outputs_match("1   \n2\t\n\n\n", "1\n2"));
    CHECK(outputs_match("a b\n", "a b"));
    CHECK_FALSE(outputs_match("a  b\n", "a b\n"));
    CHECK_FALSE(outputs_match("1\n\n2\n", "1\n2\n"));
    CHECK_FALSE(outputs_match(" 1\n", "1\n"));
}

TEST_CASE("run_candidate: passing program and median wall time") {
    FakeExecutor ex;
    Limits lim;
    lim.runs_per_test = 3;
    RunResult r = run_candidate(ex, "c", "#fake wall\n", k_tests, lim);
    CHECK(r.io_pass);
    CHECK(r.passed == 3);
    CHECK(ex.calls == 9);
    for (const TestResult& t : r.per_test) {
        CHECK(t.status == TestStatus::pass);
        CHECK(t.runs == 3);
        CHECK(t.median_wall_ms == 20);
    }
    CHECK(*r.scaled_time_ms == doctest::Approx(20.0 * 3 * 47 / 3));
}

TEST_CASE("run_candidate: failures short-circuit and carry status") {
    FakeExecutor ex;
    Limits lim;
    lim.runs_per_test = 30;
    RunResult wrong = run_candidate(ex, "w", "#fake status=ok\nprint(0)\n", k_tests, lim);
    CHECK_FALSE(wrong.io_pass);
    CHECK_FALSE(wrong.scaled_time_ms.has_value());
    CHECK(wrong.per_test[0].status == TestStatus::wrong_answer);
    CHECK(wrong.per_test[0].runs == 1);
    CHECK(ex.calls == 3);

    CHECK(run_candidate(ex, "t", "#fake status=timeout\n", k_tests, lim).per_test[1].status == TestStatus::timeout);
    RunResult oom = run_candidate(ex, "m", "#fake status=oom\n", k_tests, lim);
    CHECK(oom.per_test[0].status == TestStatus::runtime_error);
    CHECK(oom.per_test[0].note == "out of memory");
    RunResult rte = run_candidate(ex, "r", "#fake status=runtime_error\n", k_tests, lim);
    CHECK(rte.per_test[2].note.find("boom") != std::string::npos);
}

TEST_CASE("run_candidate: compile errors run nothing") {
    FakeExecutor ex;
    RunResult r = run_candidate(ex, "bad", "def f(:\n", k_tests, Limits{});
    CHECK(ex.calls == 0);
    CHECK(r.passed == 0);
    CHECK(r.total == 3);
    for (const TestResult& t : r.per_test) {
        CHECK(t.status == TestStatus::compile_error);
        CHECK(t.runs == 0);
    }
}

TEST_CASE("run_candidates: results independent of job count") {
    FakeExecutor ex;
    std::vector<Candidate> cands = {{"a", "#fake echo\n"}, {"b", "#fake status=ok\n"}, {"c", "x = (\n"}};
    Limits lim;
    lim.runs_per_test = 4;
    auto one = run_candidates(ex, cands, k_tests, lim, 1);
    auto four = run_candidates(ex, cands, k_tests, lim, 4);
    REQUIRE(one.size() == 3);
    CHECK(to_json(one[0]) == to_json(four[0]));
    CHECK(to_json(one[1]) == to_json(four[1]));
    CHECK(to_json(one[2]) == to_json(four[2]));
    CHECK(one[0].io_pass);
    CHECK_FALSE(one[1].io_pass);
}

TEST_CASE("to_json: run result fields") {
    FakeExecutor ex;
    Limits lim;
    lim.runs_per_test = 1;
    auto j = to_json(run_candidate(ex, "a", "#fake echo\n", k_tests, lim));
    CHECK(j.at("sample_id") == "a");
    CHECK(j.at("io_pass") == true);
    CHECK(j.at("per_test").size() == 3);
    CHECK(j.at("per_test")[0].at("status") == "pass");
    CHECK(j.contains("scaled_time_ms"));
}

TEST_CASE("parse_shim_report") {
    auto r = parse_shim_report(R"({"status":"ok","wall_ms":3.5,"cpu_ms":3,"max_rss_kb":10,"stdout":"1\n"})");
    CHECK(r.status == "ok");
    CHECK(r.wall_ms == 3.5);
    CHECK(r.stdout_text == "1\n");
    CHECK_THROWS_AS(parse_shim_report("nope"), InfraError);
    CHECK_THROWS_AS(parse_shim_report(R"({"status":"exploded","wall_ms":1,"cpu_ms":1,"max_rss_kb":1})"), InfraError);
    CHECK_THROWS_AS(parse_shim_report(R"({"status":"ok","wall_ms":"fast"})"), InfraError);
    CHECK(parse_shim_report(to_json(r).dump()).stdout_text == "1\n");
}

TEST_CASE("sha256_digest") {
    CHECK(sha256_digest("abc") == "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("ShimExecutor: canned reports from the stub shim") {
    ShimExecutor shim({"python3", fixture("shim/stub_shim.py").string()});
    Limits lim;
    lim.runs_per_test = 2;

    RunResult echo = run_candidate(shim, "e", "# report: {\"wall_ms\": 7}\n# echo\n", k_tests, lim);
    CHECK(echo.io_pass);
    CHECK(echo.per_test[0].median_wall_ms == 7);
    CHECK(*echo.scaled_time_ms == doctest::Approx(7.0 * 47));

    RunResult digest = run_candidate(shim, "d", "# echo\n# digest\n", k_tests, lim);
    CHECK(digest.io_pass);

    RunResult tle = run_candidate(shim, "t", "# report: {\"status\": \"timeout\"}\n", k_tests, lim);
    CHECK(tle.per_test[0].status == TestStatus::timeout);
    CHECK(tle.per_test[0].median_wall_ms >= lim.time_limit_ms);

    CHECK_THROWS_AS(run_candidate(shim, "g", "# garbage\n", k_tests, lim), InfraError);
    CHECK_THROWS_AS(run_candidate(shim, "s", "# silent\n", k_tests, lim), InfraError);

    ShimExecutor missing({"/no/such/shim"});
    CHECK_THROWS_AS(run_candidate(missing, "x", "# echo\n", k_tests, lim), InfraError);
}

TEST_CASE("DirectExecutor: real processes") {
    DirectExecutor ex;
    ScratchDir dir;
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir.path() / name) << text;
        return dir.path() / name;
    };
    auto empty = write("in.txt", "");

    SUBCASE("prints") {
        auto r = ex.execute(write("p.py", "print(1)\n"), empty, 2000, 262144, dir.path());
        CHECK(r.status == "ok");
        CHECK(r.stdout_text == "1\n");
        CHECK(r.max_rss_kb > 0);
    }
    SUBCASE("timeout") {
        auto r = ex.execute(write("loop.py", "while True:\n    pass\n"), empty, 500, 262144, dir.path());
        CHECK(r.status == "timeout");
        CHECK(r.wall_ms >= 500);
        CHECK(r.wall_ms < 500 + 1000);
    }
    SUBCASE("runtime error keeps the traceback tail") {
        auto r = ex.execute(write("err.py", "raise ValueError('bad value')\n"), empty, 2000, 262144, dir.path());
        CHECK(r.status == "runtime_error");
        CHECK(r.stderr_tail.find("bad value") != std::string::npos);
    }
    SUBCASE("memory cap") {
        auto r = ex.execute(write("mem.py", "x = bytearray(400 * 1024 * 1024)\nprint(len(x))\n"), empty, 5000,
                            200 * 1024, dir.path());
        CHECK(r.status == "oom");
    }
    SUBCASE("compile check uses the interpreter") {
        CHECK(ex.compiles("print(1)\n"));
        std::string diag;
        CHECK_FALSE(ex.compiles("def f(:\n", &diag));
        CHECK_FALSE(diag.empty());
    }
    SUBCASE("each run gets a fresh directory") {
        std::string src =
            "import os\nif os.path.exists('marker'):\n    raise SystemExit(3)\nopen('marker', 'w').write('x')\n"
            "print(input())\n";
        Limits lim;
        lim.runs_per_test = 3;
        lim.time_limit_ms = 5000;
        RunResult r = run_candidate(ex, "iso", src, k_tests, lim, 2);
        CHECK(r.io_pass);
    }
}

TEST_CASE("normalized mini-corpus programs keep their outputs") {
    DirectExecutor ex;
    Limits lim;
    lim.runs_per_test = 1;
    lim.time_limit_ms = 10000;
    std::ifstream in(fixture("mini/mini.jsonl"));
    std::map<std::string, std::vector<IoTest>> tests;
    for (std::string line; std::getline(in, line);) {
        auto j = nlohmann::json::parse(line);
        if (j.at("kind") != "problem") continue;
        for (const auto& t : j.at("hidden_tests")) tests[j.at("id")].push_back({t.at("input"), t.at("expected_output")});
    }
    for (const auto& f : testsupport::fixture_files("mini", ".py")) {
        std::string stem = f.stem().string();
        std::string pid = stem.substr(0, stem.rfind('_'));
        std::string norm = pynorm::normalize(testsupport::slurp(f)).source;
        RunResult r = run_candidate(ex, stem, norm, tests.at(pid), lim);
        INFO(stem);
        CHECK(r.io_pass);
    }
}

TEST_CASE("time_samples: fills times and drops failures") {
    FakeExecutor ex;
    Corpus c;
    c.schema = Schema::ori;
    Problem p;
    p.id = "p";
    p.hidden_tests = k_tests;
    c.problems["p"] = p;
    Problem bare;
    bare.id = "bare";
    c.problems["bare"] = bare;
    auto add = [&](const std::string& id, const std::string& pid, const std::string& src) {
        CodeSample s;
        s.id = id;
        s.problem_id = pid;
        s.source = src;
        c.samples.push_back(s);
    };
    add("good", "p", "#fake echo\n");
    add("wrong", "p", "#fake status=ok\n");
    add("untested", "bare", "#fake echo\n");
    add("pre", "p", "#fake echo\n");
    c.samples.back().scaled_time_ms = 1;
    std::vector<std::string> log;
    CHECK(time_samples(c, ex, 2, 1, &log) == 1);
    REQUIRE(c.samples.size() == 2);
    CHECK(c.samples[0].id == "good");
    CHECK(*c.samples[0].scaled_time_ms == doctest::Approx(5.0 * 47));
    CHECK(*c.samples[1].scaled_time_ms == 1);
    CHECK(log.size() == 2);
}
