#include <doctest.h>

#ifdef CODEEFF_HAVE_CLI

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "codeeff/corpus.hpp"
#include "codeeff/executor.hpp"
#include "../support.hpp"

using namespace codeeff;
using testsupport::fixture;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "codeeff");
    std::ostringstream out, err;
    int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fx(const char* rel) { return fixture(rel).string(); }

std::string stub_shim() { return "python3 " + fx("shim/stub_shim.py"); }

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    Outcome bad = invoke({"score", "npi", "--time", "fast", "--profile", "1,2,3"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
    CHECK(invoke({"score", "npi", "--time", "5", "--profile", "1,2"}).code == 2);
    CHECK(invoke({"normalize", "/no/such/file.py"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("cli: operation errors exit 1, warnings do not") {
    ScratchDir dir;
    std::ofstream(dir.path() / "bad.py") << "def f(:\n";
    // uncompilable source passes through unchanged with a warning
    Outcome r = invoke({"--json", "normalize", (dir.path() / "bad.py").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(nlohmann::json::parse(r.out).at("compile_ok") == false);
    std::ofstream(dir.path() / "one.jsonl") << R"({"sample_id":"a","predicted":1,"actual":2})" << "\n";
    Outcome few = invoke({"eval", "spearman", (dir.path() / "one.jsonl").string()});
    CHECK(few.code == 1);
    CHECK(few.err.find("error") != std::string::npos);
    std::ofstream(dir.path() / "broken.jsonl") << "{\"kind\":\n";
    CHECK(invoke({"stats", "breakpoints", "--difficulty", "1", (dir.path() / "broken.jsonl").string()}).code == 1);
}

TEST_CASE("cli: score npi") {
    CHECK(invoke({"score", "npi", "--time", "200", "--profile", "100,200,400"}).out == "50.0\n");
    CHECK(invoke({"score", "npi", "--time", "300", "--profile", "100,200,400"}).out == "25.0\n");
    Outcome j = invoke({"--json", "score", "npi", "--time", "50", "--profile", "100,200,400"});
    CHECK(j.code == 0);
    CHECK(j.out == "{\"npi\":100.0}\n");
    // global flags are accepted after the subcommand too
    CHECK(invoke({"score", "npi", "--time", "50", "--profile", "100,200,400", "--json"}).out == j.out);
}

TEST_CASE("cli: score codebleu and ioccb") {
    std::string f = fx("normalize/p00.py");
    Outcome self = invoke({"score", "codebleu", f, f});
    REQUIRE(self.code == 0);
    auto j = nlohmann::json::parse(self.out);
    CHECK(j.at("combined") == doctest::Approx(100));
    CHECK(std::count(self.out.begin(), self.out.end(), '\n') == 1);

    Outcome io = invoke({"score", "ioccb", f, f, "--alt", fx("normalize/p01.py")});
    REQUIRE(io.code == 0);
    CHECK(nlohmann::json::parse(io.out).contains("score"));
}

TEST_CASE("cli: normalize") {
    std::string f = fx("normalize/p03.py");
    Outcome plain = invoke({"normalize", f});
    REQUIRE(plain.code == 0);
    ScratchDir dir;
    std::ofstream(dir.path() / "n.py") << plain.out;
    CHECK(invoke({"normalize", (dir.path() / "n.py").string()}).out == plain.out);
    auto j = nlohmann::json::parse(invoke({"--json", "normalize", f}).out);
    CHECK(j.at("source") == plain.out);
    CHECK(j.at("compile_ok") == true);
    CHECK(j.at("rename_map").is_object());
}

TEST_CASE("cli: eval rmse and spearman") {
    CHECK(invoke({"eval", "rmse", fx("eval/rmse.jsonl")}).out == "{\"n\":2,\"rmse\":3.5355339059327378}\n");
    auto sp = nlohmann::json::parse(invoke({"eval", "spearman", fx("eval/ranked.json")}).out);
    // one swapped adjacent pair in five: rho = 1 - 6*2/120
    CHECK(sp.at("rho") == doctest::Approx(0.9).epsilon(1e-12));
    // frozen from an independent t-distribution routine, df = 3
    CHECK(sp.at("p") == doctest::Approx(0.0373860735).epsilon(1e-8));
    CHECK(sp.at("n") == 5);
}

TEST_CASE("cli: report csv") {
    const std::string golden =
        "group_type,group,n,io_pass_pct,mean_npi,mean_ioccb\n"
        "difficulty,Introductory,1,0.000000,0.000000,22.500000\n"
        "difficulty,Interview,2,100.000000,67.500000,50.500000\n"
        "tag,brute force,1,100.000000,80.000000,40.000000\n"
        "tag,data structures,1,100.000000,55.000000,61.000000\n"
        "tag,dp,1,0.000000,0.000000,22.500000\n"
        "tag,hashing,1,100.000000,80.000000,40.000000\n"
        "tag,sortings,1,100.000000,55.000000,61.000000\n";
    Outcome r = invoke({"report", fx("eval/scores.jsonl"), fx("mini/mini.jsonl"), "--schema", "ori"});
    REQUIRE(r.code == 0);
    CHECK(r.out == golden);

    ScratchDir dir;
    auto csv = dir.path() / "r.csv";
    CHECK(invoke({"report", fx("eval/scores.jsonl"), fx("mini/mini.jsonl"), "--schema", "ori", "-o", csv.string()}).code ==
          0);
    CHECK(testsupport::slurp(csv) == golden);

    Outcome custom = invoke({"report", fx("eval/scores.jsonl"), fx("mini/mini.jsonl"), "--schema", "ori", "--buckets",
                          "Easy:0-1,Hard:2-18"});
    CHECK(custom.out.find("difficulty,Easy,2,") != std::string::npos);
    CHECK(custom.out.find("difficulty,Hard,1,") != std::string::npos);
}

TEST_CASE("cli: filter with an external estimator") {
    std::vector<std::string> args = {"filter",    fx("filter"),  "--problem",
                                     "tri",       "--dataset",   fx("filter/problem.jsonl"),
                                     "--estimator", "external:" + fx("filter/times.json")};
    Outcome r = invoke(args);
    REQUIRE(r.code == 0);
    CHECK(r.out.substr(0, r.out.find('\n')) == fx("filter/b_formula.py"));

    args.insert(args.begin(), "--json");
    auto j = nlohmann::json::parse(invoke(args).out);
    CHECK(j.at("chosen") == "b_formula");
    REQUIRE(j.at("ranked").size() == 3);
    // profile 100/200/400: 95 ms clamps to 100, 150 ms -> 75, 310 ms -> 22.5
    CHECK(j.at("ranked")[0].at("npi") == 100.0);
    CHECK(j.at("ranked")[1].at("npi") == 75.0);
    CHECK(j.at("ranked")[2].at("npi") == 22.5);

    CHECK(invoke({"filter", fx("filter"), "--problem", "tri", "--dataset", fx("filter/problem.jsonl"), "--estimator",
               "oracle"})
              .code == 2);
    CHECK(invoke({"filter", fx("filter"), "--problem", "nope", "--dataset", fx("filter/problem.jsonl"), "--estimator",
               "external:" + fx("filter/times.json")})
              .code == 1);
}

TEST_CASE("cli: stats breakpoints") {
    ScratchDir dir;
    Corpus c;
    c.schema = Schema::ori;
    Problem p;
    p.id = "p";
    p.difficulty = 4;
    p.tags = {"math"};
    c.problems["p"] = p;
    int i = 0;
    for (double t : {100.0, 200.0, 350.0, 450.0, 600.0}) {
        CodeSample s;
        s.id = "s" + std::to_string(i++);
        s.problem_id = "p";
        s.source = "print(" + std::to_string(i) + ")\n";
        s.token_count = count_tokens(s.source);
        s.scaled_time_ms = t;
        c.samples.push_back(s);
    }
    save_dataset(c, dir.path() / "d.jsonl");
    Outcome r = invoke({"stats", "breakpoints", "--difficulty", "4", (dir.path() / "d.jsonl").string()});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("difficulty") == 4);
    REQUIRE(j.at("breakpoints").size() == 6);
    CHECK(j.at("breakpoints")[0] == 100.0);
    CHECK(j.at("breakpoints")[1] == 200.0);
    CHECK(j.at("breakpoints")[5] == 600.0);
}

TEST_CASE("cli: run and build-pairs through the stub shim") {
    Outcome run = invoke({"--shim", stub_shim(), "run", fx("cli/quick.py"), "--problem", "echo", "--dataset",
                       fx("cli/echo.jsonl"), "--schema", "ori", "--runs", "3"});
    REQUIRE(run.code == 0);
    auto j = nlohmann::json::parse(run.out);
    CHECK(j.at("io_pass") == true);
    // two tests at 5 ms each, scaled to 47 tests
    CHECK(j.at("scaled_time_ms") == doctest::Approx(235));
    CHECK(j.at("per_test")[0].at("runs") == 3);

    ScratchDir dir;
    auto out = dir.path() / "pairs.jsonl";
    Outcome bp =
        invoke({"--shim", stub_shim(), "--json", "build-pairs", fx("cli/echo.jsonl"), "-o", out.string(), "--runs", "2"});
    REQUIRE(bp.code == 0);
    CHECK(nlohmann::json::parse(bp.out).at("pairs") == 1);
    Corpus pairs = load_dataset(out, Schema::aceob);
    REQUIRE(pairs.pairs.size() == 1);
    CHECK(pairs.pairs[0].efficient.id == "quick");
    CHECK(pairs.pairs[0].inefficient.id == "sluggish");
    CHECK(*pairs.pairs[0].efficient.scaled_time_ms == doctest::Approx(235));
    CHECK(*pairs.pairs[0].inefficient.scaled_time_ms == doctest::Approx(2350));
    CHECK(validate(pairs).empty());

    // a broken shim is an infrastructure failure
    CHECK(invoke({"--shim", "/no/such/shim", "run", fx("cli/quick.py"), "--problem", "echo", "--dataset",
               fx("cli/echo.jsonl"), "--schema", "ori"})
              .code == 1);
}

#endif
