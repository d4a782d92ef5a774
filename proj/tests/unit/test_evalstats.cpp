#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "codeeff/config.hpp"
#include "codeeff/evalstats.hpp"
#include "codeeff/executor.hpp"
#include "../support.hpp"

using namespace codeeff;

TEST_CASE("spearman: perfect and tied data") {
    CHECK(spearman({1, 2, 3}, {10, 20, 30}).rho == 1.0);
    CHECK(spearman({1, 2, 3}, {3, 2, 1}).rho == -1.0);
    CHECK(spearman({1, 2, 3}, {3, 2, 1}).p == 0.0);
    std::vector<double> x = {1, 2, 2, 3}, y = {1, 3, 2, 4};
    // ranks x: 1, 2.5, 2.5, 4; y: 1, 3, 2, 4
    double hand = 4.5 / std::sqrt(4.5 * 5.0);
    CHECK(spearman(x, y).rho == doctest::Approx(hand).epsilon(1e-12));
    CHECK(spearman(x, y).rho == doctest::Approx(testsupport::spearman_oracle(x, y)).epsilon(1e-12));
    CHECK(average_ranks({3, 1, 3, 2}) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("spearman: errors") {
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2}), Error);
    CHECK_THROWS_AS(spearman({1, 2, 3}, {1, 2}), Error);
    CHECK_THROWS_AS(spearman({1, 1, 1}, {1, 2, 3}), Error);
    CHECK_THROWS_AS(spearman({1, 2, NAN}, {1, 2, 3}), Error);
}

TEST_CASE("spearman: p-value matches the t approximation") {
    // n = 5, rho = 0.8: t = 0.8 * sqrt(3 / 0.36); two-sided p from t(3)
    std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 1, 4, 3, 5};
    auto r = spearman(x, y);
    CHECK(r.rho == doctest::Approx(0.8));
    CHECK(r.n == 5);
    // frozen from an independent t-distribution routine
    CHECK(r.p == doctest::Approx(0.1040880).epsilon(1e-6));
}

TEST_CASE("spearman: invariant under monotone transforms") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.1, 50);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(12), y(12), ex(12);
        for (int i = 0; i < 12; ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
            ex[i] = std::exp(x[i] / 10) - 7;
        }
        CHECK(spearman(ex, y).rho == doctest::Approx(spearman(x, y).rho).epsilon(1e-12));
        CHECK(spearman(x, x).rho == 1.0);
    }
}

TEST_CASE("rmse") {
    CHECK(rmse({{"a", 5, 5}, {"b", 1, 1}}) == 0);
    CHECK(rmse({{"a", 0, 3}, {"b", 0, 4}}) == doctest::Approx(3.5355339059327378).epsilon(1e-12));
    CHECK(rmse({{"a", 1, 1.5}}) > 0);
    CHECK_THROWS_AS(rmse({}), Error);
}

TEST_CASE("load_predictions: array and lines") {
    ScratchDir dir;
    std::ofstream(dir.path() / "a.json") << R"([{"sample_id":"x","predicted":1,"actual":2},)"
                                          << R"({"sample_id":"y","predicted":3,"actual":40,"quantity":"npi"}])";
    auto a = load_predictions(dir.path() / "a.json");
    REQUIRE(a.size() == 2);
    CHECK(a[1].quantity == Quantity::npi);
    std::ofstream(dir.path() / "b.jsonl") << R"({"sample_id":"x","predicted":1,"actual":2})" << "\n\n"
                                           << R"({"sample_id":"y","predicted":3,"actual":4})" << "\n";
    CHECK(load_predictions(dir.path() / "b.jsonl").size() == 2);
    std::ofstream(dir.path() / "c.jsonl") << R"({"sample_id":"x","predicted":1})" << "\n";
    CHECK_THROWS_AS(load_predictions(dir.path() / "c.jsonl"), SchemaError);
    std::ofstream(dir.path() / "d.jsonl") << R"({"sample_id":"x","predicted":1,"actual":120,"quantity":"npi"})";
    CHECK_THROWS_AS(load_predictions(dir.path() / "d.jsonl"), SchemaError);
}

namespace {

Corpus tagged_corpus() {
    Corpus c;
    c.schema = Schema::aceob;
    auto add = [&](const std::string& id, int difficulty, std::set<std::string> tags) {
        Problem p;
        p.id = id;
        p.difficulty = difficulty;
        p.tags = std::move(tags);
        c.problems[id] = p;
    };
    add("intro", 0, {"math"});
    add("mid", 2, {"math", "greedy"});
    add("hard", 9, {"graphs"});
    return c;
}

}  // namespace

TEST_CASE("grouped_report: buckets and tags") {
    Corpus c = tagged_corpus();
    auto only_intro = grouped_report({{"s", "intro", true, 75, 30}}, c);
    REQUIRE(only_intro.size() == 2);
    CHECK(only_intro[0].group == "Introductory");
    CHECK(only_intro[0].mean_npi == 75);
    CHECK(only_intro[1].group_type == "tag");

    auto rows = grouped_report({{"a", "intro", true, 80, 20}, {"b", "mid", false, 40, 60}, {"c", "hard", true, 10, 5}},
                               c);
    std::vector<std::string> names;
    for (const auto& r : rows) names.push_back(r.group);
    CHECK(names == std::vector<std::string>{"Introductory", "Interview", "Competition", "graphs", "greedy", "math"});
    const EvalReport& math = rows.back();
    CHECK(math.n == 2);
    CHECK(math.io_pass_pct == 50);
    CHECK(math.mean_npi == 60);
    CHECK(math.mean_ioccb == 40);
    CHECK_THROWS_AS(grouped_report({{"z", "ghost", true, 1, 1}}, c), SchemaError);
}

TEST_CASE("report_csv: golden output") {
    Corpus c = tagged_corpus();
    auto rows = grouped_report({{"a", "intro", true, 80, 20}, {"b", "mid", false, 40.5, 60}}, c);
    CHECK(report_csv(rows) ==
          "group_type,group,n,io_pass_pct,mean_npi,mean_ioccb\n"
          "difficulty,Introductory,1,100.000000,80.000000,20.000000\n"
          "difficulty,Interview,1,0.000000,40.500000,60.000000\n"
          "tag,greedy,1,0.000000,40.500000,60.000000\n"
          "tag,math,2,50.000000,60.250000,40.000000\n");
}

TEST_CASE("parse_buckets") {
    auto b = parse_buckets("Easy:0,Hard:1-18");
    REQUIRE(b.size() == 2);
    CHECK(b[0].lo == 0);
    CHECK(b[0].hi == 0);
    CHECK(b[1].hi == 18);
    CHECK_THROWS_AS(parse_buckets("Easy"), ParseError);
    CHECK_THROWS_AS(parse_buckets("Easy:3-1"), ParseError);
    CHECK_THROWS_AS(parse_buckets(""), ParseError);
}

TEST_CASE("Config: parsing and typed access") {
    auto c = Config::parse("# comment\n  a = 1.5 \n\nflag = true\nname=x y\n");
    CHECK(c.get_double("a", 0) == 1.5);
    CHECK(c.get_bool("flag", false));
    CHECK(*c.get("name") == "x y");
    CHECK(c.get_int("missing", 7) == 7);
    CHECK_THROWS_AS(c.get_int("a", 0), ParseError);
    CHECK_THROWS_AS(Config::parse("no equals sign\n"), ParseError);
    CHECK_THROWS_AS(c.require_known({"a", "flag"}), ParseError);
    CHECK_NOTHROW(c.require_known({"a", "flag", "name"}));
}
