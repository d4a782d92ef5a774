#include <doctest.h>

#include <fstream>

#include "codeeff/efficiency.hpp"
#include "codeeff/estimator.hpp"
#include "codeeff/executor.hpp"
#include "../support.hpp"

using namespace codeeff;

namespace {

std::vector<CodeSample> named(std::initializer_list<const char*> ids) {
    std::vector<CodeSample> out;
    for (const char* id : ids) {
        CodeSample s;
        s.id = id;
        s.problem_id = "p";
        out.push_back(s);
    }
    return out;
}

const EfficiencyProfile k_prof{100, 200, 400};

}  // namespace

TEST_CASE("npi_filter: picks the fastest by NPI") {
    TableEstimator est({{"a", 300}, {"b", 100}});
    auto r = npi_filter(named({"a", "b"}), est, k_prof);
    CHECK(r.chosen.id == "b");
    CHECK(r.chosen_index == 1);
    REQUIRE(r.ranked.size() == 2);
    CHECK(r.ranked[0].npi == 100);
    CHECK(r.ranked[1].npi == doctest::Approx(25));
}

TEST_CASE("npi_filter: single candidate and ties") {
    TableEstimator one({{"only", 999}});
    CHECK(npi_filter(named({"only"}), one, k_prof).chosen.id == "only");
    TableEstimator tie({{"x", 150}, {"y", 150}});
    CHECK(npi_filter(named({"x", "y"}), tie, k_prof).chosen.id == "x");
    // both clamp to NPI 100: lower time wins
    TableEstimator clamp({{"x", 90}, {"y", 60}});
    CHECK(npi_filter(named({"x", "y"}), clamp, k_prof).chosen.id == "y");
    CHECK_THROWS_AS(npi_filter({}, one, k_prof), Error);
}

TEST_CASE("npi_filter: failed estimates rank last") {
    TableEstimator est({{"b", 390}});
    auto r = npi_filter(named({"a", "b", "c"}), est, k_prof);
    CHECK(r.chosen.id == "b");
    CHECK(r.ranked[1].failed);
    CHECK(r.ranked[1].sample_id == "a");
    CHECK(r.ranked[2].sample_id == "c");
    // all failing: the first candidate is returned, flagged
    TableEstimator none({});
    auto all = npi_filter(named({"a", "b"}), none, k_prof);
    CHECK(all.chosen.id == "a");
    CHECK(all.ranked[0].failed);
}

TEST_CASE("npi_filter: mean of chosen dominates a random pick") {
    std::vector<double> grid = {80, 120, 200, 260, 500};
    for (double a : grid)
        for (double b : grid)
            for (double c : grid) {
                TableEstimator est({{"a", a}, {"b", b}, {"c", c}});
                auto r = npi_filter(named({"a", "b", "c"}), est, k_prof);
                double mean = (npi(a, k_prof) + npi(b, k_prof) + npi(c, k_prof)) / 3;
                CHECK(r.ranked[0].npi >= mean);
            }
}

TEST_CASE("TableEstimator: NPI predictions and files") {
    TableEstimator as_npi({{"a", 30}, {"b", 130}}, true);
    auto r = npi_filter(named({"a", "b"}), as_npi, k_prof);
    CHECK(r.chosen.id == "b");
    CHECK(r.ranked[0].npi == 100);

    ScratchDir dir;
    auto path = dir.path() / "pred.json";
    std::ofstream(path) << R"({"a": 120.5, "b": 90})";
    auto est = TableEstimator::from_file(path);
    CHECK(est.estimate(named({"a"})[0]).time_ms == 120.5);
    CHECK_FALSE(est.estimate(named({"zzz"})[0]).ok);
    std::ofstream(dir.path() / "bad.json") << R"({"a": "fast"})";
    CHECK_THROWS(TableEstimator::from_file(dir.path() / "bad.json"));
}

TEST_CASE("to_json: filter result") {
    TableEstimator est({{"a", 300}, {"b", 100}});
    auto j = to_json(npi_filter(named({"a", "b"}), est, k_prof));
    CHECK(j.at("chosen") == "b");
    CHECK(j.at("ranked").size() == 2);
    CHECK(j.at("ranked")[0].at("sample_id") == "b");
}
