#include <doctest.h>

#include <algorithm>
#include <random>

#include "codeeff/ioccb.hpp"
#include "codeeff/pynorm.hpp"
#include "../rename.hpp"
#include "../support.hpp"

using namespace codeeff;

namespace {
const std::string k_truth = "n = int(input())\na = list(map(int, input().split()))\nprint(sum(a) - n)\n";
const std::string k_alt = "n = int(input())\ns = 0\nfor v in input().split():\n    s += int(v)\nprint(s - n)\n";
}  // namespace

TEST_CASE("ioccb: identical code") {
    auto r = ioccb(k_truth, k_truth, {});
    CHECK(r.o_scores.size() == 1);
    CHECK(r.o_scores[0] == doctest::Approx(100));
    CHECK(r.s_scores[0] == doctest::Approx(100));
    CHECK(r.score == doctest::Approx(100));
    CHECK(r.normalization_applied);
}

TEST_CASE("ioccb: renamed ground truth") {
    std::string gen = "m = int(input())\nb = list(map(int, input().split()))\nprint(sum(b) - m)\n";
    auto r = ioccb(gen, k_truth, {k_alt});
    double raw = codebleu(gen, k_truth).combined;
    CHECK(r.s_max == doctest::Approx(100));
    CHECK(r.score >= r.s_max);
    CHECK(r.s_max >= raw);
    CHECK(r.score <= 100);
}

TEST_CASE("ioccb: unparseable generated code skips normalization") {
    std::string gen = "n = int(input()\nprint(n\n";
    auto r = ioccb(gen, k_truth, {k_alt});
    CHECK_FALSE(r.normalization_applied);
    CHECK(r.s_scores == r.o_scores);
    CHECK(r.score == *std::max_element(r.o_scores.begin(), r.o_scores.end()));
}

TEST_CASE("ioccb: errors and degenerate inputs") {
    CHECK_THROWS_AS(ioccb("x = 1\n", "", {}), Error);
    CHECK_THROWS_AS(ioccb("x = 1\n", "def f(:", {}), Error);
    auto empty = ioccb("", k_truth, {});
    CHECK(empty.score == 0);
    auto dropped = ioccb(k_truth, k_truth, {"def g(:"});
    CHECK(dropped.o_scores.size() == 1);
    CHECK_FALSE(dropped.warnings.empty());
}

TEST_CASE("ioccb: duplicate references are ignored") {
    auto base = ioccb(k_alt, k_truth, {});
    auto dup = ioccb(k_alt, k_truth, {k_truth});
    CHECK(dup.score == doctest::Approx(base.score).epsilon(1e-12));
    // a renamed copy of the ground truth is the same reference after normalization
    std::string renamed = "q = int(input())\nz = list(map(int, input().split()))\nprint(sum(z) - q)\n";
    auto dup2 = ioccb(k_alt, k_truth, {renamed});
    CHECK(dup2.score == doctest::Approx(base.score).epsilon(1e-12));
}

TEST_CASE("ioccb: adding a reference never lowers s_max") {
    std::string gen = "n = int(input())\nprint(n * 2)\n";
    auto one = ioccb(gen, k_truth, {});
    auto two = ioccb(gen, k_truth, {k_alt});
    auto three = ioccb(gen, k_truth, {k_alt, "n = int(input())\nprint(n + n)\n"});
    CHECK(two.s_max >= one.s_max);
    CHECK(three.s_max >= two.s_max);
}

TEST_CASE("ioccb: s_scores invariant under renaming of the generated code") {
    std::mt19937_64 rng(4);
    auto files = testsupport::fixture_files("normalize", ".py");
    for (std::size_t i = 0; i + 1 < files.size(); i += 5) {
        std::string gen = testsupport::slurp(files[i]);
        std::string truth = testsupport::slurp(files[i + 1]);
        auto map = pynorm::standardize_identifiers(gen).rename_map;
        auto a = ioccb(gen, truth, {});
        auto b = ioccb(testsupport::random_rename(gen, map, rng), truth, {});
        REQUIRE(a.s_scores.size() == b.s_scores.size());
        for (std::size_t k = 0; k < a.s_scores.size(); ++k)
            CHECK(std::abs(a.s_scores[k] - b.s_scores[k]) <= 1e-9);
        CHECK(a.score >= 0);
        CHECK(a.score <= 100);
    }
}
