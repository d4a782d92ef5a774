#include <doctest.h>

#include <sstream>

#include "codeeff/corpus.hpp"

using namespace codeeff;

namespace {

const char* k_pair_line =
    R"({"kind":"pair","problem_id":"p1",)"
    R"("problem":{"id":"p1","statement":"add","difficulty":2,"tags":["math"],"time_limit_ms":1000,)"
    R"("memory_limit_kb":262144,"profile":{"t_min_ms":10,"t_med_ms":20,"t_max_ms":40},)"
    R"("hidden_tests":[{"input":"1 2\n","expected_output":"3\n"}],"judge":"cf"},)"
    R"("inefficient":{"id":"s1","problem_id":"p1","source":"print(sum(map(int, input().split())))\n","scaled_time_ms":30},)"
    R"("efficient":{"id":"s2","problem_id":"p1","source":"a, b = map(int, input().split())\nprint(a + b)\n","scaled_time_ms":12,"npi":90},)"
    R"("alternates":[]})";

Corpus read(const std::string& text, Schema s) {
    std::istringstream in(text);
    return read_dataset(in, s);
}

std::string write(const Corpus& c) {
    std::ostringstream out;
    write_dataset(c, out);
    return out.str();
}

}  // namespace

TEST_CASE("read_dataset: one pair record") {
    Corpus c = read(std::string(k_pair_line) + "\n", Schema::aceob);
    CHECK(c.pairs.size() == 1);
    CHECK(c.problems.size() == 1);
    const Problem& p = c.problems.at("p1");
    CHECK(p.difficulty == 2);
    CHECK(p.profile->t_med_ms == 20);
    CHECK(p.extra.at("judge") == "cf");
    // token counts are filled in when absent
    CHECK(c.pairs[0].efficient.token_count == count_tokens(c.pairs[0].efficient.source));
}

TEST_CASE("read_dataset: schema errors name the field") {
    std::string bad = k_pair_line;
    bad.replace(bad.find("\"difficulty\":2"), 14, "\"difficulty\":19");
    try {
        read(bad, Schema::aceob);
        FAIL("expected a schema error");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("difficulty") != std::string::npos);
    }
    std::string unordered = k_pair_line;
    unordered.replace(unordered.find("\"t_med_ms\":20"), 13, "\"t_med_ms\":5");
    CHECK_THROWS_AS(read(unordered, Schema::aceob), SchemaError);
    CHECK_THROWS_AS(read("{\"kind\":\"pair\"", Schema::aceob), ParseError);
    CHECK_THROWS_AS(read(R"({"kind":"manifest","schema":"ori"})", Schema::aceob), SchemaError);
}

TEST_CASE("read_dataset: parse errors carry the line") {
    try {
        read(std::string(k_pair_line) + "\n\nnot json\n", Schema::aceob);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("write_dataset: empty, single pair and omitted optionals") {
    CHECK(write(Corpus{}).empty());
    Corpus c = read(k_pair_line, Schema::aceob);
    std::string text = write(c);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(text.find("null") == std::string::npos);
    CHECK(text.find("measured_time_ms") == std::string::npos);
    CHECK(read(text, Schema::aceob) == c);
}

TEST_CASE("round trip: ori corpus with standalone problems") {
    Corpus c;
    c.schema = Schema::ori;
    for (int i = 0; i < 3; ++i) {
        Problem p;
        p.id = "q" + std::to_string(i);
        p.difficulty = 20 + i;
        p.tags = {"dp", "greedy"};
        p.public_tests = {{"1\n", "1\n"}};
        p.source_urls = {"https://example.org/" + p.id};
        c.problems[p.id] = p;
        CodeSample s;
        s.id = "s" + std::to_string(i);
        s.problem_id = p.id;
        s.source = "x = " + std::to_string(i) + "\nprint(x)\n";
        s.token_count = count_tokens(s.source);
        s.measured_time_ms = 10.5 + i;
        s.peak_memory_kb = 1000;
        s.origin = i == 1 ? Origin::generated : Origin::human;
        s.compile_ok = true;
        s.extra["memory_info"] = "12 MB";
        c.samples.push_back(s);
    }
    CHECK(validate(c).empty());
    CHECK(read(write(c), Schema::ori) == c);
}

TEST_CASE("validate: pair and sample invariants") {
    Corpus c = read(k_pair_line, Schema::aceob);
    CHECK(validate(c).empty());

    Corpus slow = c;
    slow.pairs[0].efficient.scaled_time_ms = 30;
    auto v = validate(slow);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "scaled_time_ms");
    CHECK(v[0].record_id.find("s2") != std::string::npos);

    Corpus bad_npi = c;
    bad_npi.pairs[0].efficient.npi = 120;
    CHECK(validate(bad_npi).size() == 1);

    Corpus bad_tag = c;
    bad_tag.problems.at("p1").tags.insert("astrology");
    bad_tag.pairs[0].efficient.token_count = 1;
    CHECK(validate(bad_tag).size() == 2);
}

TEST_CASE("validate: npi schema requires time and npi") {
    Corpus c;
    c.schema = Schema::npi;
    CodeSample s;
    s.id = "a";
    s.problem_id = "p";
    s.source = "print(2)\n";
    s.token_count = count_tokens(s.source);
    c.samples.push_back(s);
    CHECK(validate(c).size() == 2);
    c.samples[0].scaled_time_ms = 5;
    c.samples[0].npi = 40;
    CHECK(validate(c).empty());
}

TEST_CASE("save_dataset: unwritable path") {
    CHECK_THROWS_AS(save_dataset(Corpus{}, "/nonexistent-dir/x.jsonl"), Error);
}

TEST_CASE("parse_schema") {
    CHECK(parse_schema("aceob") == Schema::aceob);
    CHECK(parse_schema("npi") == Schema::npi);
    CHECK_FALSE(parse_schema("csv").has_value());
    CHECK(to_string(Schema::ori) == "ori");
}
