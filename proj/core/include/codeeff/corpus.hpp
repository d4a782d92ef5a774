#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "codeeff/error.hpp"

namespace codeeff {

// Which of the three dataset layouts a file follows.
//   aceob: pair records (problem embedded) plus alternates
//   ori:   flat sample records plus problem records
//   npi:   sample records carrying time and NPI only
enum class Schema { aceob, ori, npi };

std::string_view to_string(Schema schema);
std::optional<Schema> parse_schema(std::string_view name);

struct IoTest {
    std::string input;
    std::string expected_output;

    bool operator==(const IoTest&) const = default;
};

struct EfficiencyProfile {
    double t_min_ms = 0;
    double t_med_ms = 0;
    double t_max_ms = 0;

    bool operator==(const EfficiencyProfile&) const = default;
};

struct Problem {
    std::string id;
    std::string statement;
    std::string input_format;
    std::string output_format;
    std::vector<IoTest> public_tests;
    std::vector<IoTest> hidden_tests;
    int difficulty = 0;
    std::set<std::string> tags;
    std::int64_t time_limit_ms = 1000;
    std::int64_t memory_limit_kb = 262144;
    std::optional<EfficiencyProfile> profile;
    std::vector<std::string> source_urls;
    // Fields this library does not model, kept verbatim.
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const Problem&) const = default;
};

enum class Origin { human, generated };

struct CodeSample {
    std::string id;
    std::string problem_id;
    std::string source;
    std::int64_t token_count = 0;
    std::optional<double> measured_time_ms;
    std::optional<double> scaled_time_ms;
    std::optional<std::int64_t> peak_memory_kb;
    std::optional<double> npi;
    Origin origin = Origin::human;
    std::optional<bool> compile_ok;
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const CodeSample&) const = default;
};

struct CodePair {
    std::string problem_id;
    CodeSample inefficient;
    CodeSample efficient;
    std::vector<CodeSample> alternates;
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const CodePair&) const = default;
};

struct Corpus {
    Schema schema = Schema::aceob;
    std::map<std::string, Problem> problems;  // keyed by id
    std::vector<CodeSample> samples;
    std::vector<CodePair> pairs;

    const Problem* find_problem(std::string_view id) const;
    bool operator==(const Corpus&) const = default;
};

struct Violation {
    std::string record_id;
    std::string field;
    std::string rule;
};

// Number of lexical tokens; falls back to whitespace-separated words when
// the source does not tokenize.
std::int64_t count_tokens(std::string_view source);

// Reads line-delimited JSON. Blank lines are skipped. An optional first
// "manifest" record must name the same schema. Throws ParseError for bad
// JSON and SchemaError for type or invariant violations.
Corpus load_dataset(const std::filesystem::path& path, Schema schema);
Corpus read_dataset(std::istream& in, Schema schema);

// One record per line. Problems referenced by a pair are embedded in the
// pair record; other problems get their own record. Throws Error when the
// path is not writable.
void save_dataset(const Corpus& corpus, const std::filesystem::path& path);
void write_dataset(const Corpus& corpus, std::ostream& out);

// Every invariant violation; never throws.
std::vector<Violation> validate(const Corpus& corpus);

nlohmann::json to_json(const Problem& problem);
nlohmann::json to_json(const CodeSample& sample);
nlohmann::json to_json(const CodePair& pair);
nlohmann::json to_json(const EfficiencyProfile& profile);
Problem problem_from_json(const nlohmann::json& j);
CodeSample sample_from_json(const nlohmann::json& j);
CodePair pair_from_json(const nlohmann::json& j);

}  // namespace codeeff
