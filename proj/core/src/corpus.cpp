#include "codeeff/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "codeeff/language_data.hpp"
#include "codeeff/pynorm/lexer.hpp"

namespace codeeff {

using nlohmann::json;

std::string_view to_string(Schema schema) {
    switch (schema) {
        case Schema::aceob: return "aceob";
        case Schema::ori: return "ori";
        case Schema::npi: return "npi";
    }
    return "aceob";
}

std::optional<Schema> parse_schema(std::string_view name) {
    if (name == "aceob") return Schema::aceob;
    if (name == "ori") return Schema::ori;
    if (name == "npi") return Schema::npi;
    return std::nullopt;
}

const Problem* Corpus::find_problem(std::string_view id) const {
    auto it = problems.find(std::string(id));
    return it == problems.end() ? nullptr : &it->second;
}

std::int64_t count_tokens(std::string_view source) {
    try {
        return static_cast<std::int64_t>(pynorm::tokenize(source).size());
    } catch (const pynorm::LexError&) {
        std::istringstream words{std::string(source)};
        std::int64_t n = 0;
        for (std::string w; words >> w;) ++n;
        return n;
    }
}

// ---------------------------------------------------------------------------
// JSON conversion

namespace {

// Reads typed fields out of a record and remembers which keys were used so
// the rest can be kept as `extra`.
class Reader {
public:
    Reader(const json& j, std::string what) : j_(j), what_(std::move(what)) {
        if (!j_.is_object()) throw SchemaError(what_, "", "record is not a JSON object");
        if (auto it = j_.find("id"); it != j_.end() && it->is_string()) id_ = it->get<std::string>();
    }

    const std::string& id() const { return id_.empty() ? what_ : id_; }

    const json* find(const char* key) {
        used_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return nullptr;
        return &*it;
    }

    const json& need(const char* key) {
        const json* v = find(key);
        if (!v) throw SchemaError(id(), key, "missing required field");
        return *v;
    }

    std::string text(const char* key, bool required) {
        const json* v = required ? &need(key) : find(key);
        if (!v) return {};
        if (!v->is_string()) throw SchemaError(id(), key, "expected a string");
        return v->get<std::string>();
    }

    std::int64_t integer(const char* key) {
        const json& v = need(key);
        return as_integer(v, key);
    }

    std::optional<std::int64_t> opt_integer(const char* key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        return as_integer(*v, key);
    }

    std::optional<double> opt_real(const char* key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_number()) throw SchemaError(id(), key, "expected a number");
        return v->get<double>();
    }

    double real(const char* key) {
        auto v = opt_real(key);
        if (!v) throw SchemaError(id(), key, "missing required field");
        return *v;
    }

    std::optional<bool> opt_bool(const char* key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_boolean()) throw SchemaError(id(), key, "expected a boolean");
        return v->get<bool>();
    }

    std::vector<std::string> strings(const char* key) {
        std::vector<std::string> out;
        const json* v = find(key);
        if (!v) return out;
        if (!v->is_array()) throw SchemaError(id(), key, "expected an array of strings");
        for (const json& e : *v) {
            if (!e.is_string()) throw SchemaError(id(), key, "expected an array of strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    std::vector<IoTest> tests(const char* key) {
        std::vector<IoTest> out;
        const json* v = find(key);
        if (!v) return out;
        if (!v->is_array()) throw SchemaError(id(), key, "expected an array of tests");
        for (const json& e : *v) {
            auto in = e.find("input");
            auto exp = e.find("expected_output");
            if (!e.is_object() || in == e.end() || exp == e.end() || !in->is_string() || !exp->is_string())
                throw SchemaError(id(), key, "each test needs string 'input' and 'expected_output'");
            out.push_back({in->get<std::string>(), exp->get<std::string>()});
        }
        return out;
    }

    json rest() const {
        json out = json::object();
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.contains(it.key())) out[it.key()] = it.value();
        return out;
    }

private:
    std::int64_t as_integer(const json& v, const char* key) const {
        if (v.is_number_integer()) return v.get<std::int64_t>();
        if (v.is_number_float()) {
            double d = v.get<double>();
            if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
        }
        throw SchemaError(id(), key, "expected an integer");
    }

    const json& j_;
    std::string what_;
    std::string id_;
    std::set<std::string, std::less<>> used_;
};

json tests_to_json(const std::vector<IoTest>& tests) {
    json arr = json::array();
    for (const IoTest& t : tests) arr.push_back({{"input", t.input}, {"expected_output", t.expected_output}});
    return arr;
}

void merge_extra(json& out, const json& extra) {
    for (auto it = extra.begin(); it != extra.end(); ++it)
        if (!out.contains(it.key())) out[it.key()] = it.value();
}

}  // namespace

json to_json(const EfficiencyProfile& p) {
    return {{"t_min_ms", p.t_min_ms}, {"t_med_ms", p.t_med_ms}, {"t_max_ms", p.t_max_ms}};
}

json to_json(const Problem& p) {
    json j = json::object();
    j["id"] = p.id;
    j["statement"] = p.statement;
    j["input_format"] = p.input_format;
    j["output_format"] = p.output_format;
    j["public_tests"] = tests_to_json(p.public_tests);
    j["hidden_tests"] = tests_to_json(p.hidden_tests);
    j["difficulty"] = p.difficulty;
    j["tags"] = json(std::vector<std::string>(p.tags.begin(), p.tags.end()));
    j["time_limit_ms"] = p.time_limit_ms;
    j["memory_limit_kb"] = p.memory_limit_kb;
    if (p.profile) j["profile"] = to_json(*p.profile);
    if (!p.source_urls.empty()) j["source_urls"] = p.source_urls;
    merge_extra(j, p.extra);
    return j;
}

json to_json(const CodeSample& s) {
    json j = json::object();
    j["id"] = s.id;
    j["problem_id"] = s.problem_id;
    j["source"] = s.source;
    j["token_count"] = s.token_count;
    if (s.measured_time_ms) j["measured_time_ms"] = *s.measured_time_ms;
    if (s.scaled_time_ms) j["scaled_time_ms"] = *s.scaled_time_ms;
    if (s.peak_memory_kb) j["peak_memory_kb"] = *s.peak_memory_kb;
    if (s.npi) j["npi"] = *s.npi;
    j["origin"] = s.origin == Origin::human ? "human" : "generated";
    if (s.compile_ok) j["compile_ok"] = *s.compile_ok;
    merge_extra(j, s.extra);
    return j;
}

json to_json(const CodePair& p) {
    json j = json::object();
    j["problem_id"] = p.problem_id;
    j["inefficient"] = to_json(p.inefficient);
    j["efficient"] = to_json(p.efficient);
    json alts = json::array();
    for (const CodeSample& a : p.alternates) alts.push_back(to_json(a));
    j["alternates"] = std::move(alts);
    merge_extra(j, p.extra);
    return j;
}

Problem problem_from_json(const json& j) {
    Reader r(j, "<problem>");
    Problem p;
    p.id = r.text("id", true);
    p.statement = r.text("statement", false);
    p.input_format = r.text("input_format", false);
    p.output_format = r.text("output_format", false);
    p.public_tests = r.tests("public_tests");
    p.hidden_tests = r.tests("hidden_tests");
    p.difficulty = static_cast<int>(r.integer("difficulty"));
    for (std::string& t : r.strings("tags")) p.tags.insert(std::move(t));
    p.time_limit_ms = r.integer("time_limit_ms");
    p.memory_limit_kb = r.integer("memory_limit_kb");
    if (const json* prof = r.find("profile")) {
        Reader pr(*prof, p.id);
        p.profile = EfficiencyProfile{pr.real("t_min_ms"), pr.real("t_med_ms"), pr.real("t_max_ms")};
    }
    p.source_urls = r.strings("source_urls");
    p.extra = r.rest();
    return p;
}

CodeSample sample_from_json(const json& j) {
    Reader r(j, "<sample>");
    CodeSample s;
    s.id = r.text("id", true);
    s.problem_id = r.text("problem_id", true);
    s.source = r.text("source", true);
    auto tokens = r.opt_integer("token_count");
    s.token_count = tokens ? *tokens : count_tokens(s.source);
    s.measured_time_ms = r.opt_real("measured_time_ms");
    s.scaled_time_ms = r.opt_real("scaled_time_ms");
    s.peak_memory_kb = r.opt_integer("peak_memory_kb");
    s.npi = r.opt_real("npi");
    std::string origin = r.text("origin", false);
    if (origin.empty() || origin == "human") s.origin = Origin::human;
    else if (origin == "generated") s.origin = Origin::generated;
    else throw SchemaError(s.id, "origin", "expected 'human' or 'generated'");
    s.compile_ok = r.opt_bool("compile_ok");
    s.extra = r.rest();
    return s;
}

CodePair pair_from_json(const json& j) {
    Reader r(j, "<pair>");
    CodePair p;
    p.problem_id = r.text("problem_id", true);
    p.inefficient = sample_from_json(r.need("inefficient"));
    p.efficient = sample_from_json(r.need("efficient"));
    if (const json* alts = r.find("alternates")) {
        if (!alts->is_array()) throw SchemaError(p.problem_id, "alternates", "expected an array");
        for (const json& a : *alts) p.alternates.push_back(sample_from_json(a));
    }
    p.extra = r.rest();
    p.extra.erase("kind");
    p.extra.erase("problem");
    return p;
}

// ---------------------------------------------------------------------------
// validation

namespace {

int max_difficulty(Schema schema) { return schema == Schema::aceob ? 18 : 27; }

void check_profile(const std::string& id, const EfficiencyProfile& p, std::vector<Violation>& out) {
    if (!(p.t_min_ms > 0 && p.t_med_ms > 0 && p.t_max_ms > 0))
        out.push_back({id, "profile", "profile times must be strictly positive"});
    if (!(p.t_min_ms <= p.t_med_ms && p.t_med_ms <= p.t_max_ms))
        out.push_back({id, "profile", "profile must satisfy t_min_ms <= t_med_ms <= t_max_ms"});
}

void check_sample(const Corpus& c, const CodeSample& s, std::vector<Violation>& out) {
    if (s.id.empty()) out.push_back({s.id, "id", "sample id must be non-empty"});
    if (s.token_count < 0) out.push_back({s.id, "token_count", "token_count must be non-negative"});
    try {
        auto n = static_cast<std::int64_t>(pynorm::tokenize(s.source).size());
        if (n != s.token_count)
            out.push_back({s.id, "token_count",
                           "token_count " + std::to_string(s.token_count) + " != tokenizer length " +
                               std::to_string(n)});
    } catch (const pynorm::LexError&) {
    }
    auto positive = [&](const std::optional<double>& v, const char* field) {
        if (v && !(*v > 0)) out.push_back({s.id, field, std::string(field) + " must be positive"});
    };
    positive(s.measured_time_ms, "measured_time_ms");
    positive(s.scaled_time_ms, "scaled_time_ms");
    if (s.peak_memory_kb && *s.peak_memory_kb <= 0)
        out.push_back({s.id, "peak_memory_kb", "peak_memory_kb must be positive"});
    if (s.npi && !(*s.npi >= 0 && *s.npi <= 100))
        out.push_back({s.id, "npi", "npi must lie in [0, 100]"});
    if (c.schema == Schema::npi) {
        if (!s.scaled_time_ms && !s.measured_time_ms)
            out.push_back({s.id, "scaled_time_ms", "npi schema requires a time"});
        if (!s.npi) out.push_back({s.id, "npi", "npi schema requires npi"});
    } else if (!c.problems.empty() && !c.find_problem(s.problem_id)) {
        out.push_back({s.id, "problem_id", "unknown problem '" + s.problem_id + "'"});
    }
}

}  // namespace

std::vector<Violation> validate(const Corpus& c) {
    std::vector<Violation> out;
    const auto& vocab = lang::tag_vocabulary();
    for (const auto& [key, p] : c.problems) {
        if (p.id.empty() || p.id != key) out.push_back({p.id, "id", "problem id must be non-empty and unique"});
        int hi = max_difficulty(c.schema);
        if (p.difficulty < 0 || p.difficulty > hi)
            out.push_back({p.id, "difficulty", "difficulty " + std::to_string(p.difficulty) +
                                                   " outside [0, " + std::to_string(hi) + "]"});
        for (const std::string& t : p.tags)
            if (!vocab.contains(t)) out.push_back({p.id, "tags", "unknown tag '" + t + "'"});
        if (c.schema == Schema::aceob && p.tags.empty())
            out.push_back({p.id, "tags", "aceob problems need at least one tag"});
        if (p.time_limit_ms <= 0) out.push_back({p.id, "time_limit_ms", "time_limit_ms must be positive"});
        if (p.memory_limit_kb <= 0)
            out.push_back({p.id, "memory_limit_kb", "memory_limit_kb must be positive"});
        if (p.profile) check_profile(p.id, *p.profile, out);
        else if (c.schema == Schema::aceob) out.push_back({p.id, "profile", "aceob problems need a profile"});
    }
    for (const CodeSample& s : c.samples) check_sample(c, s, out);
    if (!c.pairs.empty() && c.schema != Schema::aceob)
        out.push_back({c.pairs.front().problem_id, "kind", "pair records require the aceob schema"});
    for (const CodePair& p : c.pairs) {
        if (!c.find_problem(p.problem_id))
            out.push_back({p.problem_id, "problem_id", "pair refers to unknown problem"});
        for (const CodeSample* s : {&p.inefficient, &p.efficient}) {
            check_sample(c, *s, out);
            if (s->problem_id != p.problem_id)
                out.push_back({s->id, "problem_id", "pair member belongs to another problem"});
        }
        for (const CodeSample& a : p.alternates) {
            check_sample(c, a, out);
            if (a.problem_id != p.problem_id)
                out.push_back({a.id, "problem_id", "alternate belongs to another problem"});
        }
        if (!p.efficient.scaled_time_ms || !p.inefficient.scaled_time_ms)
            out.push_back({p.efficient.id, "scaled_time_ms", "pair members need scaled times"});
        else if (!(*p.efficient.scaled_time_ms < *p.inefficient.scaled_time_ms))
            out.push_back({p.efficient.id, "scaled_time_ms", "efficient code must be strictly faster"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// reading and writing

Corpus read_dataset(std::istream& in, Schema schema) {
    Corpus c;
    c.schema = schema;
    std::string line;
    std::size_t line_no = 0;
    bool first_record = true;
    auto add_problem = [&](Problem p) {
        auto [it, inserted] = c.problems.emplace(p.id, p);
        if (!inserted && !(it->second == p))
            throw SchemaError(p.id, "id", "conflicting definitions of the same problem");
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
        if (!j.is_object()) throw ParseError("line " + std::to_string(line_no) + ": expected a JSON object", line_no);
        std::string kind = j.value("kind", std::string());
        if (kind.empty()) {
            // Records without a discriminator follow the schema's natural kind.
            kind = schema == Schema::aceob ? "pair" : "sample";
        }
        if (kind == "manifest") {
            if (!first_record) throw SchemaError("manifest", "kind", "manifest must be the first record");
            std::string name = j.value("schema", std::string());
            if (name != to_string(schema))
                throw SchemaError("manifest", "schema",
                                  "file declares schema '" + name + "', expected '" + std::string(to_string(schema)) + "'");
            first_record = false;
            continue;
        }
        first_record = false;
        json body = j;
        body.erase("kind");
        if (kind == "problem") {
            add_problem(problem_from_json(body));
        } else if (kind == "sample") {
            c.samples.push_back(sample_from_json(body));
        } else if (kind == "pair") {
            if (auto it = body.find("problem"); it != body.end()) add_problem(problem_from_json(*it));
            c.pairs.push_back(pair_from_json(body));
        } else {
            throw SchemaError("line " + std::to_string(line_no), "kind", "unknown record kind '" + kind + "'");
        }
    }
    auto violations = validate(c);
    if (!violations.empty()) {
        const Violation& v = violations.front();
        throw SchemaError(v.record_id, v.field, v.rule);
    }
    return c;
}

Corpus load_dataset(const std::filesystem::path& path, Schema schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset: " + path.string());
    return read_dataset(in, schema);
}

void write_dataset(const Corpus& c, std::ostream& out) {
    std::set<std::string> embedded;
    for (const CodePair& p : c.pairs) embedded.insert(p.problem_id);
    for (const auto& [id, p] : c.problems) {
        if (embedded.contains(id)) continue;
        json j = to_json(p);
        j["kind"] = "problem";
        out << j.dump() << '\n';
    }
    for (const CodeSample& s : c.samples) {
        json j = to_json(s);
        j["kind"] = "sample";
        out << j.dump() << '\n';
    }
    for (const CodePair& p : c.pairs) {
        json j = to_json(p);
        j["kind"] = "pair";
        if (const Problem* prob = c.find_problem(p.problem_id)) j["problem"] = to_json(*prob);
        out << j.dump() << '\n';
    }
}

void save_dataset(const Corpus& c, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write dataset: " + path.string());
    write_dataset(c, out);
    out.flush();
    if (!out) throw Error("failed writing dataset: " + path.string());
}

}  // namespace codeeff
