#include "codeeff/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "codeeff/error.hpp"

namespace codeeff {

using nlohmann::json;

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error("spearman: inputs differ in length");
    if (x.size() < 3) throw Error("spearman: needs at least 3 points");
    for (double v : x)
        if (!std::isfinite(v)) throw Error("spearman: non-finite value");
    for (double v : y)
        if (!std::isfinite(v)) throw Error("spearman: non-finite value");
    std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
    const auto n = static_cast<double>(x.size());
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) throw Error("spearman: constant input, correlation undefined");

    SpearmanResult r;
    r.n = x.size();
    // Identical rank vectors give exactly +-1 rather than a rounded ratio.
    if (rx == ry) r.rho = 1.0;
    else r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    if (std::abs(r.rho) == 1.0) {
        r.p = 0.0;
        return r;
    }
    double df = n - 2;
    double t = r.rho * std::sqrt(df / (1 - r.rho * r.rho));
    boost::math::students_t dist(df);
    r.p = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    if (r.p <= 0) r.p = std::numeric_limits<double>::denorm_min();
    r.p = std::min(r.p, 1.0);
    return r;
}

double rmse(const std::vector<PredictionRecord>& records) {
    if (records.empty()) throw Error("rmse: no records");
    double sum = 0;
    for (const PredictionRecord& r : records) sum += (r.actual - r.predicted) * (r.actual - r.predicted);
    return std::sqrt(sum / static_cast<double>(records.size()));
}

namespace {

// Either a single JSON array or one JSON value per line.
std::vector<json> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::size_t first = text.find_first_not_of(" \t\r\n");
    std::vector<json> out;
    if (first != std::string::npos && text[first] == '[') {
        try {
            json arr = json::parse(text);
            for (json& e : arr) out.push_back(std::move(e));
        } catch (const json::parse_error& e) {
            throw ParseError(path.string() + ": " + e.what(), 0);
        }
        return out;
    }
    std::istringstream lines(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(lines, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ParseError(path.string() + " line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
    }
    return out;
}

double number_field(const json& j, const char* key, const std::string& id) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw SchemaError(id, key, "expected a number");
    return it->get<double>();
}

std::string id_field(const json& j) {
    if (!j.is_object()) throw SchemaError("<record>", "", "expected a JSON object");
    auto it = j.find("sample_id");
    if (it == j.end() || !it->is_string()) throw SchemaError("<record>", "sample_id", "expected a string");
    return it->get<std::string>();
}

}  // namespace

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
    std::vector<PredictionRecord> out;
    for (const json& j : read_records(path)) {
        PredictionRecord r;
        r.sample_id = id_field(j);
        r.predicted = number_field(j, "predicted", r.sample_id);
        r.actual = number_field(j, "actual", r.sample_id);
        std::string q = j.value("quantity", std::string("time_ms"));
        if (q == "time_ms") r.quantity = Quantity::time_ms;
        else if (q == "npi") r.quantity = Quantity::npi;
        else throw SchemaError(r.sample_id, "quantity", "expected 'time_ms' or 'npi'");
        if (r.quantity == Quantity::time_ms && r.actual < 0)
            throw SchemaError(r.sample_id, "actual", "time must be non-negative");
        if (r.quantity == Quantity::npi && (r.actual < 0 || r.actual > 100))
            throw SchemaError(r.sample_id, "actual", "npi must lie in [0, 100]");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ScoredSample> load_scores(const std::filesystem::path& path) {
    std::vector<ScoredSample> out;
    for (const json& j : read_records(path)) {
        ScoredSample s;
        s.sample_id = id_field(j);
        auto pid = j.find("problem_id");
        if (pid == j.end() || !pid->is_string()) throw SchemaError(s.sample_id, "problem_id", "expected a string");
        s.problem_id = pid->get<std::string>();
        auto pass = j.find("io_pass");
        if (pass == j.end() || !pass->is_boolean()) throw SchemaError(s.sample_id, "io_pass", "expected a boolean");
        s.io_pass = pass->get<bool>();
        s.npi = number_field(j, "npi", s.sample_id);
        s.ioccb = number_field(j, "ioccb", s.sample_id);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<DifficultyBucket> default_buckets() {
    return {{"Introductory", 0, 0}, {"Interview", 1, 3}, {"Competition", 4, 18}};
}

std::vector<DifficultyBucket> parse_buckets(const std::string& spec) {
    std::vector<DifficultyBucket> out;
    std::istringstream parts(spec);
    for (std::string part; std::getline(parts, part, ',');) {
        std::size_t colon = part.find(':');
        if (colon == std::string::npos) throw ParseError("bucket '" + part + "' needs the form Name:lo-hi", 0);
        DifficultyBucket b;
        b.name = part.substr(0, colon);
        std::string range = part.substr(colon + 1);
        std::size_t dash = range.find('-');
        try {
            b.lo = std::stoi(range.substr(0, dash));
            b.hi = dash == std::string::npos ? b.lo : std::stoi(range.substr(dash + 1));
        } catch (const std::exception&) {
            throw ParseError("bucket '" + part + "' has a bad range", 0);
        }
        if (b.name.empty() || b.lo > b.hi) throw ParseError("bucket '" + part + "' is malformed", 0);
        out.push_back(std::move(b));
    }
    if (out.empty()) throw ParseError("no difficulty buckets given", 0);
    return out;
}

std::vector<EvalReport> grouped_report(const std::vector<ScoredSample>& samples, const Corpus& corpus,
                                       const std::vector<DifficultyBucket>& buckets) {
    struct Acc {
        std::size_t n = 0, passed = 0;
        double npi = 0, ioccb = 0;
        void add(const ScoredSample& s) {
            ++n;
            passed += s.io_pass ? 1 : 0;
            npi += s.npi;
            ioccb += s.ioccb;
        }
    };
    std::vector<Acc> by_bucket(buckets.size());
    std::map<std::string, Acc> by_tag;
    for (const ScoredSample& s : samples) {
        const Problem* p = corpus.find_problem(s.problem_id);
        if (!p) throw SchemaError(s.sample_id, "problem_id", "unknown problem '" + s.problem_id + "'");
        for (std::size_t b = 0; b < buckets.size(); ++b)
            if (p->difficulty >= buckets[b].lo && p->difficulty <= buckets[b].hi) by_bucket[b].add(s);
        for (const std::string& tag : p->tags) by_tag[tag].add(s);
    }
    auto row = [](std::string type, std::string group, const Acc& a) {
        auto n = static_cast<double>(a.n);
        return EvalReport{std::move(type), std::move(group), a.n, 100.0 * static_cast<double>(a.passed) / n,
                          a.npi / n, a.ioccb / n};
    };
    std::vector<EvalReport> out;
    for (std::size_t b = 0; b < buckets.size(); ++b)
        if (by_bucket[b].n > 0) out.push_back(row("difficulty", buckets[b].name, by_bucket[b]));
    for (const auto& [tag, acc] : by_tag) out.push_back(row("tag", tag, acc));
    return out;
}

std::string report_csv(const std::vector<EvalReport>& rows) {
    std::string out = "group_type,group,n,io_pass_pct,mean_npi,mean_ioccb\n";
    auto quoted = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    char buf[128];
    for (const EvalReport& r : rows) {
        std::snprintf(buf, sizeof buf, ",%zu,%.6f,%.6f,%.6f\n", r.n, r.io_pass_pct, r.mean_npi, r.mean_ioccb);
        out += quoted(r.group_type) + "," + quoted(r.group) + buf;
    }
    return out;
}

}  // namespace codeeff
