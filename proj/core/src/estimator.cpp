#include "codeeff/estimator.hpp"

#include <algorithm>
#include <fstream>

#include "codeeff/efficiency.hpp"
#include "codeeff/error.hpp"

namespace codeeff {

MeasuredEstimator::MeasuredEstimator(const Executor& executor, std::vector<IoTest> tests, Limits limits,
                                     unsigned jobs)
    : executor_(executor), tests_(std::move(tests)), limits_(limits), jobs_(jobs) {}

Estimate MeasuredEstimator::estimate(const CodeSample& sample) const {
    RunResult r = run_candidate(executor_, sample.id, sample.source, tests_, limits_, jobs_);
    Estimate e;
    if (!r.io_pass) {
        e.ok = false;
        e.error = "fails " + std::to_string(r.total - r.passed) + " of " + std::to_string(r.total) + " tests";
        return e;
    }
    e.time_ms = *r.scaled_time_ms;
    return e;
}

TableEstimator::TableEstimator(std::map<std::string, double> table, bool as_npi)
    : table_(std::move(table)), as_npi_(as_npi) {}

TableEstimator TableEstimator::from_file(const std::filesystem::path& path, bool as_npi) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read estimator file: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("estimator file " + path.string() + ": " + e.what(), 0);
    }
    if (!j.is_object()) throw Error("estimator file must hold a JSON object of sample_id -> number");
    std::map<std::string, double> table;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number()) throw SchemaError(it.key(), "predicted", "expected a number");
        table[it.key()] = it.value().get<double>();
    }
    return TableEstimator(std::move(table), as_npi);
}

Estimate TableEstimator::estimate(const CodeSample& sample) const {
    Estimate e;
    auto it = table_.find(sample.id);
    if (it == table_.end()) {
        e.ok = false;
        e.error = "no prediction for '" + sample.id + "'";
        return e;
    }
    if (as_npi_) {
        e.npi = std::clamp(it->second, 0.0, 100.0);
    } else if (!(it->second > 0)) {
        e.ok = false;
        e.error = "non-positive prediction for '" + sample.id + "'";
    } else {
        e.time_ms = it->second;
    }
    return e;
}

FilterResult npi_filter(const std::vector<CodeSample>& candidates, const TimeEstimator& estimator,
                        const EfficiencyProfile& profile) {
    if (candidates.empty()) throw Error("npi_filter needs at least one candidate");
    std::vector<RankedCandidate> ranked;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        RankedCandidate rc;
        rc.index = i;
        rc.sample_id = candidates[i].id;
        Estimate e;
        try {
            e = estimator.estimate(candidates[i]);
        } catch (const std::exception& ex) {
            e.ok = false;
            e.error = ex.what();
        }
        if (!e.ok) {
            rc.failed = true;
            rc.flag = "estimator failed: " + e.error;
        } else if (e.npi) {
            rc.npi = *e.npi;
        } else {
            rc.estimated_time_ms = e.time_ms;
            rc.npi = npi(e.time_ms, profile);
        }
        ranked.push_back(std::move(rc));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.failed != b.failed) return !a.failed;
        if (a.failed) return a.index < b.index;
        if (a.npi != b.npi) return a.npi > b.npi;
        double ta = a.estimated_time_ms.value_or(0), tb = b.estimated_time_ms.value_or(0);
        if (ta != tb) return ta < tb;
        return a.index < b.index;
    });
    FilterResult result;
    result.chosen_index = ranked.front().index;
    result.chosen = candidates[result.chosen_index];
    result.ranked = std::move(ranked);
    return result;
}

nlohmann::json to_json(const FilterResult& r) {
    nlohmann::json ranking = nlohmann::json::array();
    for (const RankedCandidate& c : r.ranked) {
        nlohmann::json j = {{"index", c.index}, {"sample_id", c.sample_id}, {"npi", c.npi}, {"failed", c.failed}};
        if (c.estimated_time_ms) j["estimated_time_ms"] = *c.estimated_time_ms;
        if (!c.flag.empty()) j["flag"] = c.flag;
        ranking.push_back(std::move(j));
    }
    return {{"chosen", r.chosen.id}, {"chosen_index", r.chosen_index}, {"ranked", std::move(ranking)}};
}

}  // namespace codeeff
