#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "codeeff/corpus.hpp"
#include "codeeff/runner.hpp"

namespace codeeff {

struct Estimate {
    bool ok = true;
    double time_ms = 0;
    // Set by estimators that predict the index directly.
    std::optional<double> npi;
    std::string error;
};

// Predicts the run time of a candidate.
class TimeEstimator {
public:
    virtual ~TimeEstimator() = default;
    virtual Estimate estimate(const CodeSample& sample) const = 0;
};

// Measures the candidate with run_candidate. Fails when the candidate does
// not pass every test.
class MeasuredEstimator : public TimeEstimator {
public:
    MeasuredEstimator(const Executor& executor, std::vector<IoTest> tests, Limits limits, unsigned jobs = 1);
    Estimate estimate(const CodeSample& sample) const override;

private:
    const Executor& executor_;
    std::vector<IoTest> tests_;
    Limits limits_;
    unsigned jobs_;
};

// Looks predictions up in a table keyed by sample id. With `as_npi` the
// values are NPI predictions instead of times.
class TableEstimator : public TimeEstimator {
public:
    explicit TableEstimator(std::map<std::string, double> table, bool as_npi = false);
    // JSON object: sample_id -> value.
    static TableEstimator from_file(const std::filesystem::path& path, bool as_npi = false);
    Estimate estimate(const CodeSample& sample) const override;

private:
    std::map<std::string, double> table_;
    bool as_npi_;
};

class FunctionEstimator : public TimeEstimator {
public:
    explicit FunctionEstimator(std::function<Estimate(const CodeSample&)> fn) : fn_(std::move(fn)) {}
    Estimate estimate(const CodeSample& sample) const override { return fn_(sample); }

private:
    std::function<Estimate(const CodeSample&)> fn_;
};

struct RankedCandidate {
    std::size_t index = 0;  // position in the input
    std::string sample_id;
    std::optional<double> estimated_time_ms;
    double npi = 0;
    bool failed = false;
    std::string flag;
};

struct FilterResult {
    CodeSample chosen;
    std::size_t chosen_index = 0;
    std::vector<RankedCandidate> ranked;  // best first; failures last
};

// Picks the candidate with the highest NPI; ties go to the lower estimated
// time, then to input order. Candidates whose estimate fails are ranked
// last in input order. Throws Error on an empty candidate list.
FilterResult npi_filter(const std::vector<CodeSample>& candidates, const TimeEstimator& estimator,
                        const EfficiencyProfile& profile);

nlohmann::json to_json(const FilterResult& result);

}  // namespace codeeff
