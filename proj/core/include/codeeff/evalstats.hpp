#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "codeeff/corpus.hpp"

namespace codeeff {

struct SpearmanResult {
    double rho = 0;
    double p = 1;  // two-sided
    std::size_t n = 0;
};

// Ranks starting at 1; tied values share the mean of their ranks.
std::vector<double> average_ranks(const std::vector<double>& values);

// Rank correlation with a t-approximation p-value (n - 2 degrees of
// freedom). |rho| == 1 gives p = 0; a p-value that underflows is reported
// as the smallest positive double. Throws Error for unequal lengths,
// fewer than 3 points or a constant input.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

enum class Quantity { time_ms, npi };

struct PredictionRecord {
    std::string sample_id;
    double predicted = 0;
    double actual = 0;
    Quantity quantity = Quantity::time_ms;
};

// sqrt(mean((actual - predicted)^2)). Throws Error on an empty list.
double rmse(const std::vector<PredictionRecord>& records);

// JSON array or one JSON object per line, each with sample_id, predicted,
// actual and an optional quantity ("time_ms" or "npi").
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);

struct ScoredSample {
    std::string sample_id;
    std::string problem_id;
    bool io_pass = false;
    double npi = 0;
    double ioccb = 0;
};

// One JSON object per line (or a JSON array) with the ScoredSample fields.
std::vector<ScoredSample> load_scores(const std::filesystem::path& path);

struct DifficultyBucket {
    std::string name;
    int lo = 0;
    int hi = 0;  // inclusive
};

// Introductory 0, Interview 1-3, Competition 4-18.
std::vector<DifficultyBucket> default_buckets();

// Parses "Name:lo-hi,Name:lo-hi,..." (a single number means lo == hi).
std::vector<DifficultyBucket> parse_buckets(const std::string& spec);

struct EvalReport {
    std::string group_type;  // "difficulty" or "tag"
    std::string group;
    std::size_t n = 0;
    double io_pass_pct = 0;
    double mean_npi = 0;
    double mean_ioccb = 0;
};

// Difficulty rows in bucket order, then tag rows in tag order. A sample
// counts toward each of its problem's tags. Empty groups are omitted.
// Throws SchemaError for a sample whose problem is not in the corpus.
std::vector<EvalReport> grouped_report(const std::vector<ScoredSample>& samples, const Corpus& corpus,
                                       const std::vector<DifficultyBucket>& buckets = default_buckets());

// Header group_type,group,n,io_pass_pct,mean_npi,mean_ioccb; numbers with
// six decimals.
std::string report_csv(const std::vector<EvalReport>& rows);

}  // namespace codeeff
