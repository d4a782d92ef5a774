#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "codeeff/clustering.hpp"
#include "codeeff/codebleu.hpp"
#include "codeeff/config.hpp"
#include "codeeff/corpus.hpp"
#include "codeeff/lccs.hpp"

namespace codeeff {

struct PairingConfig {
    double dedup_threshold = 0.99;
    std::int64_t abs_token_limit = 512;
    double rel_length_factor = 3.0;
    double cluster_scale = 1.0;  // alpha in k = round(alpha * sqrt(N))
    double efficiency_split_npi = 50.0;
    // Strip noise and canonicalize layout before deduplication; code that
    // does not compile is dropped.
    bool preprocess = true;
    int medoid_restarts = 8;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    CodeBleuOptions codebleu;
};

// Reads the PairingConfig keys from a key=value config; unknown keys are
// an error.
PairingConfig pairing_config_from(const Config& config);

// Greedy in input order: a sample is dropped when its similarity to an
// already retained sample of the same problem exceeds the threshold.
std::vector<CodeSample> dedup(const std::vector<CodeSample>& samples, double threshold);

// Drops samples above the absolute token limit, then, per problem, those
// longer than rel_length_factor times the mean length of what is left.
std::vector<CodeSample> length_filter(const std::vector<CodeSample>& samples, const PairingConfig& config);

// (efficient, inefficient) by NPI of the scaled time against the profile.
// Throws SchemaError naming a sample without scaled_time_ms.
std::pair<std::vector<CodeSample>, std::vector<CodeSample>> split_by_efficiency(
    const std::vector<CodeSample>& samples, const EfficiencyProfile& profile, double split_npi);

// max(1, round(alpha * sqrt(n))).
std::size_t cluster_count(std::size_t n, double alpha);

// Pairwise symmetric CodeBLEU between the standardized sources.
std::vector<std::vector<double>> similarity_matrix(const std::vector<CodeSample>& samples,
                                                   const CodeBleuOptions& options = {}, unsigned jobs = 1);

ClusterAssignment cluster(const std::vector<CodeSample>& samples, std::size_t k, const PairingConfig& config,
                          std::vector<std::string>* warnings = nullptr);

// Index of the member with the largest summed similarity to the others;
// ties go to the smaller sample id.
std::size_t representative(const std::vector<CodeSample>& members, const std::vector<std::vector<double>>& similarity);
const CodeSample& representative(const std::vector<CodeSample>& members, const CodeBleuOptions& options = {});

// Hungarian matching of inefficient to efficient codes maximizing the
// total symmetric CodeBLEU of the normalized sources. Each pair's
// alternates are the other efficient codes. Unmatched codes produce no pair.
std::vector<CodePair> match_pairs(const std::vector<CodeSample>& inefficient,
                                  const std::vector<CodeSample>& efficient, const CodeBleuOptions& options = {});

// The full per-problem pipeline over an ori corpus; returns an aceob corpus.
// Problems without a declared profile use one derived from their samples'
// scaled times. Each skipped problem or dropped sample adds a log line.
Corpus build_pairs(const Corpus& corpus, const PairingConfig& config, std::vector<std::string>* log = nullptr);

// All samples of an aceob corpus (pair members and alternates, each once)
// as an ori corpus.
Corpus flatten_pairs(const Corpus& corpus);

}  // namespace codeeff
