#include "codeeff/ioccb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "codeeff/error.hpp"
#include "codeeff/pynorm.hpp"

namespace codeeff {

namespace {

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

IoccbResult ioccb(std::string_view generated, std::string_view ground_truth,
                  const std::vector<std::string>& alternates, const CodeBleuOptions& options) {
    if (ground_truth.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw Error("ioccb: empty reference set");

    struct Reference {
        std::string raw;
        std::string standardized;
    };
    std::vector<Reference> refs;
    std::set<std::string> seen;
    IoccbResult result;

    try {
        std::string std_truth = pynorm::standardize_identifiers(ground_truth).source;
        seen.insert(std_truth);
        refs.push_back({std::string(ground_truth), std::move(std_truth)});
    } catch (const pynorm::CompileError& e) {
        throw Error(std::string("ioccb: ground truth does not parse: ") + e.what());
    }
    for (std::size_t i = 0; i < alternates.size(); ++i) {
        try {
            std::string s = pynorm::standardize_identifiers(alternates[i]).source;
            if (!seen.insert(s).second) continue;
            refs.push_back({alternates[i], std::move(s)});
        } catch (const pynorm::CompileError&) {
            result.warnings.push_back("alternate " + std::to_string(i) + " does not parse; dropped");
        }
    }

    if (generated.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        result.o_scores.assign(refs.size(), 0.0);
        result.s_scores.assign(refs.size(), 0.0);
        result.warnings.push_back("generated code is empty");
        return result;
    }

    CodeFeatures gen = analyze(generated);
    for (const Reference& r : refs) result.o_scores.push_back(codebleu(gen, analyze(r.raw), options).combined);
    result.o_avg = mean(result.o_scores);

    std::string std_gen;
    try {
        std_gen = pynorm::standardize_identifiers(generated).source;
        result.normalization_applied = true;
    } catch (const pynorm::CompileError&) {
        result.warnings.push_back("generated code does not parse; normalization skipped");
    }

    if (!result.normalization_applied) {
        result.s_scores = result.o_scores;
        result.s_avg = result.o_avg;
        result.s_max = *std::max_element(result.o_scores.begin(), result.o_scores.end());
        result.score = result.s_max;
        return result;
    }

    CodeFeatures std_features = analyze(std_gen);
    for (const Reference& r : refs)
        result.s_scores.push_back(codebleu(std_features, analyze(r.standardized), options).combined);
    result.s_avg = mean(result.s_scores);
    result.s_max = *std::max_element(result.s_scores.begin(), result.s_scores.end());
    result.score = std::min(100.0, result.s_max + std::sqrt(std::max(0.0, result.s_avg - result.o_avg)));
    return result;
}

}  // namespace codeeff
