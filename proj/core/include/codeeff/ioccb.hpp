#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "codeeff/codebleu.hpp"

namespace codeeff {

struct IoccbResult {
    std::vector<double> o_scores;  // raw CodeBLEU against each reference
    std::vector<double> s_scores;  // after identifier standardization
    double o_avg = 0;
    double s_avg = 0;
    double s_max = 0;
    double score = 0;
    bool normalization_applied = false;
    std::vector<std::string> warnings;
};

// Similarity of generated code to a reference set (ground truth first, then
// alternates): min(100, s_max + sqrt(max(0, s_avg - o_avg))).
//
// References are deduplicated by standardized text and unparseable
// alternates are dropped with a warning. When the generated code does not
// parse, the S set equals the O set and the score is max(O). Empty
// generated code scores 0. Throws Error when the ground truth is empty or
// does not parse.
IoccbResult ioccb(std::string_view generated, std::string_view ground_truth,
                  const std::vector<std::string>& alternates, const CodeBleuOptions& options = {});

}  // namespace codeeff
