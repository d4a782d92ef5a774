#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "codeeff/pynorm/lexer.hpp"

namespace codeeff {

using pynorm::TokenStream;

struct CodeBleuOptions {
    // ngram, weighted_ngram, syntax, dataflow
    std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
    double keyword_weight = 5.0;
};

struct ScoreBreakdown {
    double ngram = 0;
    double weighted_ngram = 0;
    double syntax = 0;
    double dataflow = 0;
    double combined = 0;
    std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
    // Human-readable notes on degraded components (empty input, parse failure).
    std::vector<std::string> warnings;
};

// Lexical tokens of `source`; whitespace-separated words when it does not
// tokenize.
TokenStream code_tokens(std::string_view source);

// Smoothed BLEU up to 4-grams on a 0-100 scale. An order with no matches
// contributes 1 / (2^k * candidate n-grams) where k counts the zero orders
// seen so far. Empty input scores 0 and appends a warning.
double ngram_match(const TokenStream& candidate, const TokenStream& reference,
                   std::vector<std::string>* warnings = nullptr);

// As ngram_match, with every n-gram containing a keyword counted
// keyword_weight times.
double weighted_ngram_match(const TokenStream& candidate, const TokenStream& reference, double keyword_weight,
                            std::vector<std::string>* warnings = nullptr);

// Clipped fraction of the candidate's non-leaf subtrees (identifier leaves
// anonymized) found in the reference. 0 plus a warning when either side
// fails to parse.
double syntax_match(std::string_view candidate, std::string_view reference,
                    std::vector<std::string>* warnings = nullptr);

// Clipped fraction of candidate data-flow edges found in the reference,
// with variables anonymized by first appearance. 0 plus a warning when
// either side fails to parse.
double dataflow_match(std::string_view candidate, std::string_view reference,
                      std::vector<std::string>* warnings = nullptr);

// Anonymized data-flow edges of a program, e.g. "v2<-v1". Throws
// pynorm::CompileError.
std::vector<std::string> dataflow_edges(std::string_view source);

// Serialized non-leaf subtrees of a program. Throws pynorm::CompileError.
std::vector<std::string> syntax_subtrees(std::string_view source);

// Pre-computed inputs of the four components, so that one program can be
// compared against many without re-parsing.
struct CodeFeatures {
    TokenStream tokens;
    bool parsed = false;
    std::vector<std::string> subtrees;
    std::vector<std::string> edges;
};

CodeFeatures analyze(std::string_view source);

ScoreBreakdown codebleu(const CodeFeatures& candidate, const CodeFeatures& reference,
                        const CodeBleuOptions& options = {});

// Weighted sum of the four components. Throws Error when the weights are
// negative or do not sum to 1.
ScoreBreakdown codebleu(std::string_view candidate, std::string_view reference,
                        const CodeBleuOptions& options = {});

// Mean of both argument orders; used where a distance must be symmetric.
double symmetric_codebleu(std::string_view a, std::string_view b, const CodeBleuOptions& options = {});

}  // namespace codeeff
