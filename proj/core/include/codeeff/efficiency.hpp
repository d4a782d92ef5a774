#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "codeeff/corpus.hpp"

namespace codeeff {

// Default fraction of samples dropped from each tail before taking the
// minimum and maximum of a time distribution.
inline constexpr double k_default_tail_fraction = 0.005;

// Normalized performance index of a run time against a profile: 100 at
// t_min, 50 at t_med, 0 at t_max, linear in between and clamped outside.
// Throws Error when t_c <= 0 or the profile is not ordered.
double npi(double t_c, const EfficiencyProfile& profile);

// Sorted copy of `times` with floor(n * tail_fraction) samples removed from
// each end.
std::vector<double> trim_times(std::vector<double> times, double tail_fraction = k_default_tail_fraction);

// (min, median, max) of the trimmed times. Needs at least 3 samples.
EfficiencyProfile profile_from_times(std::vector<double> times, double tail_fraction = k_default_tail_fraction);

// TP = T_min + p * (T_max - T_min) for p in {0, 20, ..., 100} percent.
double time_breakpoint(std::vector<double> times, int p_percent, double tail_fraction = k_default_tail_fraction);

struct BreakpointTable {
    int difficulty = 0;
    // Mean over the contributing problems of TP(0%) .. TP(100%).
    std::array<double, 6> breakpoints{};
    // R per 20% interval: mean raw count of samples per problem.
    std::array<double, 5> bucket_weights{};
    // Extension: mean per-problem share of samples per interval.
    std::array<double, 5> normalized_weights{};
    std::size_t problems = 0;
    std::size_t samples = 0;
};

// Per-problem bucket counts, where TP comes from that problem's own
// trimmed times. Intervals are closed on the left; the last one is closed
// on both ends. Problems need at least 2 timed samples to contribute.
std::array<std::size_t, 5> bucket_counts(const std::vector<double>& times,
                                         double tail_fraction = k_default_tail_fraction);

// Throws Error when no problem at difficulty d has timed samples.
BreakpointTable bucket_proportions(const Corpus& corpus, int difficulty,
                                   double tail_fraction = k_default_tail_fraction);

// Time used for efficiency statistics: scaled time, else measured time.
std::optional<double> sample_time(const CodeSample& sample);

}  // namespace codeeff
