#include "codeeff/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace codeeff {

double npi(double t_c, const EfficiencyProfile& p) {
    if (!(t_c > 0)) throw Error("npi: execution time must be positive");
    if (!(p.t_min_ms > 0 && p.t_min_ms <= p.t_med_ms && p.t_med_ms <= p.t_max_ms))
        throw Error("npi: profile must satisfy 0 < t_min <= t_med <= t_max");
    // A single-point profile carries no spread to rank against.
    if (t_c == p.t_med_ms || p.t_min_ms == p.t_max_ms) return 50.0;
    if (t_c < p.t_med_ms) {
        if (t_c <= p.t_min_ms) return 100.0;
        return 50.0 + 50.0 * (p.t_med_ms - t_c) / (p.t_med_ms - p.t_min_ms);
    }
    if (t_c >= p.t_max_ms) return 0.0;
    return 50.0 * (p.t_max_ms - t_c) / (p.t_max_ms - p.t_med_ms);
}

std::vector<double> trim_times(std::vector<double> times, double tail_fraction) {
    if (!(tail_fraction >= 0 && tail_fraction < 0.5)) throw Error("tail fraction must lie in [0, 0.5)");
    for (double t : times)
        if (!(t > 0) || !std::isfinite(t)) throw Error("execution times must be positive and finite");
    std::sort(times.begin(), times.end());
    auto cut = static_cast<std::size_t>(std::floor(static_cast<double>(times.size()) * tail_fraction));
    if (2 * cut >= times.size()) return times;
    return {times.begin() + static_cast<std::ptrdiff_t>(cut), times.end() - static_cast<std::ptrdiff_t>(cut)};
}

EfficiencyProfile profile_from_times(std::vector<double> times, double tail_fraction) {
    if (times.size() < 3) throw Error("profile_from_times needs at least 3 samples");
    std::vector<double> kept = trim_times(std::move(times), tail_fraction);
    std::size_t n = kept.size();
    double median = n % 2 == 1 ? kept[n / 2] : (kept[n / 2 - 1] + kept[n / 2]) / 2.0;
    return {kept.front(), median, kept.back()};
}

namespace {

std::array<double, 6> breakpoints_of(const std::vector<double>& kept) {
    std::array<double, 6> tp{};
    double lo = kept.front(), span = kept.back() - kept.front();
    for (int k = 0; k < 6; ++k) tp[static_cast<std::size_t>(k)] = lo + (20.0 * k) * span / 100.0;
    tp[5] = kept.back();
    return tp;
}

}  // namespace

double time_breakpoint(std::vector<double> times, int p_percent, double tail_fraction) {
    if (p_percent < 0 || p_percent > 100 || p_percent % 20 != 0)
        throw Error("breakpoint percentage must be one of 0, 20, 40, 60, 80, 100");
    std::vector<double> kept = trim_times(std::move(times), tail_fraction);
    if (kept.size() < 2) throw Error("time_breakpoint needs at least 2 samples after trimming");
    return breakpoints_of(kept)[static_cast<std::size_t>(p_percent / 20)];
}

std::array<std::size_t, 5> bucket_counts(const std::vector<double>& times, double tail_fraction) {
    std::vector<double> kept = trim_times(times, tail_fraction);
    if (kept.size() < 2) throw Error("bucket_counts needs at least 2 samples after trimming");
    auto tp = breakpoints_of(kept);
    std::array<std::size_t, 5> counts{};
    for (double t : times) {
        if (t < tp[0] || t > tp[5]) continue;  // trimmed outlier
        if (tp[0] == tp[5]) {
            ++counts[0];
            continue;
        }
        std::size_t bucket = 4;
        for (std::size_t k = 1; k < 5; ++k) {
            if (t < tp[k]) {
                bucket = k - 1;
                break;
            }
        }
        ++counts[bucket];
    }
    return counts;
}

std::optional<double> sample_time(const CodeSample& s) {
    if (s.scaled_time_ms) return s.scaled_time_ms;
    return s.measured_time_ms;
}

BreakpointTable bucket_proportions(const Corpus& corpus, int difficulty, double tail_fraction) {
    std::map<std::string, std::vector<double>> per_problem;
    std::set<std::pair<std::string, std::string>> seen;
    auto add = [&](const CodeSample& s) {
        const Problem* p = corpus.find_problem(s.problem_id);
        if (!p || p->difficulty != difficulty) return;
        auto t = sample_time(s);
        if (!t || !seen.insert({s.problem_id, s.id}).second) return;
        per_problem[s.problem_id].push_back(*t);
    };
    for (const CodeSample& s : corpus.samples) add(s);
    for (const CodePair& pair : corpus.pairs) {
        add(pair.inefficient);
        add(pair.efficient);
        for (const CodeSample& a : pair.alternates) add(a);
    }

    BreakpointTable table;
    table.difficulty = difficulty;
    for (const auto& [id, times] : per_problem) {
        if (trim_times(times, tail_fraction).size() < 2) continue;
        auto counts = bucket_counts(times, tail_fraction);
        auto tp = breakpoints_of(trim_times(times, tail_fraction));
        std::size_t total = 0;
        for (std::size_t k = 0; k < 5; ++k) total += counts[k];
        for (std::size_t k = 0; k < 5; ++k) {
            table.bucket_weights[k] += static_cast<double>(counts[k]);
            if (total > 0) table.normalized_weights[k] += static_cast<double>(counts[k]) / static_cast<double>(total);
        }
        for (std::size_t k = 0; k < 6; ++k) table.breakpoints[k] += tp[k];
        table.samples += total;
        ++table.problems;
    }
    if (table.problems == 0)
        throw Error("no problem at difficulty " + std::to_string(difficulty) + " has at least 2 timed samples");
    auto n = static_cast<double>(table.problems);
    for (double& v : table.bucket_weights) v /= n;
    for (double& v : table.normalized_weights) v /= n;
    for (double& v : table.breakpoints) v /= n;
    return table;
}

}  // namespace codeeff
