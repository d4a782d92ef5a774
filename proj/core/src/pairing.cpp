#include "codeeff/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "codeeff/assignment.hpp"
#include "codeeff/efficiency.hpp"
#include "codeeff/error.hpp"
#include "codeeff/parallel.hpp"
#include "codeeff/pynorm.hpp"

namespace codeeff {

PairingConfig pairing_config_from(const Config& config) {
    config.require_known({"dedup_threshold", "abs_token_limit", "rel_length_factor", "cluster_scale",
                          "efficiency_split_npi", "preprocess", "medoid_restarts", "seed", "jobs",
                          "codebleu_weights", "keyword_weight"});
    PairingConfig c;
    c.dedup_threshold = config.get_double("dedup_threshold", c.dedup_threshold);
    c.abs_token_limit = config.get_int("abs_token_limit", c.abs_token_limit);
    c.rel_length_factor = config.get_double("rel_length_factor", c.rel_length_factor);
    c.cluster_scale = config.get_double("cluster_scale", c.cluster_scale);
    c.efficiency_split_npi = config.get_double("efficiency_split_npi", c.efficiency_split_npi);
    c.preprocess = config.get_bool("preprocess", c.preprocess);
    c.medoid_restarts = static_cast<int>(config.get_int("medoid_restarts", c.medoid_restarts));
    c.seed = static_cast<std::uint64_t>(config.get_int("seed", static_cast<std::int64_t>(c.seed)));
    c.jobs = static_cast<unsigned>(config.get_int("jobs", c.jobs));
    c.codebleu.keyword_weight = config.get_double("keyword_weight", c.codebleu.keyword_weight);
    if (auto w = config.get("codebleu_weights")) {
        Config parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            std::size_t comma = w->find(',', start);
            if ((comma == std::string::npos) != (i == 3))
                throw ParseError("codebleu_weights needs four comma-separated numbers", 0);
            parts.set("w", w->substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            c.codebleu.weights[i] = parts.get_double("w", 0);
            start = comma + 1;
        }
    }
    if (!(c.dedup_threshold > 0 && c.dedup_threshold <= 1)) throw Error("dedup_threshold must lie in (0, 1]");
    if (c.abs_token_limit <= 0 || !(c.rel_length_factor > 0) || !(c.cluster_scale > 0))
        throw Error("length limits and cluster_scale must be positive");
    return c;
}

std::vector<CodeSample> dedup(const std::vector<CodeSample>& samples, double threshold) {
    std::vector<CodeSample> kept;
    std::map<std::string, std::vector<std::size_t>> by_problem;
    for (const CodeSample& s : samples) {
        auto& mine = by_problem[s.problem_id];
        bool duplicate = std::any_of(mine.begin(), mine.end(), [&](std::size_t k) {
            return lccs_similarity(s.source, kept[k].source) > threshold;
        });
        if (duplicate) continue;
        mine.push_back(kept.size());
        kept.push_back(s);
    }
    return kept;
}

std::vector<CodeSample> length_filter(const std::vector<CodeSample>& samples, const PairingConfig& config) {
    std::vector<CodeSample> short_enough;
    for (const CodeSample& s : samples)
        if (s.token_count <= config.abs_token_limit) short_enough.push_back(s);
    std::map<std::string, std::pair<double, std::size_t>> sums;
    for (const CodeSample& s : short_enough) {
        auto& [sum, n] = sums[s.problem_id];
        sum += static_cast<double>(s.token_count);
        ++n;
    }
    std::vector<CodeSample> out;
    for (const CodeSample& s : short_enough) {
        const auto& [sum, n] = sums[s.problem_id];
        double mean = sum / static_cast<double>(n);
        if (static_cast<double>(s.token_count) <= config.rel_length_factor * mean) out.push_back(s);
    }
    return out;
}

std::pair<std::vector<CodeSample>, std::vector<CodeSample>> split_by_efficiency(
    const std::vector<CodeSample>& samples, const EfficiencyProfile& profile, double split_npi) {
    std::pair<std::vector<CodeSample>, std::vector<CodeSample>> out;
    for (const CodeSample& s : samples) {
        if (!s.scaled_time_ms) throw SchemaError(s.id, "scaled_time_ms", "sample has no scaled time");
        (npi(*s.scaled_time_ms, profile) >= split_npi ? out.first : out.second).push_back(s);
    }
    return out;
}

std::size_t cluster_count(std::size_t n, double alpha) {
    auto k = static_cast<long long>(std::llround(alpha * std::sqrt(static_cast<double>(n))));
    return static_cast<std::size_t>(std::max(1LL, k));
}

std::vector<std::vector<double>> similarity_matrix(const std::vector<CodeSample>& samples,
                                                   const CodeBleuOptions& options, unsigned jobs) {
    const std::size_t n = samples.size();
    std::vector<CodeFeatures> features(n);
    parallel_for(n, jobs, [&](std::size_t i) { features[i] = analyze(pynorm::normalize(samples[i].source).source); });
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) cells.emplace_back(i, j);
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 100.0));
    parallel_for(cells.size(), jobs, [&](std::size_t c) {
        auto [i, j] = cells[c];
        double s = (codebleu(features[i], features[j], options).combined +
                    codebleu(features[j], features[i], options).combined) /
                   2.0;
        sim[i][j] = sim[j][i] = s;
    });
    return sim;
}

namespace {

DistanceMatrix to_distance(const std::vector<std::vector<double>>& sim) {
    DistanceMatrix d = sim;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) d[i][j] = i == j ? 0.0 : std::max(0.0, 100.0 - sim[i][j]);
    return d;
}

ClusterAssignment cluster_with(const std::vector<std::vector<double>>& sim, std::size_t k, const PairingConfig& config,
                               std::vector<std::string>* warnings) {
    ClusterOptions opt;
    opt.seed = config.seed;
    opt.restarts = config.medoid_restarts;
    return bisecting_medoids(to_distance(sim), k, opt, warnings);
}

std::vector<std::vector<double>> sub_matrix(const std::vector<std::vector<double>>& m, const std::vector<std::size_t>& idx) {
    std::vector<std::vector<double>> out(idx.size(), std::vector<double>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) out[a][b] = m[idx[a]][idx[b]];
    return out;
}

}  // namespace

ClusterAssignment cluster(const std::vector<CodeSample>& samples, std::size_t k, const PairingConfig& config,
                          std::vector<std::string>* warnings) {
    return cluster_with(similarity_matrix(samples, config.codebleu, config.jobs), k, config, warnings);
}

std::size_t representative(const std::vector<CodeSample>& members, const std::vector<std::vector<double>>& sim) {
    if (members.empty()) throw Error("representative of an empty cluster");
    std::size_t best = 0;
    double best_sum = -1;
    for (std::size_t i = 0; i < members.size(); ++i) {
        double sum = 0;
        for (std::size_t j = 0; j < members.size(); ++j)
            if (j != i) sum += sim[i][j];
        if (sum > best_sum || (sum == best_sum && members[i].id < members[best].id)) {
            best_sum = sum;
            best = i;
        }
    }
    return best;
}

const CodeSample& representative(const std::vector<CodeSample>& members, const CodeBleuOptions& options) {
    return members[representative(members, similarity_matrix(members, options))];
}

std::vector<CodePair> match_pairs(const std::vector<CodeSample>& inefficient, const std::vector<CodeSample>& efficient,
                                  const CodeBleuOptions& options) {
    std::vector<CodeFeatures> fi, fe;
    for (const CodeSample& s : inefficient) fi.push_back(analyze(pynorm::normalize(s.source).source));
    for (const CodeSample& s : efficient) fe.push_back(analyze(pynorm::normalize(s.source).source));
    std::vector<std::vector<double>> score(inefficient.size(), std::vector<double>(efficient.size()));
    for (std::size_t i = 0; i < fi.size(); ++i)
        for (std::size_t j = 0; j < fe.size(); ++j)
            score[i][j] = (codebleu(fi[i], fe[j], options).combined + codebleu(fe[j], fi[i], options).combined) / 2.0;
    Assignment a = max_weight_assignment(score);
    std::vector<CodePair> pairs;
    for (std::size_t i = 0; i < inefficient.size(); ++i) {
        int j = a.row_to_col[i];
        if (j < 0) continue;
        CodePair p;
        p.problem_id = inefficient[i].problem_id;
        p.inefficient = inefficient[i];
        p.efficient = efficient[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < efficient.size(); ++k)
            if (k != static_cast<std::size_t>(j)) p.alternates.push_back(efficient[k]);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

namespace {

// Profile from however many times there are: one time is a point profile,
// two give (a, mean, b), three or more use profile_from_times.
EfficiencyProfile small_sample_profile(std::vector<double> times) {
    std::sort(times.begin(), times.end());
    if (times.size() == 1) return {times[0], times[0], times[0]};
    if (times.size() == 2) return {times[0], (times[0] + times[1]) / 2.0, times[1]};
    return profile_from_times(std::move(times));
}

struct ProblemOutcome {
    std::vector<CodePair> pairs;
    std::optional<Problem> problem;
    std::vector<std::string> log;
};

ProblemOutcome pair_problem(const Problem& problem, std::vector<CodeSample> samples, const PairingConfig& config) {
    ProblemOutcome out;
    auto note = [&](const std::string& msg) { out.log.push_back("problem " + problem.id + ": " + msg); };

    if (config.preprocess) {
        std::vector<CodeSample> kept;
        for (CodeSample& s : samples) {
            std::string stripped = pynorm::strip_noise(s.source);
            try {
                s.source = pynorm::ast_roundtrip(stripped);
            } catch (const Error& e) {
                note("dropped " + s.id + " (does not compile: " + e.what() + ")");
                continue;
            }
            s.token_count = count_tokens(s.source);
            s.compile_ok = true;
            kept.push_back(std::move(s));
        }
        samples = std::move(kept);
    }

    std::set<std::string> before;
    for (const CodeSample& s : samples) before.insert(s.id);
    auto log_dropped = [&](const std::vector<CodeSample>& now, const char* reason) {
        std::set<std::string> ids;
        for (const CodeSample& s : now) ids.insert(s.id);
        for (const std::string& id : before)
            if (!ids.contains(id)) note("dropped " + id + " (" + reason + ")");
        before = std::move(ids);
    };
    std::vector<double> all_times;
    for (const CodeSample& s : samples) {
        if (!s.scaled_time_ms) throw SchemaError(s.id, "scaled_time_ms", "sample has no scaled time");
        all_times.push_back(*s.scaled_time_ms);
    }
    samples = dedup(samples, config.dedup_threshold);
    log_dropped(samples, "near-duplicate");
    samples = length_filter(samples, config);
    log_dropped(samples, "too long");
    if (samples.empty()) {
        note("no samples left; no pairs");
        return out;
    }

    EfficiencyProfile profile = problem.profile ? *problem.profile : small_sample_profile(all_times);
    auto [efficient, inefficient] = split_by_efficiency(samples, profile, config.efficiency_split_npi);
    if (efficient.empty() || inefficient.empty()) {
        note(efficient.empty() ? "no efficient codes; no pairs" : "no inefficient codes; no pairs");
        return out;
    }
    if (problem.tags.empty()) {
        note("no tags; cannot form aceob records");
        return out;
    }

    auto representatives = [&](const std::vector<CodeSample>& side) {
        auto sim = similarity_matrix(side, config.codebleu, 1);
        ClusterAssignment ca = cluster_with(sim, cluster_count(side.size(), config.cluster_scale), config, &out.log);
        std::vector<CodeSample> reps;
        for (const auto& members : ca.members) {
            std::vector<CodeSample> group;
            for (std::size_t i : members) group.push_back(side[i]);
            reps.push_back(group[representative(group, sub_matrix(sim, members))]);
        }
        return reps;
    };
    std::vector<CodeSample> eff_reps = representatives(efficient);
    std::vector<CodeSample> ineff_reps = representatives(inefficient);

    out.pairs = match_pairs(ineff_reps, eff_reps, config.codebleu);
    auto stamp = [&](CodeSample& s) { s.npi = npi(*s.scaled_time_ms, profile); };
    for (CodePair& p : out.pairs) {
        stamp(p.inefficient);
        stamp(p.efficient);
        for (CodeSample& a : p.alternates) stamp(a);
    }
    Problem emitted = problem;
    emitted.profile = profile;
    out.problem = std::move(emitted);
    return out;
}

}  // namespace

Corpus build_pairs(const Corpus& corpus, const PairingConfig& config, std::vector<std::string>* log) {
    std::vector<const Problem*> problems;
    for (const auto& [id, p] : corpus.problems) problems.push_back(&p);
    std::map<std::string, std::vector<CodeSample>> by_problem;
    for (const CodeSample& s : corpus.samples) {
        if (!corpus.find_problem(s.problem_id)) {
            if (log) log->push_back("sample " + s.id + ": unknown problem '" + s.problem_id + "'; skipped");
            continue;
        }
        by_problem[s.problem_id].push_back(s);
    }

    std::vector<ProblemOutcome> outcomes(problems.size());
    parallel_for(problems.size(), config.jobs, [&](std::size_t i) {
        auto it = by_problem.find(problems[i]->id);
        std::vector<CodeSample> samples = it == by_problem.end() ? std::vector<CodeSample>{} : it->second;
        if (samples.empty()) {
            outcomes[i].log.push_back("problem " + problems[i]->id + ": no samples; no pairs");
            return;
        }
        outcomes[i] = pair_problem(*problems[i], std::move(samples), config);
    });

    Corpus out;
    out.schema = Schema::aceob;
    for (ProblemOutcome& o : outcomes) {
        if (log) log->insert(log->end(), o.log.begin(), o.log.end());
        if (!o.problem || o.pairs.empty()) continue;
        out.problems.emplace(o.problem->id, std::move(*o.problem));
        for (CodePair& p : o.pairs) out.pairs.push_back(std::move(p));
    }
    return out;
}

Corpus flatten_pairs(const Corpus& corpus) {
    Corpus out;
    out.schema = Schema::ori;
    out.problems = corpus.problems;
    std::set<std::string> seen;
    auto add = [&](const CodeSample& s) {
        if (seen.insert(s.id).second) out.samples.push_back(s);
    };
    for (const CodeSample& s : corpus.samples) add(s);
    for (const CodePair& p : corpus.pairs) {
        add(p.inefficient);
        add(p.efficient);
        for (const CodeSample& a : p.alternates) add(a);
    }
    return out;
}

}  // namespace codeeff
