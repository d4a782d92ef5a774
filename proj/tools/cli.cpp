#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "codeeff/codebleu.hpp"
#include "codeeff/config.hpp"
#include "codeeff/corpus.hpp"
#include "codeeff/efficiency.hpp"
#include "codeeff/estimator.hpp"
#include "codeeff/evalstats.hpp"
#include "codeeff/executor.hpp"
#include "codeeff/ioccb.hpp"
#include "codeeff/pairing.hpp"
#include "codeeff/parallel.hpp"
#include "codeeff/pynorm.hpp"
#include "codeeff/runner.hpp"

namespace codeeff::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Bad input discovered after parsing; reported like a flag error.
struct UsageError : Error {
    using Error::Error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::istringstream parts(text);
    for (std::string p; std::getline(parts, p, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(p, &used));
            if (used != p.size()) throw std::invalid_argument(p);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": '" + p + "' is not a number");
        }
    }
    if (out.size() != expected)
        throw UsageError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated numbers");
    return out;
}

json to_json(const ScoreBreakdown& s) {
    return {{"ngram", s.ngram},       {"weighted_ngram", s.weighted_ngram}, {"syntax", s.syntax},
            {"dataflow", s.dataflow}, {"combined", s.combined},             {"weights", s.weights},
            {"warnings", s.warnings}};
}

json to_json(const IoccbResult& r) {
    return {{"o_scores", r.o_scores}, {"s_scores", r.s_scores}, {"o_avg", r.o_avg},
            {"s_avg", r.s_avg},       {"s_max", r.s_max},       {"score", r.score},
            {"normalization_applied", r.normalization_applied}, {"warnings", r.warnings}};
}

json to_json(const BreakpointTable& t) {
    return {{"difficulty", t.difficulty},
            {"breakpoints", t.breakpoints},
            {"bucket_weights", t.bucket_weights},
            {"normalized_weights", t.normalized_weights},
            {"problems", t.problems},
            {"samples", t.samples}};
}

struct Globals {
    bool json = false;
    unsigned jobs = default_jobs();
    std::int64_t seed = 0;
    std::string config_path;
    std::string shim;
    std::string python = "python3";
    std::string schema;
};

Config load_config(const Globals& g) { return g.config_path.empty() ? Config{} : Config::load(g.config_path); }

Schema schema_or(const Globals& g, Schema fallback) {
    if (g.schema.empty()) return fallback;
    auto s = parse_schema(g.schema);
    if (!s) throw UsageError("unknown schema '" + g.schema + "' (expected aceob, ori or npi)");
    return *s;
}

std::unique_ptr<Executor> make_executor(const Globals& g) {
    if (g.shim.empty()) return std::make_unique<DirectExecutor>(g.python);
    std::vector<std::string> command;
    std::istringstream words(g.shim);
    // the shim runs inside a scratch directory, so pin relative paths now
    for (std::string w; words >> w;) {
        std::error_code ec;
        if (w.find('/') != std::string::npos && std::filesystem::exists(w, ec)) w = std::filesystem::absolute(w).string();
        command.push_back(w);
    }
    return std::make_unique<ShimExecutor>(std::move(command));
}

CodeBleuOptions codebleu_options(const Globals& g) {
    Config c = load_config(g);
    CodeBleuOptions o;
    o.keyword_weight = c.get_double("keyword_weight", o.keyword_weight);
    if (auto w = c.get("codebleu_weights")) {
        auto v = parse_numbers(*w, 4, "codebleu_weights");
        std::copy(v.begin(), v.end(), o.weights.begin());
    }
    return o;
}

const Problem& find_problem(const Corpus& corpus, const std::string& id) {
    const Problem* p = corpus.find_problem(id);
    if (!p) throw Error("problem '" + id + "' not found in dataset");
    return *p;
}

std::vector<IoTest> judge_tests(const Problem& p) {
    if (!p.hidden_tests.empty()) return p.hidden_tests;
    if (!p.public_tests.empty()) return p.public_tests;
    throw Error("problem '" + p.id + "' has no tests");
}

}  // namespace

int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Code-efficiency scoring, filtering and dataset construction", "codeeff"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_flag("--json", g.json, "Emit one JSON document on stdout");
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--config", g.config_path, "key=value config file")->check(CLI::ExistingFile);
    app.add_option("--shim", g.shim, "Run programs through this shim command");
    app.add_option("--python", g.python, "Interpreter for direct execution");
    app.add_option("--schema", g.schema, "Dataset schema: aceob, ori or npi");

    std::function<void()> action;

    // normalize
    auto* normalize = app.add_subcommand("normalize", "Print the normalized source of a file");
    std::string normalize_file;
    normalize->add_option("file", normalize_file)->required()->check(CLI::ExistingFile);
    normalize->callback([&] {
        action = [&] {
            auto r = pynorm::normalize(read_text(normalize_file));
            if (g.json) out << json{{"source", r.source}, {"rename_map", r.rename_map}, {"compile_ok", r.compile_ok}}.dump() << '\n';
            else out << r.source;
            if (!r.compile_ok) err << "warning: source does not compile; identifiers left unchanged\n";
        };
    });

    // score
    auto* score = app.add_subcommand("score", "Similarity and efficiency scores");
    score->require_subcommand(1);
    auto* score_cb = score->add_subcommand("codebleu", "CodeBLEU of a candidate against a reference");
    std::string cb_cand, cb_ref;
    score_cb->add_option("candidate", cb_cand)->required()->check(CLI::ExistingFile);
    score_cb->add_option("reference", cb_ref)->required()->check(CLI::ExistingFile);
    score_cb->callback([&] {
        action = [&] { out << to_json(codebleu(read_text(cb_cand), read_text(cb_ref), codebleu_options(g))).dump() << '\n'; };
    });

    auto* score_io = score->add_subcommand("ioccb", "IOCCB of generated code against references");
    std::string io_gen, io_truth;
    std::vector<std::string> io_alts;
    score_io->add_option("generated", io_gen)->required()->check(CLI::ExistingFile);
    score_io->add_option("ground_truth", io_truth)->required()->check(CLI::ExistingFile);
    score_io->add_option("--alt", io_alts, "Alternate reference file")->check(CLI::ExistingFile);
    score_io->callback([&] {
        action = [&] {
            std::vector<std::string> alts;
            for (const std::string& a : io_alts) alts.push_back(read_text(a));
            out << to_json(ioccb(read_text(io_gen), read_text(io_truth), alts, codebleu_options(g))).dump() << '\n';
        };
    });

    auto* score_npi = score->add_subcommand("npi", "NPI of a run time against a profile");
    double npi_time = 0;
    std::string npi_profile;
    score_npi->add_option("--time", npi_time, "Run time in ms")->required();
    score_npi->add_option("--profile", npi_profile, "t_min,t_med,t_max in ms")->required();
    score_npi->callback([&] {
        action = [&] {
            auto p = parse_numbers(npi_profile, 3, "--profile");
            double v = npi(npi_time, EfficiencyProfile{p[0], p[1], p[2]});
            if (g.json) out << json{{"npi", v}}.dump() << '\n';
            else out << json(v).dump() << '\n';
        };
    });

    // run
    auto* run = app.add_subcommand("run", "Run a program against a problem's tests");
    std::string run_file, run_problem, run_dataset;
    Limits limits;
    bool limits_time_set = false, limits_mem_set = false;
    run->add_option("file", run_file)->required()->check(CLI::ExistingFile);
    run->add_option("--problem", run_problem)->required();
    run->add_option("--dataset", run_dataset)->required()->check(CLI::ExistingFile);
    run->add_option("--runs", limits.runs_per_test, "Runs per test")->check(CLI::PositiveNumber);
    auto* tl = run->add_option("--time-limit-ms", limits.time_limit_ms)->check(CLI::PositiveNumber);
    auto* ml = run->add_option("--memory-limit-kb", limits.memory_limit_kb)->check(CLI::PositiveNumber);
    run->callback([&] {
        limits_time_set = tl->count() > 0;
        limits_mem_set = ml->count() > 0;
        action = [&] {
            Corpus corpus = load_dataset(run_dataset, schema_or(g, Schema::aceob));
            const Problem& p = find_problem(corpus, run_problem);
            if (!limits_time_set) limits.time_limit_ms = p.time_limit_ms;
            if (!limits_mem_set) limits.memory_limit_kb = p.memory_limit_kb;
            auto executor = make_executor(g);
            RunResult r = run_candidate(*executor, fs::path(run_file).stem().string(), read_text(run_file),
                                        judge_tests(p), limits, g.jobs);
            out << to_json(r).dump() << '\n';
        };
    });

    // filter
    auto* filter = app.add_subcommand("filter", "Pick the candidate with the highest NPI");
    std::string filter_dir, filter_problem, filter_dataset, filter_estimator = "measured";
    filter->add_option("candidates", filter_dir)->required()->check(CLI::ExistingDirectory);
    filter->add_option("--problem", filter_problem)->required();
    filter->add_option("--dataset", filter_dataset)->required()->check(CLI::ExistingFile);
    filter->add_option("--estimator", filter_estimator, "measured | external:<file> | external-npi:<file>");
    filter->add_option("--runs", limits.runs_per_test, "Runs per test for the measured estimator")
        ->check(CLI::PositiveNumber);
    filter->callback([&] {
        action = [&] {
            Corpus corpus = load_dataset(filter_dataset, schema_or(g, Schema::aceob));
            const Problem& p = find_problem(corpus, filter_problem);
            if (!p.profile) throw Error("problem '" + p.id + "' has no efficiency profile");
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(filter_dir))
                if (e.is_regular_file() && e.path().extension() == ".py") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            if (files.empty()) throw Error("no .py candidates in " + filter_dir);
            std::vector<CodeSample> candidates;
            for (const fs::path& f : files) {
                CodeSample s;
                s.id = f.stem().string();
                s.problem_id = p.id;
                s.source = read_text(f.string());
                s.token_count = count_tokens(s.source);
                s.origin = Origin::generated;
                candidates.push_back(std::move(s));
            }
            std::unique_ptr<Executor> executor;
            std::unique_ptr<TimeEstimator> estimator;
            if (filter_estimator == "measured") {
                executor = make_executor(g);
                limits.time_limit_ms = p.time_limit_ms;
                limits.memory_limit_kb = p.memory_limit_kb;
                estimator = std::make_unique<MeasuredEstimator>(*executor, judge_tests(p), limits, g.jobs);
            } else if (filter_estimator.rfind("external:", 0) == 0) {
                estimator = std::make_unique<TableEstimator>(TableEstimator::from_file(filter_estimator.substr(9)));
            } else if (filter_estimator.rfind("external-npi:", 0) == 0) {
                estimator =
                    std::make_unique<TableEstimator>(TableEstimator::from_file(filter_estimator.substr(13), true));
            } else {
                throw UsageError("unknown estimator '" + filter_estimator + "'");
            }
            FilterResult r = npi_filter(candidates, *estimator, *p.profile);
            json doc = to_json(r);
            doc["chosen_path"] = files[r.chosen_index].string();
            if (g.json) {
                out << doc.dump() << '\n';
            } else {
                out << files[r.chosen_index].string() << '\n' << doc["ranked"].dump() << '\n';
            }
        };
    });

    // build-pairs
    auto* build = app.add_subcommand("build-pairs", "Build efficient/inefficient pairs from a flat dataset");
    std::string build_in, build_out;
    build->add_option("dataset", build_in)->required()->check(CLI::ExistingFile);
    build->add_option("-o,--output", build_out)->required();
    int build_runs = Limits{}.runs_per_test;
    build->add_option("--runs", build_runs, "Runs per test when timing untimed samples")->check(CLI::PositiveNumber);
    build->callback([&] {
        action = [&] {
            Corpus ori = load_dataset(build_in, schema_or(g, Schema::ori));
            PairingConfig cfg = pairing_config_from(load_config(g));
            cfg.seed = static_cast<std::uint64_t>(g.seed);
            cfg.jobs = g.jobs;
            std::vector<std::string> log;
            bool untimed = std::any_of(ori.samples.begin(), ori.samples.end(),
                                       [](const CodeSample& s) { return !s.scaled_time_ms; });
            if (untimed) time_samples(ori, *make_executor(g), build_runs, g.jobs, &log);
            Corpus pairs = build_pairs(ori, cfg, &log);
            save_dataset(pairs, build_out);
            for (const std::string& line : log) err << line << '\n';
            json summary = {{"pairs", pairs.pairs.size()}, {"problems", pairs.problems.size()}, {"output", build_out}};
            if (g.json) {
                summary["log"] = log;
                out << summary.dump() << '\n';
            } else {
                out << "wrote " << pairs.pairs.size() << " pairs for " << pairs.problems.size() << " problems to "
                    << build_out << '\n';
            }
        };
    });

    // stats breakpoints
    auto* stats = app.add_subcommand("stats", "Dataset statistics");
    stats->require_subcommand(1);
    auto* bp = stats->add_subcommand("breakpoints", "Time breakpoints and interval counts per difficulty");
    int bp_difficulty = 0;
    std::string bp_dataset;
    bp->add_option("--difficulty", bp_difficulty)->required();
    bp->add_option("dataset", bp_dataset)->required()->check(CLI::ExistingFile);
    bp->callback([&] {
        action = [&] {
            Corpus c = load_dataset(bp_dataset, schema_or(g, Schema::ori));
            out << to_json(bucket_proportions(c, bp_difficulty)).dump() << '\n';
        };
    });

    // report
    auto* report = app.add_subcommand("report", "Grouped score report as CSV");
    std::string rep_scores, rep_dataset, rep_out, rep_buckets;
    report->add_option("scores", rep_scores)->required()->check(CLI::ExistingFile);
    report->add_option("dataset", rep_dataset)->required()->check(CLI::ExistingFile);
    report->add_option("-o,--output", rep_out);
    report->add_option("--buckets", rep_buckets, "Difficulty buckets, e.g. Introductory:0,Interview:1-3");
    report->callback([&] {
        action = [&] {
            Corpus c = load_dataset(rep_dataset, schema_or(g, Schema::aceob));
            auto buckets = rep_buckets.empty() ? default_buckets() : parse_buckets(rep_buckets);
            if (auto b = load_config(g).get("difficulty_buckets"); b && rep_buckets.empty()) buckets = parse_buckets(*b);
            auto rows = grouped_report(load_scores(rep_scores), c, buckets);
            std::string csv = report_csv(rows);
            if (!rep_out.empty()) {
                std::ofstream f(rep_out, std::ios::binary);
                if (!f) throw Error("cannot write " + rep_out);
                f << csv;
            }
            if (g.json) {
                json arr = json::array();
                for (const EvalReport& r : rows)
                    arr.push_back({{"group_type", r.group_type}, {"group", r.group}, {"n", r.n},
                                   {"io_pass_pct", r.io_pass_pct}, {"mean_npi", r.mean_npi},
                                   {"mean_ioccb", r.mean_ioccb}});
                out << arr.dump() << '\n';
            } else if (rep_out.empty()) {
                out << csv;
            }
        };
    });

    // eval
    auto* eval = app.add_subcommand("eval", "Prediction statistics");
    eval->require_subcommand(1);
    auto* ev_rmse = eval->add_subcommand("rmse", "Root mean square error");
    auto* ev_sp = eval->add_subcommand("spearman", "Spearman rank correlation of predicted vs actual");
    std::string ev_file;
    ev_rmse->add_option("predictions", ev_file)->required()->check(CLI::ExistingFile);
    ev_sp->add_option("predictions", ev_file)->required()->check(CLI::ExistingFile);
    ev_rmse->callback([&] {
        action = [&] {
            auto recs = load_predictions(ev_file);
            out << json{{"rmse", rmse(recs)}, {"n", recs.size()}}.dump() << '\n';
        };
    });
    ev_sp->callback([&] {
        action = [&] {
            std::vector<double> x, y;
            for (const PredictionRecord& r : load_predictions(ev_file)) {
                x.push_back(r.predicted);
                y.push_back(r.actual);
            }
            SpearmanResult s = spearman(x, y);
            out << json{{"rho", s.rho}, {"p", s.p}, {"n", s.n}}.dump() << '\n';
        };
    });

    std::vector<const char*> cargs;
    for (const std::string& a : argv) cargs.push_back(a.c_str());
    if (cargs.empty()) cargs.push_back("codeeff");
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        if (action) action();
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace codeeff::cli
