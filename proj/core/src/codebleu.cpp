#include "codeeff/codebleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "codeeff/error.hpp"
#include "codeeff/language_data.hpp"
#include "codeeff/pynorm/parser.hpp"

namespace codeeff {

using pynorm::Kind;
using pynorm::Node;

TokenStream code_tokens(std::string_view source) {
    try {
        return pynorm::tokenize(source);
    } catch (const pynorm::LexError&) {
        TokenStream out;
        std::istringstream words{std::string(source)};
        for (std::string w; words >> w;) {
            auto kind = lang::is_keyword(w) ? pynorm::TokenKind::Keyword : pynorm::TokenKind::Identifier;
            out.push_back({kind, std::move(w)});
        }
        return out;
    }
}

// ---------------------------------------------------------------------------
// n-gram components

namespace {

using Gram = std::vector<std::string>;

struct GramCounts {
    std::map<Gram, std::size_t> counts;
    std::map<Gram, bool> has_keyword;
};

GramCounts grams_of(const TokenStream& toks, std::size_t n) {
    GramCounts g;
    if (toks.size() < n) return g;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        Gram gram;
        bool kw = false;
        for (std::size_t k = 0; k < n; ++k) {
            gram.push_back(toks[i + k].text);
            kw = kw || lang::is_keyword(toks[i + k].text);
        }
        g.has_keyword[gram] = kw;
        ++g.counts[std::move(gram)];
    }
    return g;
}

double bleu(const TokenStream& cand, const TokenStream& ref, double keyword_weight,
            std::vector<std::string>* warnings) {
    if (cand.empty() || ref.empty()) {
        if (warnings) warnings->push_back(cand.empty() ? "empty candidate" : "empty reference");
        return 0.0;
    }
    std::size_t max_order = std::min<std::size_t>(4, cand.size());
    double log_sum = 0;
    int zero_orders = 0;
    for (std::size_t n = 1; n <= max_order; ++n) {
        GramCounts c = grams_of(cand, n);
        GramCounts r = grams_of(ref, n);
        double matched = 0, total = 0;
        for (const auto& [gram, count] : c.counts) {
            double w = c.has_keyword[gram] ? keyword_weight : 1.0;
            total += w * static_cast<double>(count);
            auto it = r.counts.find(gram);
            if (it != r.counts.end()) matched += w * static_cast<double>(std::min(count, it->second));
        }
        double p;
        if (matched > 0) {
            p = matched / total;
        } else {
            ++zero_orders;
            p = 1.0 / (std::pow(2.0, zero_orders) * total);
        }
        log_sum += std::log(p);
    }
    double geo = std::exp(log_sum / static_cast<double>(max_order));
    auto c_len = static_cast<double>(cand.size());
    auto r_len = static_cast<double>(ref.size());
    double bp = c_len > r_len ? 1.0 : std::exp(1.0 - r_len / c_len);
    return std::clamp(100.0 * bp * geo, 0.0, 100.0);
}

}  // namespace

double ngram_match(const TokenStream& candidate, const TokenStream& reference, std::vector<std::string>* warnings) {
    return bleu(candidate, reference, 1.0, warnings);
}

double weighted_ngram_match(const TokenStream& candidate, const TokenStream& reference, double keyword_weight,
                            std::vector<std::string>* warnings) {
    if (!(keyword_weight > 0)) throw Error("keyword_weight must be positive");
    return bleu(candidate, reference, keyword_weight, warnings);
}

// ---------------------------------------------------------------------------
// syntax component

namespace {

bool anonymized_leaf(const Node& n) {
    return n.kind == Kind::Name || n.kind == Kind::Identifier || n.kind == Kind::Alias;
}

std::string serialize(const Node& n, std::vector<std::string>& out) {
    std::string s = "(";
    s += pynorm::to_string(n.kind);
    if (!n.text.empty()) {
        s += ' ';
        s += anonymized_leaf(n) ? std::string("_") : n.text;
    }
    for (const Node& k : n.kids) {
        s += ' ';
        s += serialize(k, out);
    }
    s += ')';
    if (!n.kids.empty()) out.push_back(s);
    return s;
}

double clipped_fraction(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
    std::unordered_map<std::string, std::size_t> available;
    for (const std::string& r : ref) ++available[r];
    std::size_t hits = 0;
    for (const std::string& c : cand) {
        auto it = available.find(c);
        if (it != available.end() && it->second > 0) {
            --it->second;
            ++hits;
        }
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(cand.size());
}

}  // namespace

std::vector<std::string> syntax_subtrees(std::string_view source) {
    std::vector<std::string> out;
    serialize(pynorm::parse_module(source), out);
    return out;
}

// ---------------------------------------------------------------------------
// data-flow component

namespace {

struct Edge {
    std::string target;  // variable name, or "@Sink" label for uses
    std::vector<std::string> sources;
};

class FlowBuilder {
public:
    explicit FlowBuilder(const Node& module) {
        collect_definitions(module);
        for (const std::string& f : functions_) variables_.erase(f);
        block(module);
    }

    std::vector<Edge> edges;

private:
    // --- pass 1: which names are variables
    void define_target(const Node& t) {
        switch (t.kind) {
            case Kind::Name: variables_.insert(t.text); break;
            case Kind::Tuple:
            case Kind::List:
                for (const Node& e : t.kids) define_target(e);
                break;
            case Kind::Starred: define_target(t.kids[0]); break;
            default: break;
        }
    }

    void collect_definitions(const Node& n) {
        switch (n.kind) {
            case Kind::FunctionDef:
            case Kind::ClassDef: functions_.insert(n.kids[0].text); break;
            case Kind::Assign:
                for (std::size_t i = 0; i + 1 < n.kids.size(); ++i) define_target(n.kids[i]);
                break;
            case Kind::AugAssign:
            case Kind::AnnAssign:
            case Kind::For:
            case Kind::Comprehension:
            case Kind::NamedExpr: define_target(n.kids[0]); break;
            case Kind::WithItem: define_target(n.kids[1]); break;
            case Kind::Param:
            case Kind::ExceptHandler: {
                const Node& id = n.kind == Kind::Param ? n.kids[0] : n.kids[1];
                if (!id.empty()) variables_.insert(id.text);
                break;
            }
            default: break;
        }
        for (const Node& k : n.kids) collect_definitions(k);
    }

    // --- pass 2: edges
    void reads(const Node& e, std::vector<std::string>& out) const {
        if (e.kind == Kind::Name) {
            if (variables_.contains(e.text) && std::find(out.begin(), out.end(), e.text) == out.end())
                out.push_back(e.text);
            return;
        }
        if (e.kind == Kind::Attribute) {
            reads(e.kids[0], out);
            return;
        }
        if (e.kind == Kind::Keyword) {
            reads(e.kids[1], out);
            return;
        }
        for (const Node& k : e.kids) reads(k, out);
    }

    std::vector<std::string> reads(const Node& e) const {
        std::vector<std::string> out;
        reads(e, out);
        return out;
    }

    void add(const std::string& target, std::vector<std::string> sources) {
        edges.push_back({target, std::move(sources)});
    }

    void use(const char* sink, const Node& e) {
        inner_definitions(e);
        auto r = reads(e);
        if (!r.empty()) add(sink, std::move(r));
    }

    // Definitions nested in expressions: walrus, comprehension targets,
    // lambda parameters.
    void inner_definitions(const Node& e) {
        switch (e.kind) {
            case Kind::NamedExpr:
                inner_definitions(e.kids[1]);
                if (variables_.contains(e.kids[0].text)) add(e.kids[0].text, reads(e.kids[1]));
                return;
            case Kind::Comprehension:
                inner_definitions(e.kids[1]);
                assign_target(e.kids[0], reads(e.kids[1]));
                for (std::size_t i = 2; i < e.kids.size(); ++i) inner_definitions(e.kids[i]);
                return;
            case Kind::ListComp:
            case Kind::SetComp:
            case Kind::DictComp:
            case Kind::GeneratorExp:
                for (std::size_t i = 1; i < e.kids.size(); ++i) inner_definitions(e.kids[i]);
                inner_definitions(e.kids[0]);
                return;
            case Kind::Lambda:
                params(e.kids[0]);
                inner_definitions(e.kids[1]);
                return;
            default:
                for (const Node& k : e.kids) inner_definitions(k);
        }
    }

    void assign_target(const Node& t, const std::vector<std::string>& sources) {
        switch (t.kind) {
            case Kind::Name:
                if (variables_.contains(t.text)) add(t.text, sources);
                break;
            case Kind::Tuple:
            case Kind::List:
                for (const Node& e : t.kids) assign_target(e, sources);
                break;
            case Kind::Starred: assign_target(t.kids[0], sources); break;
            case Kind::Subscript:
            case Kind::Attribute: {
                // Writing into a container updates the container variable.
                const Node* base = &t;
                std::vector<std::string> src;
                while (base->kind == Kind::Subscript || base->kind == Kind::Attribute) {
                    if (base->kind == Kind::Subscript) reads(base->kids[1], src);
                    base = &base->kids[0];
                }
                for (const std::string& s : sources)
                    if (std::find(src.begin(), src.end(), s) == src.end()) src.push_back(s);
                if (base->kind == Kind::Name && variables_.contains(base->text)) add(base->text, std::move(src));
                break;
            }
            default: break;
        }
    }

    // Pairwise when both sides are sequences of the same length.
    void assign(const Node& target, const Node& value) {
        bool seq_t = target.kind == Kind::Tuple || target.kind == Kind::List;
        bool seq_v = value.kind == Kind::Tuple || value.kind == Kind::List;
        if (seq_t && seq_v && target.kids.size() == value.kids.size()) {
            for (std::size_t i = 0; i < target.kids.size(); ++i) assign(target.kids[i], value.kids[i]);
            return;
        }
        assign_target(target, reads(value));
    }

    void params(const Node& ps) {
        for (const Node& p : ps.kids) {
            if (p.kids[0].empty()) continue;
            inner_definitions(p.kids[2]);
            if (variables_.contains(p.kids[0].text)) add(p.kids[0].text, reads(p.kids[2]));
        }
    }

    void block(const Node& b) {
        for (const Node& s : b.kids) statement(s);
    }

    void statement(const Node& s) {
        switch (s.kind) {
            case Kind::ExprStmt: use("@Expr", s.kids[0]); return;
            case Kind::Return: use("@Return", s.kids[0]); return;
            case Kind::Assert:
                use("@Assert", s.kids[0]);
                return;
            case Kind::Raise: use("@Raise", s); return;
            case Kind::Assign: {
                const Node& value = s.kids.back();
                inner_definitions(value);
                for (std::size_t i = 0; i + 1 < s.kids.size(); ++i) assign(s.kids[i], value);
                return;
            }
            case Kind::AugAssign: {
                inner_definitions(s.kids[1]);
                std::vector<std::string> src;
                reads(s.kids[0], src);
                reads(s.kids[1], src);
                assign_target(s.kids[0], src);
                return;
            }
            case Kind::AnnAssign:
                if (!s.kids[2].empty()) {
                    inner_definitions(s.kids[2]);
                    assign(s.kids[0], s.kids[2]);
                }
                return;
            case Kind::If:
            case Kind::While:
                use(s.kind == Kind::If ? "@If" : "@While", s.kids[0]);
                for (std::size_t i = 1; i < s.kids.size(); ++i) nested(s.kids[i]);
                return;
            case Kind::For:
                inner_definitions(s.kids[1]);
                assign_target(s.kids[0], reads(s.kids[1]));
                for (std::size_t i = 2; i < s.kids.size(); ++i) nested(s.kids[i]);
                return;
            case Kind::With:
                for (std::size_t i = 0; i + 1 < s.kids.size(); ++i) {
                    const Node& item = s.kids[i];
                    inner_definitions(item.kids[0]);
                    if (!item.kids[1].empty()) assign_target(item.kids[1], reads(item.kids[0]));
                }
                block(s.kids.back());
                return;
            case Kind::FunctionDef:
                params(s.kids[2]);
                block(s.kids[4]);
                return;
            case Kind::ClassDef: block(s.kids[3]); return;
            case Kind::Try:
                for (const Node& k : s.kids) {
                    if (k.kind == Kind::ExceptHandler) {
                        if (!k.kids[1].empty() && variables_.contains(k.kids[1].text))
                            add(k.kids[1].text, reads(k.kids[0]));
                        block(k.kids[2]);
                    } else {
                        nested(k);
                    }
                }
                return;
            default: return;
        }
    }

    void nested(const Node& n) {
        if (n.kind == Kind::Block) block(n);
        else if (n.kind == Kind::OrElse || n.kind == Kind::Finally) block(n.kids[0]);
    }

    std::set<std::string> variables_;
    std::set<std::string> functions_;
};

}  // namespace

std::vector<std::string> dataflow_edges(std::string_view source) {
    FlowBuilder flow(pynorm::parse_module(source));
    std::map<std::string, std::string> alias;
    auto name_of = [&](const std::string& v) {
        if (v.starts_with("@")) return v;
        auto it = alias.find(v);
        if (it == alias.end()) it = alias.emplace(v, "v" + std::to_string(alias.size() + 1)).first;
        return it->second;
    };
    std::vector<std::string> out;
    for (const Edge& e : flow.edges) {
        std::string srcs;
        for (const std::string& s : e.sources) {
            if (!srcs.empty()) srcs += ',';
            srcs += name_of(s);
        }
        out.push_back(name_of(e.target) + "<-" + srcs);
    }
    return out;
}

// ---------------------------------------------------------------------------
// combination

namespace {

double syntax_score(const CodeFeatures& c, const CodeFeatures& r, std::vector<std::string>* warnings) {
    if (!c.parsed || !r.parsed) {
        if (warnings) warnings->push_back(!c.parsed ? "syntax: candidate does not parse" : "syntax: reference does not parse");
        return 0.0;
    }
    if (c.subtrees.empty()) return r.subtrees.empty() ? 100.0 : 0.0;
    return clipped_fraction(c.subtrees, r.subtrees);
}

double dataflow_score(const CodeFeatures& c, const CodeFeatures& r, std::vector<std::string>* warnings) {
    if (!c.parsed || !r.parsed) {
        if (warnings)
            warnings->push_back(!c.parsed ? "dataflow: candidate does not parse" : "dataflow: reference does not parse");
        return 0.0;
    }
    if (c.edges.empty()) return r.edges.empty() ? 100.0 : 0.0;
    return clipped_fraction(c.edges, r.edges);
}

void check_weights(const std::array<double, 4>& w) {
    double sum = 0;
    for (double x : w) {
        if (!(x >= 0)) throw Error("CodeBLEU weights must be non-negative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("CodeBLEU weights must sum to 1");
}

}  // namespace

double syntax_match(std::string_view candidate, std::string_view reference, std::vector<std::string>* warnings) {
    return syntax_score(analyze(candidate), analyze(reference), warnings);
}

double dataflow_match(std::string_view candidate, std::string_view reference, std::vector<std::string>* warnings) {
    return dataflow_score(analyze(candidate), analyze(reference), warnings);
}

CodeFeatures analyze(std::string_view source) {
    CodeFeatures f;
    f.tokens = code_tokens(source);
    try {
        f.subtrees = syntax_subtrees(source);
        f.edges = dataflow_edges(source);
        f.parsed = true;
    } catch (const Error&) {
        f.subtrees.clear();
        f.edges.clear();
        f.parsed = false;
    }
    return f;
}

ScoreBreakdown codebleu(const CodeFeatures& candidate, const CodeFeatures& reference, const CodeBleuOptions& options) {
    check_weights(options.weights);
    ScoreBreakdown s;
    s.weights = options.weights;
    s.ngram = ngram_match(candidate.tokens, reference.tokens, &s.warnings);
    s.weighted_ngram = weighted_ngram_match(candidate.tokens, reference.tokens, options.keyword_weight, nullptr);
    s.syntax = syntax_score(candidate, reference, &s.warnings);
    s.dataflow = dataflow_score(candidate, reference, &s.warnings);
    const auto& w = s.weights;
    s.combined = w[0] * s.ngram + w[1] * s.weighted_ngram + w[2] * s.syntax + w[3] * s.dataflow;
    return s;
}

ScoreBreakdown codebleu(std::string_view candidate, std::string_view reference, const CodeBleuOptions& options) {
    return codebleu(analyze(candidate), analyze(reference), options);
}

double symmetric_codebleu(std::string_view a, std::string_view b, const CodeBleuOptions& options) {
    CodeFeatures fa = analyze(a), fb = analyze(b);
    return (codebleu(fa, fb, options).combined + codebleu(fb, fa, options).combined) / 2.0;
}

}  // namespace codeeff
