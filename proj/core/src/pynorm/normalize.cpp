#include "codeeff/pynorm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "codeeff/language_data.hpp"

namespace codeeff::pynorm {

std::vector<std::string> load_denylist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read denylist file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return lang::parse_word_list(buf.str());
}

// ---------------------------------------------------------------------------
// strip_noise

namespace {

struct Edit {
    std::size_t begin;
    std::size_t end;
    std::string replacement;
};

std::string without_spaces(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool matches_pattern(std::string_view statement, const std::vector<std::string>& denylist) {
    std::string text = without_spaces(statement);
    for (const std::string& raw : denylist) {
        std::string pattern = without_spaces(raw);
        if (pattern.empty() || text.compare(0, pattern.size(), pattern) != 0) continue;
        if (text.size() > pattern.size() && ident_char(pattern.back()) && ident_char(text[pattern.size()])) continue;
        return true;
    }
    return false;
}

bool is_compound_keyword(const Token& t) {
    static const std::set<std::string, std::less<>> words = {"if", "elif", "else", "for", "while", "with", "try",
                                                             "except", "finally", "def", "class"};
    return t.type == TokenType::Name && words.contains(t.text);
}

std::size_t line_begin(std::string_view src, std::size_t pos) {
    while (pos > 0 && src[pos - 1] != '\n') --pos;
    return pos;
}

std::size_t token_end(const Token& t) { return t.offset + t.text.size(); }

}  // namespace

std::string strip_noise(std::string_view source) { return strip_noise(source, lang::default_denylist()); }

std::string strip_noise(std::string_view source, const std::vector<std::string>& denylist) {
    std::vector<Token> toks;
    try {
        toks = lex(source);
    } catch (const LexError&) {
        return std::string(source);
    }
    std::vector<Edit> edits;

    // Comments: drop the comment and the blanks before it; drop the whole
    // line when nothing else is on it.
    for (const Token& t : toks) {
        if (t.type != TokenType::Comment) continue;
        std::size_t begin = t.offset;
        while (begin > 0 && (source[begin - 1] == ' ' || source[begin - 1] == '\t')) --begin;
        std::size_t end = token_end(t);
        while (end < source.size() && source[end] == '\r') ++end;
        bool own_line = begin == 0 || source[begin - 1] == '\n';
        if (own_line && end < source.size() && source[end] == '\n') ++end;
        edits.push_back({begin, end, ""});
    }

    // Logical lines: [first, newline) token index ranges.
    std::size_t i = 0;
    while (i < toks.size()) {
        auto skippable = [&](std::size_t k) {
            auto ty = toks[k].type;
            return ty == TokenType::Comment || ty == TokenType::Nl || ty == TokenType::Indent ||
                   ty == TokenType::Dedent || ty == TokenType::Newline;
        };
        if (toks[i].type == TokenType::EndMarker) break;
        if (skippable(i)) {
            ++i;
            continue;
        }
        std::size_t first = i;
        std::vector<std::size_t> code;  // indices of code tokens on this logical line
        while (i < toks.size() && toks[i].type != TokenType::Newline && toks[i].type != TokenType::EndMarker) {
            if (toks[i].type != TokenType::Comment && toks[i].type != TokenType::Nl) code.push_back(i);
            ++i;
        }
        std::size_t newline = i;

        // Split into simple statements at top-level ';', separating a
        // compound header from a same-line body.
        struct Segment {
            std::size_t lo, hi;  // positions in `code`
        };
        std::vector<Segment> segments;
        std::size_t seg_start = 0;
        bool header_line = is_compound_keyword(toks[code[0]]);
        int depth = 0;
        for (std::size_t k = 0; k < code.size(); ++k) {
            const Token& t = toks[code[k]];
            if (t.type == TokenType::Op) {
                if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
                else if (t.text == ")" || t.text == "]" || t.text == "}") depth = std::max(0, depth - 1);
                else if (depth == 0 && t.text == ";") {
                    segments.push_back({seg_start, k});
                    seg_start = k + 1;
                } else if (depth == 0 && t.text == ":" && header_line) {
                    // Header ends here; the rest is the inline body.
                    header_line = false;
                    seg_start = k + 1;
                }
            } else if (t.type == TokenType::Name && t.text == "lambda" && header_line) {
                // A lambda's ':' inside a header would end the header early.
                ++depth;
            }
        }
        if (seg_start < code.size()) segments.push_back({seg_start, code.size()});
        bool has_header = seg_start > 0 && is_compound_keyword(toks[code[0]]) &&
                          (segments.empty() || segments.front().lo > 0);

        std::vector<bool> removed(segments.size(), false);
        for (std::size_t s = 0; s < segments.size(); ++s) {
            const auto& seg = segments[s];
            if (seg.lo >= seg.hi) continue;
            const Token& a = toks[code[seg.lo]];
            const Token& b = toks[code[seg.hi - 1]];
            if (matches_pattern(source.substr(a.offset, token_end(b) - a.offset), denylist)) removed[s] = true;
        }
        std::size_t n_removed = static_cast<std::size_t>(std::count(removed.begin(), removed.end(), true));
        if (n_removed == 0) continue;

        bool all_removed = n_removed == segments.size();
        if (all_removed && has_header) {
            // `if x: stmt` -> `if x: pass`
            const Token& a = toks[code[segments.front().lo]];
            const Token& b = toks[code[segments.back().hi - 1]];
            edits.push_back({a.offset, token_end(b), "pass"});
            continue;
        }
        if (all_removed) {
            // Sole statement of its block? (INDENT before, DEDENT after)
            bool indent_before = false;
            for (std::size_t k = first; k-- > 0;) {
                auto ty = toks[k].type;
                if (ty == TokenType::Comment || ty == TokenType::Nl) continue;
                indent_before = ty == TokenType::Indent;
                break;
            }
            bool dedent_after = false;
            for (std::size_t k = newline + 1; k < toks.size(); ++k) {
                auto ty = toks[k].type;
                if (ty == TokenType::Comment || ty == TokenType::Nl) continue;
                dedent_after = ty == TokenType::Dedent;
                break;
            }
            const Token& a = toks[code.front()];
            const Token& b = toks[code.back()];
            if (indent_before && dedent_after) {
                edits.push_back({a.offset, token_end(b), "pass"});
            } else {
                std::size_t begin = line_begin(source, a.offset);
                std::size_t end = token_end(b);
                while (end < source.size() && source[end] != '\n') ++end;
                if (end < source.size()) ++end;
                edits.push_back({begin, end, ""});
            }
            continue;
        }
        // Remove individual statements with one adjacent separator each.
        for (std::size_t s = 0; s < segments.size(); ++s) {
            if (!removed[s]) continue;
            const auto& seg = segments[s];
            std::size_t begin = toks[code[seg.lo]].offset;
            std::size_t end = token_end(toks[code[seg.hi - 1]]);
            if (seg.hi < code.size() && toks[code[seg.hi]].text == ";") {
                end = token_end(toks[code[seg.hi]]);
                while (end < source.size() && (source[end] == ' ' || source[end] == '\t')) ++end;
            } else if (seg.lo > 0 && toks[code[seg.lo - 1]].text == ";") {
                begin = toks[code[seg.lo - 1]].offset;
                while (begin > 0 && (source[begin - 1] == ' ' || source[begin - 1] == '\t')) --begin;
            }
            edits.push_back({begin, end, ""});
        }
    }

    std::sort(edits.begin(), edits.end(), [](const Edit& x, const Edit& y) { return x.begin < y.begin; });
    std::string out;
    std::size_t pos = 0;
    for (const Edit& e : edits) {
        if (e.begin < pos) {
            // Overlap (e.g. a trailing comment on a removed line).
            if (e.end > pos) pos = e.end;
            continue;
        }
        out.append(source.substr(pos, e.begin - pos));
        out += e.replacement;
        pos = std::max(pos, e.end);
    }
    out.append(source.substr(std::min(pos, source.size())));
    return out;
}

// ---------------------------------------------------------------------------
// ast_roundtrip

std::string ast_roundtrip(std::string_view source) { return unparse(parse_module(source)); }

// ---------------------------------------------------------------------------
// standardize_identifiers

namespace {

enum class Category { Variable, Function };

struct KeywordUse {
    std::size_t offset;
    std::string name;
    std::string callee;
};

class Binder {
public:
    void run(const Node& module) { walk_block(module, false); }

    std::unordered_map<std::string, Category> bound;
    std::set<std::string> class_level;
    std::set<std::string> imported;
    std::set<std::string> seen;  // every Name/Identifier text
    std::vector<std::pair<std::size_t, std::string>> occurrences;
    std::vector<KeywordUse> keywords;

private:
    void bind(const std::string& name, Category cat, bool in_class) {
        auto [it, inserted] = bound.emplace(name, cat);
        if (!inserted && cat == Category::Function) it->second = Category::Function;
        if (in_class) class_level.insert(name);
    }

    void occur(const Node& n) {
        seen.insert(n.text);
        if (n.offset != k_no_offset) occurrences.emplace_back(n.offset, n.text);
    }

    void bind_target(const Node& t, bool in_class) {
        switch (t.kind) {
            case Kind::Name:
                bind(t.text, Category::Variable, in_class);
                break;
            case Kind::Tuple:
            case Kind::List:
                for (const Node& e : t.kids) bind_target(e, in_class);
                break;
            case Kind::Starred:
                bind_target(t.kids[0], in_class);
                break;
            default:
                break;
        }
    }

    void walk_block(const Node& block, bool in_class) {
        for (const Node& s : block.kids) walk_stmt(s, in_class);
    }

    void walk_params(const Node& params, bool in_class) {
        for (const Node& p : params.kids) {
            if (!p.kids[0].empty()) {
                bind(p.kids[0].text, Category::Variable, false);
                occur(p.kids[0]);
            }
            walk_expr(p.kids[1], in_class);
            walk_expr(p.kids[2], in_class);
        }
    }

    void walk_stmt(const Node& s, bool in_class) {
        switch (s.kind) {
            case Kind::FunctionDef:
                bind(s.kids[0].text, Category::Function, in_class);
                occur(s.kids[0]);
                for (const Node& d : s.kids[1].kids) walk_expr(d, in_class);
                walk_params(s.kids[2], in_class);
                walk_expr(s.kids[3], in_class);
                walk_block(s.kids[4], false);
                return;
            case Kind::ClassDef:
                bind(s.kids[0].text, Category::Function, in_class);
                occur(s.kids[0]);
                for (const Node& d : s.kids[1].kids) walk_expr(d, in_class);
                for (const Node& b : s.kids[2].kids) walk_expr(b, in_class);
                walk_block(s.kids[3], true);
                return;
            case Kind::Assign:
                for (std::size_t i = 0; i + 1 < s.kids.size(); ++i) bind_target(s.kids[i], in_class);
                break;
            case Kind::AugAssign:
            case Kind::AnnAssign:
                bind_target(s.kids[0], in_class);
                break;
            case Kind::For:
                bind_target(s.kids[0], in_class);
                break;
            case Kind::With:
                for (std::size_t i = 0; i + 1 < s.kids.size(); ++i) bind_target(s.kids[i].kids[1], in_class);
                break;
            case Kind::ExceptHandler:
                if (!s.kids[1].empty()) {
                    bind(s.kids[1].text, Category::Variable, in_class);
                    occur(s.kids[1]);
                }
                walk_expr(s.kids[0], in_class);
                walk_block(s.kids[2], in_class);
                return;
            case Kind::Global:
            case Kind::Nonlocal:
                for (const Node& id : s.kids) occur(id);
                return;
            case Kind::Import:
                for (const Node& a : s.kids) {
                    std::string name = a.kids[0].empty() ? a.text.substr(0, a.text.find('.')) : a.kids[0].text;
                    imported.insert(name);
                    seen.insert(name);
                }
                return;
            case Kind::ImportFrom:
                for (const Node& a : s.kids) {
                    if (a.text == "*") continue;
                    std::string name = a.kids[0].empty() ? a.text : a.kids[0].text;
                    imported.insert(name);
                    seen.insert(name);
                }
                return;
            default:
                break;
        }
        for (const Node& k : s.kids) {
            if (k.kind == Kind::Block) walk_block(k, in_class);
            else if (k.kind == Kind::OrElse || k.kind == Kind::Finally) walk_block(k.kids[0], in_class);
            else if (k.kind == Kind::ExceptHandler) walk_stmt(k, in_class);
            else if (k.kind == Kind::WithItem) {
                walk_expr(k.kids[0], in_class);
                walk_expr(k.kids[1], in_class);
            } else walk_expr(k, in_class);
        }
    }

    void walk_comprehension_parts(const Node& e) {
        for (std::size_t i = 1; i < e.kids.size(); ++i) bind_target(e.kids[i].kids[0], false);
        for (const Node& k : e.kids) walk_expr(k, false);
    }

    void walk_expr(const Node& e, bool in_class) {
        switch (e.kind) {
            case Kind::Empty:
                return;
            case Kind::Name:
                occur(e);
                return;
            case Kind::Attribute:
                walk_expr(e.kids[0], in_class);
                return;
            case Kind::NamedExpr:
                bind(e.kids[0].text, Category::Variable, false);
                occur(e.kids[0]);
                walk_expr(e.kids[1], in_class);
                return;
            case Kind::Lambda:
                walk_params(e.kids[0], false);
                walk_expr(e.kids[1], false);
                return;
            case Kind::ListComp:
            case Kind::SetComp:
            case Kind::DictComp:
            case Kind::GeneratorExp:
                walk_comprehension_parts(e);
                return;
            case Kind::Call: {
                walk_expr(e.kids[0], in_class);
                // Keyword arguments follow the parameters of local callees,
                // including methods reached through an attribute.
                std::string callee;
                if (e.kids[0].kind == Kind::Name) callee = e.kids[0].text;
                else if (e.kids[0].kind == Kind::Attribute) callee = e.kids[0].kids[1].text;
                for (std::size_t i = 1; i < e.kids.size(); ++i) {
                    const Node& a = e.kids[i];
                    if (a.kind == Kind::Keyword) {
                        seen.insert(a.kids[0].text);
                        if (!callee.empty()) keywords.push_back({a.kids[0].offset, a.kids[0].text, callee});
                        walk_expr(a.kids[1], in_class);
                    } else {
                        walk_expr(a, in_class);
                    }
                }
                return;
            }
            case Kind::Keyword:
                walk_expr(e.kids[1], in_class);
                return;
            default:
                for (const Node& k : e.kids) walk_expr(k, in_class);
                return;
        }
    }
};

bool is_dunder(const std::string& name) {
    return name.size() > 4 && name.starts_with("__") && name.ends_with("__");
}

}  // namespace

NormalizedCode standardize_identifiers(std::string_view source) {
    Node module = parse_module(source);
    Binder binder;
    binder.run(module);

    std::set<std::string> renamable;
    for (const auto& [name, cat] : binder.bound) {
        if (lang::is_builtin(name) || binder.imported.contains(name) || binder.class_level.contains(name) ||
            is_dunder(name))
            continue;
        renamable.insert(name);
    }

    std::unordered_map<std::string, std::size_t> first_seen;
    for (const auto& [offset, name] : binder.occurrences) {
        if (!renamable.contains(name)) continue;
        auto [it, inserted] = first_seen.emplace(name, offset);
        if (!inserted) it->second = std::min(it->second, offset);
    }
    std::vector<std::pair<std::size_t, std::string>> order;
    for (const auto& [name, offset] : first_seen) order.emplace_back(offset, name);
    std::sort(order.begin(), order.end());

    std::set<std::string> reserved;
    for (const std::string& name : binder.seen)
        if (!renamable.contains(name)) reserved.insert(name);

    NormalizedCode result;
    int next_var = 1, next_func = 1;
    for (const auto& [offset, name] : order) {
        bool is_func = binder.bound.at(name) == Category::Function;
        int& counter = is_func ? next_func : next_var;
        std::string canon;
        do {
            canon = (is_func ? "func" : "var") + std::to_string(counter++);
        } while (reserved.contains(canon));
        result.rename_map.emplace(name, std::move(canon));
    }

    std::vector<std::pair<std::size_t, const std::string*>> replacements;
    for (const auto& [offset, name] : binder.occurrences) {
        auto it = result.rename_map.find(name);
        if (it != result.rename_map.end()) replacements.emplace_back(offset, &name);
    }
    for (const KeywordUse& kw : binder.keywords) {
        auto callee = binder.bound.find(kw.callee);
        if (callee == binder.bound.end() || callee->second != Category::Function ||
            !result.rename_map.contains(kw.name) || kw.offset == k_no_offset)
            continue;
        replacements.emplace_back(kw.offset, &kw.name);
    }
    std::sort(replacements.begin(), replacements.end());
    replacements.erase(std::unique(replacements.begin(), replacements.end(),
                                   [](const auto& a, const auto& b) { return a.first == b.first; }),
                       replacements.end());

    std::string out;
    out.reserve(source.size());
    std::size_t pos = 0;
    for (const auto& [offset, name] : replacements) {
        if (offset < pos || source.substr(offset, name->size()) != *name) continue;
        out.append(source.substr(pos, offset - pos));
        out += result.rename_map.at(*name);
        pos = offset + name->size();
    }
    out.append(source.substr(pos));
    result.source = std::move(out);
    result.compile_ok = true;
    return result;
}

NormalizedCode normalize(std::string_view source) {
    std::string stripped = strip_noise(source);
    try {
        return standardize_identifiers(ast_roundtrip(stripped));
    } catch (const CompileError&) {
        NormalizedCode failed;
        failed.source = std::move(stripped);
        failed.compile_ok = false;
        return failed;
    }
}

}  // namespace codeeff::pynorm
