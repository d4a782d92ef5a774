#include "codeeff/pynorm/unparse.hpp"

#include <cctype>

namespace codeeff::pynorm {
namespace {

enum Prec : int {
    P_NAMED = 0,
    P_TUPLE,
    P_YIELD,
    P_TEST,
    P_OR,
    P_AND,
    P_NOT,
    P_CMP,
    P_BOR,
    P_BXOR,
    P_BAND,
    P_SHIFT,
    P_ARITH,
    P_TERM,
    P_FACTOR,
    P_POWER,
    P_AWAIT,
    P_ATOM,
};

int binop_prec(const std::string& op) {
    if (op == "|") return P_BOR;
    if (op == "^") return P_BXOR;
    if (op == "&") return P_BAND;
    if (op == "<<" || op == ">>") return P_SHIFT;
    if (op == "+" || op == "-") return P_ARITH;
    if (op == "**") return P_POWER;
    return P_TERM;
}

int own_prec(const Node& n) {
    switch (n.kind) {
        case Kind::Tuple: return n.kids.size() >= 2 ? P_TUPLE : P_ATOM;
        case Kind::NamedExpr: return P_NAMED;
        case Kind::Yield:
        case Kind::YieldFrom: return P_YIELD;
        case Kind::IfExp:
        case Kind::Lambda: return P_TEST;
        case Kind::BoolOp: return n.text == "or" ? P_OR : P_AND;
        case Kind::UnaryOp: return n.text == "not" ? P_NOT : P_FACTOR;
        case Kind::Compare: return P_CMP;
        case Kind::BinOp: return binop_prec(n.text);
        default: return P_ATOM;
    }
}

bool is_int_literal(const Node& n) {
    if (n.kind != Kind::Constant || n.text.empty() || !std::isdigit(static_cast<unsigned char>(n.text[0])))
        return false;
    bool hex = n.text.size() > 1 && (n.text[1] == 'x' || n.text[1] == 'X');
    if (hex) return true;
    return n.text.find_first_of(".eEjJ") == std::string::npos;
}

class Unparser {
public:
    std::string statement_text(const Node& n) {
        stmt(n, 0);
        return std::move(out_);
    }

    std::string expr(const Node& n, int required) {
        std::string s = expr_raw(n);
        if (own_prec(n) < required) return "(" + s + ")";
        return s;
    }

private:
    void line(int level, const std::string& text) {
        out_.append(static_cast<std::size_t>(level) * 4, ' ');
        out_ += text;
        out_ += '\n';
    }

    void block(const Node& b, int level) {
        for (const Node& s : b.kids) stmt(s, level);
    }

    std::string join(const std::vector<Node>& nodes, std::size_t from, int required, const char* sep = ", ") {
        std::string s;
        for (std::size_t i = from; i < nodes.size(); ++i) {
            if (i > from) s += sep;
            s += element(nodes[i], required);
        }
        return s;
    }

    // Elements of displays and argument lists: starred forms are printed
    // with their prefix.
    std::string element(const Node& n, int required) {
        switch (n.kind) {
            case Kind::Starred: return "*" + expr(n.kids[0], P_BOR);
            case Kind::DoubleStarred: return "**" + expr(n.kids[0], P_BOR);
            case Kind::Keyword: return n.kids[0].text + "=" + expr(n.kids[1], P_TEST);
            case Kind::KeyValue: return expr(n.kids[0], P_TEST) + ": " + expr(n.kids[1], P_TEST);
            case Kind::Slice: return slice(n);
            default: return expr(n, required);
        }
    }

    std::string slice(const Node& n) {
        std::string s;
        if (!n.kids[0].empty()) s += expr(n.kids[0], P_TEST);
        s += ":";
        if (!n.kids[1].empty()) s += expr(n.kids[1], P_TEST);
        if (!n.kids[2].empty()) s += ":" + expr(n.kids[2], P_TEST);
        return s;
    }

    std::string params(const Node& p) {
        std::string s;
        for (std::size_t i = 0; i < p.kids.size(); ++i) {
            const Node& q = p.kids[i];
            if (i > 0) s += ", ";
            if (q.text == "/") {
                s += "/";
                continue;
            }
            s += q.text;
            if (!q.kids[0].empty()) s += q.kids[0].text;
            if (!q.kids[1].empty()) s += ": " + expr(q.kids[1], P_TEST);
            if (!q.kids[2].empty()) s += (q.kids[1].empty() ? "=" : " = ") + expr(q.kids[2], P_TEST);
        }
        return s;
    }

    std::string comprehension(const Node& c) {
        std::string s = " for " + expr(c.kids[0], P_TUPLE) + " in " + expr(c.kids[1], P_OR);
        for (std::size_t i = 2; i < c.kids.size(); ++i) s += " if " + expr(c.kids[i], P_OR);
        return s;
    }

    std::string comprehensions(const Node& n) {
        std::string s;
        for (std::size_t i = 1; i < n.kids.size(); ++i) s += comprehension(n.kids[i]);
        return s;
    }

    std::string fstring_parts(const std::vector<Node>& parts) {
        std::string s;
        for (const Node& p : parts) {
            if (p.kind == Kind::FLiteral) {
                s += p.text;
                continue;
            }
            // FField: [expr, FSpec|Empty, raw|Empty]
            s += "{";
            std::string suffix = p.text;
            if (!p.kids[2].empty()) {
                s += p.kids[2].text;
                suffix.erase(0, 1);
            } else {
                std::string e = expr(p.kids[0], P_OR);
                if (!e.empty() && e[0] == '{') s += ' ';
                s += e;
            }
            s += suffix;
            if (!p.kids[1].empty()) s += ":" + fstring_parts(p.kids[1].kids);
            s += "}";
        }
        return s;
    }

    std::string fstring(const Node& n) {
        std::size_t q = n.text.find_first_of("'\"");
        std::string quote = n.text.substr(q);
        return n.text + fstring_parts(n.kids) + quote;
    }

    std::string subscript_index(const Node& idx) {
        if (idx.kind == Kind::Tuple && !idx.kids.empty()) {
            std::string s = join(idx.kids, 0, P_TEST);
            if (idx.kids.size() == 1) s += ",";
            return s;
        }
        return element(idx, P_TEST);
    }

    std::string expr_raw(const Node& n) {
        switch (n.kind) {
            case Kind::Name:
            case Kind::Identifier:
            case Kind::Constant:
                return n.text;
            case Kind::Str: {
                std::string s;
                for (std::size_t i = 0; i < n.kids.size(); ++i) {
                    if (i > 0) s += " ";
                    s += n.kids[i].kind == Kind::FString ? fstring(n.kids[i]) : n.kids[i].text;
                }
                return s;
            }
            case Kind::FString:
                return fstring(n);
            case Kind::Tuple:
                if (n.kids.empty()) return "()";
                if (n.kids.size() == 1) return "(" + element(n.kids[0], P_TEST) + ",)";
                return join(n.kids, 0, P_TEST);
            case Kind::List:
                return "[" + join(n.kids, 0, P_TEST) + "]";
            case Kind::Set:
                return "{" + join(n.kids, 0, P_TEST) + "}";
            case Kind::Dict:
                return "{" + join(n.kids, 0, P_TEST) + "}";
            case Kind::Starred:
            case Kind::DoubleStarred:
            case Kind::Keyword:
            case Kind::KeyValue:
            case Kind::Slice:
                return element(n, P_TEST);
            case Kind::Attribute: {
                std::string base = expr(n.kids[0], P_ATOM);
                if (is_int_literal(n.kids[0])) base = "(" + base + ")";
                return base + "." + n.kids[1].text;
            }
            case Kind::Subscript:
                return expr(n.kids[0], P_ATOM) + "[" + subscript_index(n.kids[1]) + "]";
            case Kind::Call:
                return expr(n.kids[0], P_ATOM) + "(" + join(n.kids, 1, P_TEST) + ")";
            case Kind::BinOp: {
                int p = binop_prec(n.text);
                if (n.text == "**")
                    return expr(n.kids[0], P_AWAIT) + " ** " + expr(n.kids[1], P_FACTOR);
                return expr(n.kids[0], p) + " " + n.text + " " + expr(n.kids[1], p + 1);
            }
            case Kind::UnaryOp:
                if (n.text == "not") return "not " + expr(n.kids[0], P_NOT);
                return n.text + expr(n.kids[0], P_FACTOR);
            case Kind::BoolOp: {
                int p = own_prec(n) + 1;
                std::string sep = " " + n.text + " ";
                std::string s;
                for (std::size_t i = 0; i < n.kids.size(); ++i) {
                    if (i > 0) s += sep;
                    s += expr(n.kids[i], p);
                }
                return s;
            }
            case Kind::Compare: {
                std::string s = expr(n.kids[0], P_BOR);
                for (std::size_t i = 1; i + 1 < n.kids.size(); i += 2)
                    s += " " + n.kids[i].text + " " + expr(n.kids[i + 1], P_BOR);
                return s;
            }
            case Kind::IfExp:
                return expr(n.kids[0], P_OR) + " if " + expr(n.kids[1], P_OR) + " else " + expr(n.kids[2], P_TEST);
            case Kind::Lambda: {
                std::string ps = params(n.kids[0]);
                return "lambda" + (ps.empty() ? "" : " " + ps) + ": " + expr(n.kids[1], P_TEST);
            }
            case Kind::NamedExpr:
                return n.kids[0].text + " := " + expr(n.kids[1], P_TEST);
            case Kind::ListComp:
                return "[" + expr(n.kids[0], P_TEST) + comprehensions(n) + "]";
            case Kind::SetComp:
                return "{" + expr(n.kids[0], P_TEST) + comprehensions(n) + "}";
            case Kind::GeneratorExp:
                return "(" + expr(n.kids[0], P_TEST) + comprehensions(n) + ")";
            case Kind::DictComp:
                return "{" + element(n.kids[0], P_TEST) + comprehensions(n) + "}";
            case Kind::Yield:
                return n.kids[0].empty() ? "yield" : "yield " + expr(n.kids[0], P_TUPLE);
            case Kind::YieldFrom:
                return "yield from " + expr(n.kids[0], P_TEST);
            default:
                return "<" + std::string(to_string(n.kind)) + ">";
        }
    }

    void orelse(const Node& n, int level) {
        line(level, "else:");
        block(n.kids[0], level + 1);
    }

    void stmt(const Node& n, int level) {
        switch (n.kind) {
            case Kind::Module:
            case Kind::Block:
                block(n, level);
                return;
            case Kind::ExprStmt:
                line(level, expr(n.kids[0], P_TUPLE));
                return;
            case Kind::Assign: {
                std::string s;
                for (std::size_t i = 0; i + 1 < n.kids.size(); ++i) s += expr(n.kids[i], P_TUPLE) + " = ";
                line(level, s + expr(n.kids.back(), P_TUPLE));
                return;
            }
            case Kind::AugAssign:
                line(level, expr(n.kids[0], P_TUPLE) + " " + n.text + " " + expr(n.kids[1], P_TUPLE));
                return;
            case Kind::AnnAssign: {
                std::string s = expr(n.kids[0], P_ATOM) + ": " + expr(n.kids[1], P_TEST);
                if (!n.kids[2].empty()) s += " = " + expr(n.kids[2], P_TUPLE);
                line(level, s);
                return;
            }
            case Kind::Return:
                line(level, n.kids[0].empty() ? "return" : "return " + expr(n.kids[0], P_TUPLE));
                return;
            case Kind::Delete:
                line(level, "del " + join(n.kids, 0, P_TEST));
                return;
            case Kind::Pass: line(level, "pass"); return;
            case Kind::Break: line(level, "break"); return;
            case Kind::Continue: line(level, "continue"); return;
            case Kind::Global:
            case Kind::Nonlocal: {
                std::string s = n.kind == Kind::Global ? "global " : "nonlocal ";
                for (std::size_t i = 0; i < n.kids.size(); ++i) s += (i ? ", " : "") + n.kids[i].text;
                line(level, s);
                return;
            }
            case Kind::Import:
            case Kind::ImportFrom: {
                std::string s = n.kind == Kind::Import ? "import " : "from " + n.text + " import ";
                for (std::size_t i = 0; i < n.kids.size(); ++i) {
                    const Node& a = n.kids[i];
                    s += (i ? ", " : "") + a.text;
                    if (!a.kids[0].empty()) s += " as " + a.kids[0].text;
                }
                line(level, s);
                return;
            }
            case Kind::Raise: {
                std::string s = "raise";
                if (!n.kids[0].empty()) s += " " + expr(n.kids[0], P_TEST);
                if (!n.kids[1].empty()) s += " from " + expr(n.kids[1], P_TEST);
                line(level, s);
                return;
            }
            case Kind::Assert: {
                std::string s = "assert " + expr(n.kids[0], P_TEST);
                if (!n.kids[1].empty()) s += ", " + expr(n.kids[1], P_TEST);
                line(level, s);
                return;
            }
            case Kind::If: {
                const Node* cur = &n;
                line(level, "if " + expr(cur->kids[0], P_TEST) + ":");
                while (true) {
                    block(cur->kids[1], level + 1);
                    if (cur->kids.size() < 3) break;
                    const Node& body = cur->kids[2].kids[0];
                    if (body.kids.size() == 1 && body.kids[0].kind == Kind::If) {
                        cur = &body.kids[0];
                        line(level, "elif " + expr(cur->kids[0], P_TEST) + ":");
                        continue;
                    }
                    orelse(cur->kids[2], level);
                    break;
                }
                return;
            }
            case Kind::While:
                line(level, "while " + expr(n.kids[0], P_TEST) + ":");
                block(n.kids[1], level + 1);
                if (n.kids.size() > 2) orelse(n.kids[2], level);
                return;
            case Kind::For:
                line(level, "for " + expr(n.kids[0], P_TUPLE) + " in " + expr(n.kids[1], P_TUPLE) + ":");
                block(n.kids[2], level + 1);
                if (n.kids.size() > 3) orelse(n.kids[3], level);
                return;
            case Kind::FunctionDef: {
                for (const Node& d : n.kids[1].kids) line(level, "@" + expr(d, P_TEST));
                std::string s = "def " + n.kids[0].text + "(" + params(n.kids[2]) + ")";
                if (!n.kids[3].empty()) s += " -> " + expr(n.kids[3], P_TEST);
                line(level, s + ":");
                block(n.kids[4], level + 1);
                return;
            }
            case Kind::ClassDef: {
                for (const Node& d : n.kids[1].kids) line(level, "@" + expr(d, P_TEST));
                std::string s = "class " + n.kids[0].text;
                if (!n.kids[2].kids.empty()) s += "(" + join(n.kids[2].kids, 0, P_TEST) + ")";
                line(level, s + ":");
                block(n.kids[3], level + 1);
                return;
            }
            case Kind::Try: {
                line(level, "try:");
                block(n.kids[0], level + 1);
                for (std::size_t i = 1; i < n.kids.size(); ++i) {
                    const Node& k = n.kids[i];
                    if (k.kind == Kind::ExceptHandler) {
                        std::string s = "except";
                        if (!k.kids[0].empty()) s += " " + expr(k.kids[0], P_TEST);
                        if (!k.kids[1].empty()) s += " as " + k.kids[1].text;
                        line(level, s + ":");
                        block(k.kids[2], level + 1);
                    } else if (k.kind == Kind::OrElse) {
                        orelse(k, level);
                    } else {
                        line(level, "finally:");
                        block(k.kids[0], level + 1);
                    }
                }
                return;
            }
            case Kind::With: {
                std::string s = "with ";
                for (std::size_t i = 0; i + 1 < n.kids.size(); ++i) {
                    const Node& item = n.kids[i];
                    if (i > 0) s += ", ";
                    s += expr(item.kids[0], P_TEST);
                    if (!item.kids[1].empty()) s += " as " + expr(item.kids[1], P_TEST);
                }
                line(level, s + ":");
                block(n.kids.back(), level + 1);
                return;
            }
            default:
                line(level, expr(n, P_TUPLE));
                return;
        }
    }

    std::string out_;
};

}  // namespace

std::string unparse(const Node& node) { return Unparser().statement_text(node); }

std::string unparse_expression(const Node& node) { return Unparser().expr(node, P_TUPLE); }

}  // namespace codeeff::pynorm
