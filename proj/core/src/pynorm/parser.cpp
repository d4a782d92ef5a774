#include "codeeff/pynorm/parser.hpp"

#include <algorithm>
#include <cctype>

#include "codeeff/language_data.hpp"
#include "codeeff/pynorm/lexer.hpp"

namespace codeeff::pynorm {
namespace {

bool is_aug_op(std::string_view op) {
    return op == "+=" || op == "-=" || op == "*=" || op == "/=" || op == "//=" || op == "%=" ||
           op == "**=" || op == ">>=" || op == "<<=" || op == "&=" || op == "|=" || op == "^=" ||
           op == "@=";
}

Node empty() { return Node(Kind::Empty); }

class Parser {
public:
    Parser(std::vector<Token> tokens, bool fragment) : fragment_(fragment) {
        toks_.reserve(tokens.size());
        for (Token& t : tokens)
            if (t.type != TokenType::Comment && t.type != TokenType::Nl) toks_.push_back(std::move(t));
    }

    Node module() {
        Node mod(Kind::Module);
        while (!at(TokenType::EndMarker)) {
            if (accept_type(TokenType::Newline)) continue;
            if (at(TokenType::Indent)) fail("unexpected indent");
            statement(mod.kids);
        }
        return mod;
    }

    Node fragment_expression() {
        if (at(TokenType::EndMarker)) fail("empty expression not allowed in f-string");
        Node e = is_kw("yield") ? yield_expr() : star_expressions();
        if (!at(TokenType::EndMarker)) fail("invalid syntax in f-string expression");
        return e;
    }

private:
    // ---- token helpers -------------------------------------------------
    const Token& cur() const { return toks_[std::min(i_, toks_.size() - 1)]; }
    const Token& peek(std::size_t k = 1) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    bool at(TokenType t) const { return cur().type == t; }
    bool is_op(std::string_view s) const { return cur().type == TokenType::Op && cur().text == s; }
    bool is_kw(std::string_view s) const { return cur().type == TokenType::Name && cur().text == s; }
    bool is_plain_name() const { return cur().type == TokenType::Name && !lang::is_keyword(cur().text); }
    void bump() {
        if (i_ < toks_.size() - 1) ++i_;
    }
    bool accept_type(TokenType t) {
        if (!at(t)) return false;
        bump();
        return true;
    }
    bool accept_op(std::string_view s) {
        if (!is_op(s)) return false;
        bump();
        return true;
    }
    bool accept_kw(std::string_view s) {
        if (!is_kw(s)) return false;
        bump();
        return true;
    }
    void expect_op(std::string_view s) {
        if (!accept_op(s)) fail("expected '" + std::string(s) + "'");
    }
    void expect_kw(std::string_view s) {
        if (!accept_kw(s)) fail("expected '" + std::string(s) + "'");
    }
    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = cur();
        std::string what = message;
        if (t.type == TokenType::EndMarker) what += " at end of input";
        else if (!t.text.empty() && t.text != "\n") what += " near '" + t.text + "'";
        throw CompileError(what, t.line, t.col);
    }
    [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
        throw CompileError(message, t.line, t.col);
    }

    Node identifier() {
        if (!is_plain_name()) fail("expected identifier");
        Node n(Kind::Identifier, cur().text);
        n.offset = cur().offset;
        bump();
        return n;
    }

    bool starts_expression() const {
        const Token& t = cur();
        switch (t.type) {
            case TokenType::Name:
                return !lang::is_keyword(t.text) || t.text == "True" || t.text == "False" || t.text == "None" ||
                       t.text == "not" || t.text == "lambda" || t.text == "yield";
            case TokenType::Number:
            case TokenType::String:
                return true;
            case TokenType::Op:
                return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" ||
                       t.text == "~" || t.text == "*" || t.text == "..." || t.text == "**";
            default:
                return false;
        }
    }

    // ---- statements ----------------------------------------------------
    void statement(std::vector<Node>& out) {
        if (is_op("@")) {
            out.push_back(decorated());
            return;
        }
        if (cur().type == TokenType::Name) {
            const std::string& w = cur().text;
            if (w == "if") { out.push_back(if_stmt()); return; }
            if (w == "while") { out.push_back(while_stmt()); return; }
            if (w == "for") { out.push_back(for_stmt()); return; }
            if (w == "try") { out.push_back(try_stmt()); return; }
            if (w == "with") { out.push_back(with_stmt()); return; }
            if (w == "def") { out.push_back(funcdef(Node(Kind::Decorators))); return; }
            if (w == "class") { out.push_back(classdef(Node(Kind::Decorators))); return; }
            if (w == "async" || w == "await") fail("async constructs are not supported");
        }
        simple_stmts(out);
    }

    void simple_stmts(std::vector<Node>& out) {
        out.push_back(simple_stmt());
        while (accept_op(";")) {
            if (at(TokenType::Newline) || at(TokenType::EndMarker)) break;
            out.push_back(simple_stmt());
        }
        if (!accept_type(TokenType::Newline) && !at(TokenType::EndMarker)) fail("invalid syntax");
    }

    Node simple_stmt() {
        if (cur().type == TokenType::Name) {
            const Token& kw = cur();
            const std::string& w = kw.text;
            if (w == "pass") { bump(); return Node(Kind::Pass); }
            if (w == "break") {
                if (loop_depth_ == 0) fail_at(kw, "'break' outside loop");
                bump();
                return Node(Kind::Break);
            }
            if (w == "continue") {
                if (loop_depth_ == 0) fail_at(kw, "'continue' not properly in loop");
                bump();
                return Node(Kind::Continue);
            }
            if (w == "return") {
                if (func_depth_ == 0) fail_at(kw, "'return' outside function");
                bump();
                Node value = (at(TokenType::Newline) || at(TokenType::EndMarker) || is_op(";")) ? empty()
                                                                                            : star_expressions();
                return Node(Kind::Return, {}, {std::move(value)});
            }
            if (w == "raise") {
                bump();
                Node exc = empty(), cause = empty();
                if (starts_expression() && !is_op("*") && !is_op("**")) {
                    exc = expression();
                    if (accept_kw("from")) cause = expression();
                }
                return Node(Kind::Raise, {}, {std::move(exc), std::move(cause)});
            }
            if (w == "global" || w == "nonlocal") {
                if (w == "nonlocal" && func_depth_ == 0) fail_at(kw, "nonlocal declaration not allowed at module level");
                Node n(w == "global" ? Kind::Global : Kind::Nonlocal);
                bump();
                n.kids.push_back(identifier());
                while (accept_op(",")) n.kids.push_back(identifier());
                return n;
            }
            if (w == "del") {
                bump();
                Node n(Kind::Delete);
                do {
                    if (at(TokenType::Newline) || is_op(";")) break;
                    Node t = bitor_expr();
                    check_target(t, TargetUse::Delete);
                    n.kids.push_back(std::move(t));
                } while (accept_op(","));
                if (n.kids.empty()) fail("invalid syntax");
                return n;
            }
            if (w == "assert") {
                bump();
                Node test = expression();
                Node msg = accept_op(",") ? expression() : empty();
                return Node(Kind::Assert, {}, {std::move(test), std::move(msg)});
            }
            if (w == "import") return import_stmt();
            if (w == "from") return from_stmt();
        }
        return expr_or_assign();
    }

    Node expr_or_assign() {
        Node first = is_kw("yield") ? yield_expr() : star_expressions();
        if (is_op("=")) {
            std::vector<Node> parts{std::move(first)};
            while (accept_op("=")) parts.push_back(is_kw("yield") ? yield_expr() : star_expressions());
            for (std::size_t k = 0; k + 1 < parts.size(); ++k) check_target(parts[k], TargetUse::Assign);
            return Node(Kind::Assign, {}, std::move(parts));
        }
        if (cur().type == TokenType::Op && is_aug_op(cur().text)) {
            std::string op = cur().text;
            check_target(first, TargetUse::Augmented);
            bump();
            Node value = is_kw("yield") ? yield_expr() : star_expressions();
            return Node(Kind::AugAssign, std::move(op), {std::move(first), std::move(value)});
        }
        if (is_op(":")) {
            if (first.kind != Kind::Name && first.kind != Kind::Attribute && first.kind != Kind::Subscript)
                fail("only single target can be annotated");
            bump();
            Node annotation = expression();
            Node value = empty();
            if (accept_op("=")) value = is_kw("yield") ? yield_expr() : star_expressions();
            return Node(Kind::AnnAssign, {}, {std::move(first), std::move(annotation), std::move(value)});
        }
        if (first.kind == Kind::Starred) fail("can't use starred expression here");
        return Node(Kind::ExprStmt, {}, {std::move(first)});
    }

    Node dotted_name() {
        std::string name = identifier().text;
        while (accept_op(".")) name += "." + identifier().text;
        return Node(Kind::Identifier, std::move(name));
    }

    Node import_stmt() {
        expect_kw("import");
        Node n(Kind::Import);
        do {
            Node alias(Kind::Alias, dotted_name().text);
            alias.kids.push_back(accept_kw("as") ? identifier() : empty());
            n.kids.push_back(std::move(alias));
        } while (accept_op(","));
        return n;
    }

    Node from_stmt() {
        expect_kw("from");
        std::string module;
        while (true) {
            if (accept_op(".")) module += ".";
            else if (accept_op("...")) module += "...";
            else break;
        }
        if (is_plain_name()) module += dotted_name().text;
        if (module.empty()) fail("invalid syntax");
        expect_kw("import");
        Node n(Kind::ImportFrom, std::move(module));
        if (accept_op("*")) {
            n.kids.push_back(Node(Kind::Alias, "*", {empty()}));
            return n;
        }
        bool paren = accept_op("(");
        do {
            if (paren && is_op(")")) break;
            Node alias(Kind::Alias, identifier().text);
            alias.kids.push_back(accept_kw("as") ? identifier() : empty());
            n.kids.push_back(std::move(alias));
        } while (accept_op(","));
        if (paren) expect_op(")");
        if (n.kids.empty()) fail("invalid syntax");
        return n;
    }

    Node block() {
        Node body(Kind::Block);
        if (accept_type(TokenType::Newline)) {
            if (!accept_type(TokenType::Indent)) fail("expected an indented block");
            while (!accept_type(TokenType::Dedent)) {
                if (at(TokenType::EndMarker)) break;
                if (accept_type(TokenType::Newline)) continue;
                if (at(TokenType::Indent)) fail("unexpected indent");
                statement(body.kids);
            }
        } else {
            simple_stmts(body.kids);
        }
        if (body.kids.empty()) fail("expected an indented block");
        return body;
    }

    Node if_stmt() {
        bump();  // if / elif
        Node test = named_expression();
        expect_op(":");
        Node n(Kind::If, {}, {std::move(test), block()});
        if (is_kw("elif")) {
            Node inner = if_stmt();
            n.kids.push_back(Node(Kind::OrElse, {}, {Node(Kind::Block, {}, {std::move(inner)})}));
        } else if (accept_kw("else")) {
            expect_op(":");
            n.kids.push_back(Node(Kind::OrElse, {}, {block()}));
        }
        return n;
    }

    Node loop_body() {
        ++loop_depth_;
        Node body = block();
        --loop_depth_;
        return body;
    }

    Node while_stmt() {
        expect_kw("while");
        Node test = named_expression();
        expect_op(":");
        Node n(Kind::While, {}, {std::move(test), loop_body()});
        if (accept_kw("else")) {
            expect_op(":");
            n.kids.push_back(Node(Kind::OrElse, {}, {block()}));
        }
        return n;
    }

    Node for_stmt() {
        expect_kw("for");
        Node target = target_list();
        expect_kw("in");
        Node iter = star_expressions();
        expect_op(":");
        Node n(Kind::For, {}, {std::move(target), std::move(iter), loop_body()});
        if (accept_kw("else")) {
            expect_op(":");
            n.kids.push_back(Node(Kind::OrElse, {}, {block()}));
        }
        return n;
    }

    Node try_stmt() {
        expect_kw("try");
        expect_op(":");
        Node n(Kind::Try, {}, {block()});
        bool handlers = false;
        while (is_kw("except")) {
            bump();
            handlers = true;
            Node type = empty(), name = empty();
            if (!is_op(":")) {
                type = expression();
                if (accept_op(",")) {
                    std::vector<Node> elts{std::move(type)};
                    do {
                        if (is_op(":") || is_kw("as")) break;
                        elts.push_back(expression());
                    } while (accept_op(","));
                    type = Node(Kind::Tuple, {}, std::move(elts));
                }
                if (accept_kw("as")) name = identifier();
            }
            expect_op(":");
            n.kids.push_back(Node(Kind::ExceptHandler, {}, {std::move(type), std::move(name), block()}));
        }
        bool tail = false;
        if (handlers && accept_kw("else")) {
            expect_op(":");
            n.kids.push_back(Node(Kind::OrElse, {}, {block()}));
        }
        if (accept_kw("finally")) {
            expect_op(":");
            n.kids.push_back(Node(Kind::Finally, {}, {block()}));
            tail = true;
        }
        if (!handlers && !tail) fail("expected 'except' or 'finally' block");
        return n;
    }

    Node with_stmt() {
        expect_kw("with");
        Node n(Kind::With);
        do {
            Node ctx = expression();
            Node target = empty();
            if (accept_kw("as")) {
                target = star_target();
                check_target(target, TargetUse::Assign);
            }
            n.kids.push_back(Node(Kind::WithItem, {}, {std::move(ctx), std::move(target)}));
        } while (accept_op(","));
        expect_op(":");
        n.kids.push_back(block());
        return n;
    }

    Node decorated() {
        Node decorators(Kind::Decorators);
        while (accept_op("@")) {
            decorators.kids.push_back(named_expression());
            if (!accept_type(TokenType::Newline)) fail("invalid syntax");
        }
        if (is_kw("def")) return funcdef(std::move(decorators));
        if (is_kw("class")) return classdef(std::move(decorators));
        fail("expected function or class definition after decorator");
    }

    Node funcdef(Node decorators) {
        expect_kw("def");
        Node name = identifier();
        expect_op("(");
        Node params = parameters(")", true);
        expect_op(")");
        Node returns = accept_op("->") ? expression() : empty();
        expect_op(":");
        ++func_depth_;
        int saved_loops = loop_depth_;
        loop_depth_ = 0;
        Node body = block();
        loop_depth_ = saved_loops;
        --func_depth_;
        return Node(Kind::FunctionDef, {},
                    {std::move(name), std::move(decorators), std::move(params), std::move(returns), std::move(body)});
    }

    Node classdef(Node decorators) {
        expect_kw("class");
        Node name = identifier();
        Node bases(Kind::Arguments);
        if (accept_op("(")) {
            bases.kids = call_arguments();
            expect_op(")");
        }
        expect_op(":");
        int saved_loops = loop_depth_, saved_funcs = func_depth_;
        loop_depth_ = 0;
        func_depth_ = 0;
        Node body = block();
        loop_depth_ = saved_loops;
        func_depth_ = saved_funcs;
        return Node(Kind::ClassDef, {}, {std::move(name), std::move(decorators), std::move(bases), std::move(body)});
    }

    // Parameter list up to (not including) `closer`.
    Node parameters(std::string_view closer, bool annotations) {
        Node params(Kind::Params);
        bool seen_star = false, seen_kwargs = false, seen_default = false;
        while (!is_op(closer)) {
            if (seen_kwargs) fail("arguments cannot follow var-keyword argument");
            if (accept_op("/")) {
                if (seen_star || params.kids.empty()) fail("invalid syntax");
                params.kids.push_back(Node(Kind::Param, "/", {empty(), empty(), empty()}));
            } else if (accept_op("**")) {
                Node name = identifier();
                Node ann = (annotations && accept_op(":")) ? expression() : empty();
                params.kids.push_back(Node(Kind::Param, "**", {std::move(name), std::move(ann), empty()}));
                seen_kwargs = true;
            } else if (accept_op("*")) {
                if (seen_star) fail("* argument may appear only once");
                seen_star = true;
                if (is_op(",") || is_op(closer)) {
                    params.kids.push_back(Node(Kind::Param, "*", {empty(), empty(), empty()}));
                } else {
                    Node name = identifier();
                    Node ann = (annotations && accept_op(":")) ? expression() : empty();
                    params.kids.push_back(Node(Kind::Param, "*", {std::move(name), std::move(ann), empty()}));
                }
            } else {
                Node name = identifier();
                Node ann = (annotations && accept_op(":")) ? expression() : empty();
                Node def = empty();
                if (accept_op("=")) {
                    def = expression();
                    seen_default = true;
                } else if (seen_default && !seen_star) {
                    fail("non-default argument follows default argument");
                }
                params.kids.push_back(Node(Kind::Param, "", {std::move(name), std::move(ann), std::move(def)}));
            }
            if (!accept_op(",")) break;
        }
        return params;
    }

    // ---- targets -----------------------------------------------------
    enum class TargetUse { Assign, Augmented, Delete };

    void check_target(const Node& t, TargetUse use) const {
        switch (t.kind) {
            case Kind::Name:
            case Kind::Attribute:
            case Kind::Subscript:
                return;
            case Kind::Tuple:
            case Kind::List:
                if (use == TargetUse::Augmented) break;
                {
                    int stars = 0;
                    for (const Node& e : t.kids) {
                        if (e.kind == Kind::Starred) {
                            if (use == TargetUse::Delete) bad_target();
                            ++stars;
                            check_target(e.kids[0], use);
                        } else {
                            check_target(e, use);
                        }
                    }
                    if (stars > 1) throw CompileError("multiple starred expressions in assignment", cur().line, cur().col);
                }
                return;
            default:
                break;
        }
        bad_target();
    }

    [[noreturn]] void bad_target() const { fail("cannot assign to expression"); }

    Node star_target() {
        if (accept_op("*")) return Node(Kind::Starred, {}, {bitor_expr()});
        return bitor_expr();
    }

    // Comma-separated targets of for loops and comprehensions.
    Node target_list() {
        Node first = star_target();
        if (!is_op(",")) {
            check_target(first, TargetUse::Assign);
            return first;
        }
        std::vector<Node> elts{std::move(first)};
        while (accept_op(",")) {
            if (is_kw("in")) break;
            elts.push_back(star_target());
        }
        Node t(Kind::Tuple, {}, std::move(elts));
        check_target(t, TargetUse::Assign);
        return t;
    }

    // ---- expressions -------------------------------------------------
    Node star_expressions() {
        Node first = star_expression();
        if (!is_op(",")) return first;
        std::vector<Node> elts{std::move(first)};
        while (accept_op(",")) {
            if (!starts_expression() || is_op("**")) break;
            elts.push_back(star_expression());
        }
        return Node(Kind::Tuple, {}, std::move(elts));
    }

    Node star_expression() {
        if (accept_op("*")) return Node(Kind::Starred, {}, {bitor_expr()});
        return expression();
    }

    Node star_named_expression() {
        if (accept_op("*")) return Node(Kind::Starred, {}, {bitor_expr()});
        return named_expression();
    }

    Node named_expression() {
        if (is_plain_name() && peek().type == TokenType::Op && peek().text == ":=") {
            Node target(Kind::Name, cur().text);
            target.offset = cur().offset;
            bump();
            bump();
            Node value = expression();
            return Node(Kind::NamedExpr, {}, {std::move(target), std::move(value)});
        }
        Node e = expression();
        if (is_op(":=")) fail("cannot use assignment expressions with this target");
        return e;
    }

    Node expression() {
        if (is_kw("lambda")) return lambda();
        Node body = disjunction();
        if (accept_kw("if")) {
            Node test = disjunction();
            expect_kw("else");
            Node orelse = expression();
            return Node(Kind::IfExp, {}, {std::move(body), std::move(test), std::move(orelse)});
        }
        return body;
    }

    Node expression_nocond() {
        if (is_kw("lambda")) return lambda(false);
        return disjunction();
    }

    Node lambda(bool allow_cond = true) {
        expect_kw("lambda");
        Node params = parameters(":", false);
        expect_op(":");
        ++func_depth_;
        Node body = allow_cond ? expression() : expression_nocond();
        --func_depth_;
        return Node(Kind::Lambda, {}, {std::move(params), std::move(body)});
    }

    Node disjunction() {
        Node first = conjunction();
        if (!is_kw("or")) return first;
        Node n(Kind::BoolOp, "or", {std::move(first)});
        while (accept_kw("or")) n.kids.push_back(conjunction());
        return n;
    }

    Node conjunction() {
        Node first = inversion();
        if (!is_kw("and")) return first;
        Node n(Kind::BoolOp, "and", {std::move(first)});
        while (accept_kw("and")) n.kids.push_back(inversion());
        return n;
    }

    Node inversion() {
        if (accept_kw("not")) return Node(Kind::UnaryOp, "not", {inversion()});
        return comparison();
    }

    bool comparison_op(std::string& op) {
        const Token& t = cur();
        if (t.type == TokenType::Op &&
            (t.text == "==" || t.text == "!=" || t.text == "<" || t.text == ">" || t.text == "<=" || t.text == ">=")) {
            op = t.text;
            bump();
            return true;
        }
        if (t.type != TokenType::Name) return false;
        if (t.text == "in") {
            op = "in";
            bump();
            return true;
        }
        if (t.text == "not" && peek().type == TokenType::Name && peek().text == "in") {
            op = "not in";
            bump();
            bump();
            return true;
        }
        if (t.text == "is") {
            bump();
            op = accept_kw("not") ? "is not" : "is";
            return true;
        }
        return false;
    }

    Node comparison() {
        Node first = bitor_expr();
        std::string op;
        if (!comparison_op(op)) return first;
        Node n(Kind::Compare, {}, {std::move(first)});
        do {
            n.kids.push_back(Node(Kind::CmpOp, op));
            n.kids.push_back(bitor_expr());
        } while (comparison_op(op));
        return n;
    }

    template <typename Next>
    Node binary_level(std::initializer_list<std::string_view> ops, Next next) {
        Node left = (this->*next)();
        while (cur().type == TokenType::Op &&
               std::find(ops.begin(), ops.end(), std::string_view(cur().text)) != ops.end()) {
            std::string op = cur().text;
            bump();
            Node right = (this->*next)();
            left = Node(Kind::BinOp, std::move(op), {std::move(left), std::move(right)});
        }
        return left;
    }

    Node bitor_expr() { return binary_level({"|"}, &Parser::bitxor_expr); }
    Node bitxor_expr() { return binary_level({"^"}, &Parser::bitand_expr); }
    Node bitand_expr() { return binary_level({"&"}, &Parser::shift_expr); }
    Node shift_expr() { return binary_level({"<<", ">>"}, &Parser::sum_expr); }
    Node sum_expr() { return binary_level({"+", "-"}, &Parser::term_expr); }
    Node term_expr() { return binary_level({"*", "/", "//", "%", "@"}, &Parser::factor); }

    Node factor() {
        if (is_op("-") || is_op("+") || is_op("~")) {
            std::string op = cur().text;
            bump();
            return Node(Kind::UnaryOp, std::move(op), {factor()});
        }
        return power();
    }

    Node power() {
        Node base = primary();
        if (accept_op("**")) return Node(Kind::BinOp, "**", {std::move(base), factor()});
        return base;
    }

    Node primary() {
        Node node = atom();
        while (true) {
            if (accept_op(".")) {
                Node attr = identifier();
                node = Node(Kind::Attribute, {}, {std::move(node), std::move(attr)});
            } else if (accept_op("(")) {
                Node call(Kind::Call, {}, {std::move(node)});
                for (Node& a : call_arguments()) call.kids.push_back(std::move(a));
                expect_op(")");
                node = std::move(call);
            } else if (accept_op("[")) {
                Node index = slices();
                expect_op("]");
                node = Node(Kind::Subscript, {}, {std::move(node), std::move(index)});
            } else {
                return node;
            }
        }
    }

    std::vector<Node> call_arguments() {
        std::vector<Node> args;
        bool seen_keyword = false, seen_kwargs = false;
        while (!is_op(")")) {
            if (accept_op("*")) {
                if (seen_kwargs) fail("iterable argument unpacking follows keyword argument unpacking");
                args.push_back(Node(Kind::Starred, {}, {expression()}));
            } else if (accept_op("**")) {
                seen_kwargs = true;
                args.push_back(Node(Kind::DoubleStarred, {}, {expression()}));
            } else if (is_plain_name() && peek().type == TokenType::Op && peek().text == "=") {
                Node name = identifier();
                bump();
                seen_keyword = true;
                args.push_back(Node(Kind::Keyword, {}, {std::move(name), expression()}));
            } else {
                if (seen_keyword || seen_kwargs) fail("positional argument follows keyword argument");
                Node e = named_expression();
                if (is_kw("for")) {
                    Node gen(Kind::GeneratorExp, {}, {std::move(e)});
                    comprehensions(gen.kids);
                    if (!args.empty() || !is_op(")")) fail("Generator expression must be parenthesized");
                    args.push_back(std::move(gen));
                    break;
                }
                args.push_back(std::move(e));
            }
            if (!accept_op(",")) break;
        }
        return args;
    }

    Node slices() {
        Node first = slice_item();
        if (!is_op(",")) return first;
        std::vector<Node> elts{std::move(first)};
        while (accept_op(",")) {
            if (is_op("]")) break;
            elts.push_back(slice_item());
        }
        return Node(Kind::Tuple, {}, std::move(elts));
    }

    Node slice_item() {
        Node lower = empty();
        if (!is_op(":")) {
            if (is_op("*")) return star_named_expression();
            lower = named_expression();
            if (!is_op(":")) return lower;
        }
        expect_op(":");
        Node upper = (is_op(":") || is_op("]") || is_op(",")) ? empty() : expression();
        Node step = empty();
        if (accept_op(":")) step = (is_op("]") || is_op(",")) ? empty() : expression();
        return Node(Kind::Slice, {}, {std::move(lower), std::move(upper), std::move(step)});
    }

    void comprehensions(std::vector<Node>& out) {
        while (accept_kw("for")) {
            Node target = target_list();
            expect_kw("in");
            Node iter = disjunction();
            Node comp(Kind::Comprehension, {}, {std::move(target), std::move(iter)});
            while (accept_kw("if")) comp.kids.push_back(expression_nocond());
            out.push_back(std::move(comp));
        }
    }

    Node yield_expr() {
        if (func_depth_ == 0 && !fragment_) fail("'yield' outside function");
        expect_kw("yield");
        if (accept_kw("from")) return Node(Kind::YieldFrom, {}, {expression()});
        if (!starts_expression() || is_kw("yield")) return Node(Kind::Yield, {}, {empty()});
        return Node(Kind::Yield, {}, {star_expressions()});
    }

    Node atom() {
        const Token& t = cur();
        switch (t.type) {
            case TokenType::Name: {
                if (t.text == "True" || t.text == "False" || t.text == "None") {
                    Node c(Kind::Constant, t.text);
                    bump();
                    return c;
                }
                if (lang::is_keyword(t.text)) fail("invalid syntax");
                Node n(Kind::Name, t.text);
                n.offset = t.offset;
                bump();
                return n;
            }
            case TokenType::Number: {
                Node c(Kind::Constant, t.text);
                bump();
                return c;
            }
            case TokenType::String:
                return strings();
            case TokenType::Op:
                if (t.text == "...") {
                    bump();
                    return Node(Kind::Constant, "...");
                }
                if (t.text == "(") return paren_atom();
                if (t.text == "[") return list_atom();
                if (t.text == "{") return brace_atom();
                break;
            default:
                break;
        }
        fail("invalid syntax");
    }

    Node paren_atom() {
        expect_op("(");
        if (accept_op(")")) return Node(Kind::Tuple);
        if (is_kw("yield")) {
            Node y = yield_expr();
            expect_op(")");
            return y;
        }
        Node first = star_named_expression();
        if (is_kw("for")) {
            Node gen(Kind::GeneratorExp, {}, {std::move(first)});
            comprehensions(gen.kids);
            expect_op(")");
            return gen;
        }
        if (accept_op(")")) {
            if (first.kind == Kind::Starred) fail("can't use starred expression here");
            return first;
        }
        std::vector<Node> elts{std::move(first)};
        while (accept_op(",")) {
            if (is_op(")")) break;
            elts.push_back(star_named_expression());
        }
        expect_op(")");
        return Node(Kind::Tuple, {}, std::move(elts));
    }

    Node list_atom() {
        expect_op("[");
        if (accept_op("]")) return Node(Kind::List);
        Node first = star_named_expression();
        if (is_kw("for")) {
            Node comp(Kind::ListComp, {}, {std::move(first)});
            comprehensions(comp.kids);
            expect_op("]");
            return comp;
        }
        std::vector<Node> elts{std::move(first)};
        while (accept_op(",")) {
            if (is_op("]")) break;
            elts.push_back(star_named_expression());
        }
        expect_op("]");
        return Node(Kind::List, {}, std::move(elts));
    }

    Node dict_entry() {
        if (accept_op("**")) return Node(Kind::DoubleStarred, {}, {bitor_expr()});
        Node key = expression();
        expect_op(":");
        return Node(Kind::KeyValue, {}, {std::move(key), expression()});
    }

    Node brace_atom() {
        expect_op("{");
        if (accept_op("}")) return Node(Kind::Dict);
        if (is_op("**")) {
            Node d(Kind::Dict);
            do {
                if (is_op("}")) break;
                d.kids.push_back(dict_entry());
            } while (accept_op(","));
            expect_op("}");
            return d;
        }
        Node first = star_named_expression();
        if (accept_op(":")) {
            if (first.kind == Kind::Starred || first.kind == Kind::NamedExpr) fail("invalid syntax");
            Node kv(Kind::KeyValue, {}, {std::move(first), expression()});
            if (is_kw("for")) {
                Node comp(Kind::DictComp, {}, {std::move(kv)});
                comprehensions(comp.kids);
                expect_op("}");
                return comp;
            }
            Node d(Kind::Dict, {}, {std::move(kv)});
            while (accept_op(",")) {
                if (is_op("}")) break;
                d.kids.push_back(dict_entry());
            }
            expect_op("}");
            return d;
        }
        if (is_kw("for")) {
            Node comp(Kind::SetComp, {}, {std::move(first)});
            comprehensions(comp.kids);
            expect_op("}");
            return comp;
        }
        Node s(Kind::Set, {}, {std::move(first)});
        while (accept_op(",")) {
            if (is_op("}")) break;
            s.kids.push_back(star_named_expression());
        }
        expect_op("}");
        return s;
    }

    // ---- string literals ---------------------------------------------
    Node strings() {
        std::vector<Node> parts;
        bool has_bytes = false, has_text = false;
        while (at(TokenType::String)) {
            const Token& t = cur();
            std::size_t quote = t.text.find_first_of("'\"");
            std::string prefix = t.text.substr(0, quote);
            bool is_f = prefix.find_first_of("fF") != std::string::npos;
            bool is_b = prefix.find_first_of("bB") != std::string::npos;
            (is_b ? has_bytes : has_text) = true;
            if (is_f) parts.push_back(fstring(t, prefix.size()));
            else parts.push_back(Node(Kind::Constant, t.text));
            bump();
        }
        if (has_bytes && has_text) fail("cannot mix bytes and nonbytes literals");
        if (parts.size() == 1 && parts[0].kind == Kind::Constant) return std::move(parts[0]);
        return Node(Kind::Str, {}, std::move(parts));
    }

    Node fstring(const Token& tok, std::size_t prefix_len) {
        const std::string& text = tok.text;
        char q = text[prefix_len];
        std::size_t qlen = (text.size() >= prefix_len + 6 && text[prefix_len + 1] == q && text[prefix_len + 2] == q) ? 3 : 1;
        std::string_view body(text);
        body = body.substr(prefix_len + qlen, text.size() - prefix_len - 2 * qlen);
        Node fs(Kind::FString, text.substr(0, prefix_len + qlen));
        std::size_t pos = 0;
        fstring_body(tok, body, tok.offset + prefix_len + qlen, pos, false, fs.kids);
        return fs;
    }

    [[noreturn]] void fstring_fail(const Token& tok, const std::string& message) const {
        throw CompileError("f-string: " + message, tok.line, tok.col);
    }

    void fstring_body(const Token& tok, std::string_view body, std::size_t base, std::size_t& pos, bool in_spec,
                      std::vector<Node>& out) {
        std::string literal;
        auto flush = [&] {
            if (!literal.empty()) out.push_back(Node(Kind::FLiteral, std::move(literal)));
            literal.clear();
        };
        while (pos < body.size()) {
            char c = body[pos];
            if (c == '{') {
                if (pos + 1 < body.size() && body[pos + 1] == '{') {
                    literal += "{{";
                    pos += 2;
                    continue;
                }
                flush();
                ++pos;
                out.push_back(fstring_field(tok, body, base, pos));
                continue;
            }
            if (c == '}') {
                if (in_spec) break;
                if (pos + 1 < body.size() && body[pos + 1] == '}') {
                    literal += "}}";
                    pos += 2;
                    continue;
                }
                fstring_fail(tok, "single '}' is not allowed");
            }
            if (c == '\\' && pos + 1 < body.size()) {
                literal += body.substr(pos, 2);
                pos += 2;
                continue;
            }
            literal += c;
            ++pos;
        }
        flush();
    }

    Node fstring_field(const Token& tok, std::string_view body, std::size_t base, std::size_t& pos) {
        std::size_t start = pos;
        int depth = 0;
        while (pos < body.size()) {
            char c = body[pos];
            if (c == '\'' || c == '"') {
                std::size_t close = body.find(c, pos + 1);
                if (close == std::string_view::npos) fstring_fail(tok, "unterminated string in expression");
                pos = close + 1;
                continue;
            }
            if (c == '(' || c == '[' || c == '{') ++depth;
            else if (c == ')' || c == ']' || (c == '}' && depth > 0)) --depth;
            else if (depth == 0) {
                if (c == '}' || c == ':') break;
                if (c == '!' && !(pos + 1 < body.size() && body[pos + 1] == '=')) break;
            }
            ++pos;
        }
        if (pos >= body.size()) fstring_fail(tok, "expecting '}'");
        std::string_view expr = body.substr(start, pos - start);
        std::string suffix;
        Node raw = empty();
        std::string_view trimmed = expr;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
        if (!trimmed.empty() && trimmed.back() == '=') {
            std::string_view before = trimmed.substr(0, trimmed.size() - 1);
            char prev = before.empty() ? '\0' : before.back();
            if (prev != '=' && prev != '!' && prev != '<' && prev != '>') {
                suffix = "=";
                raw = Node(Kind::Constant, std::string(expr));
                expr = before;
            }
        }
        Node value;
        try {
            value = parse_expression(expr, base + start);
        } catch (const CompileError& e) {
            fstring_fail(tok, e.diagnostic());
        } catch (const LexError& e) {
            fstring_fail(tok, "invalid expression");
        }
        if (body[pos] == '!') {
            if (pos + 1 >= body.size() || std::string_view("rsa").find(body[pos + 1]) == std::string_view::npos)
                fstring_fail(tok, "invalid conversion character");
            suffix += body.substr(pos, 2);
            pos += 2;
        }
        Node spec = empty();
        if (pos < body.size() && body[pos] == ':') {
            ++pos;
            spec = Node(Kind::FSpec);
            fstring_body(tok, body, base, pos, true, spec.kids);
        }
        if (pos >= body.size() || body[pos] != '}') fstring_fail(tok, "expecting '}'");
        ++pos;
        return Node(Kind::FField, std::move(suffix), {std::move(value), std::move(spec), std::move(raw)});
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    int func_depth_ = 0;
    int loop_depth_ = 0;
    bool fragment_;
};

}  // namespace

Node parse_module(std::string_view source) {
    std::vector<Token> tokens;
    try {
        tokens = lex(source, LexOptions{.strict_indent = true});
    } catch (const LexError& e) {
        throw CompileError(e.what(), e.line(), e.col());
    }
    return Parser(std::move(tokens), false).module();
}

Node parse_expression(std::string_view source, std::size_t base_offset) {
    std::vector<Token> tokens;
    try {
        tokens = lex(source, LexOptions{.strict_indent = false, .base_offset = base_offset, .fragment = true});
    } catch (const LexError& e) {
        throw CompileError(e.what(), e.line(), e.col());
    }
    return Parser(std::move(tokens), true).fragment_expression();
}

bool compiles(std::string_view source) {
    try {
        parse_module(source);
        return true;
    } catch (const CompileError&) {
        return false;
    }
}

}  // namespace codeeff::pynorm
