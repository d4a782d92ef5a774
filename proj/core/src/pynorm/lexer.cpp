#include "codeeff/pynorm/lexer.hpp"

#include <array>
#include <cctype>

#include "codeeff/language_data.hpp"

namespace codeeff::pynorm {

LexError::LexError(const std::string& message, std::size_t offset, int line, int col)
    : Error(message + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
      offset_(offset),
      line_(line),
      col_(col) {}

namespace {

// Longest operators first.
constexpr std::array<std::string_view, 48> k_operators = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=",
    ">=",  "==",  "!=",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "@=",
    "+",   "-",   "*",   "/",   "%",   "@",  "&",  "|",  "^",  "~",  "<",  ">",
    "(",   ")",   "[",   "]",   "{",   "}",  ",",  ":",  ".",  ";",  "=",  "!",
};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

bool is_string_prefix(std::string_view word) {
    if (word.size() > 2) return false;
    bool seen_r = false, seen_b = false, seen_f = false, seen_u = false;
    for (char c : word) {
        switch (std::tolower(static_cast<unsigned char>(c))) {
            case 'r': if (seen_r) return false; seen_r = true; break;
            case 'b': if (seen_b) return false; seen_b = true; break;
            case 'f': if (seen_f) return false; seen_f = true; break;
            case 'u': if (seen_u) return false; seen_u = true; break;
            default: return false;
        }
    }
    if (seen_u && word.size() > 1) return false;
    if (seen_b && seen_f) return false;
    return true;
}

class Lexer {
public:
    Lexer(std::string_view src, const LexOptions& options) : src_(src), opt_(options) {}

    std::vector<Token> run() {
        if (opt_.fragment) depth_ = 1;
        while (pos_ < src_.size()) {
            if (at_line_start_ && depth_ == 0) {
                if (handle_line_start()) continue;
            }
            scan_token();
        }
        finish();
        return std::move(out_);
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                line_start_ = pos_ + 1;
            }
            ++pos_;
        }
    }

    int col() const { return static_cast<int>(pos_ - line_start_); }

    void emit(TokenType type, std::string text, std::size_t start, int line, int col) {
        out_.push_back(Token{type, std::move(text), start + opt_.base_offset, line, col});
    }

    [[noreturn]] void fail(const std::string& message, std::size_t at, int line, int col) const {
        throw LexError(message, at + opt_.base_offset, line, col);
    }

    // Returns true when the whole physical line was consumed (blank line).
    bool handle_line_start() {
        at_line_start_ = false;
        int width = 0;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ') ++width;
            else if (c == '\t') width = (width / 8 + 1) * 8;
            else if (c == '\f') width = 0;
            else if (c == '\r') {}
            else break;
            ++pos_;
        }
        char c = peek();
        if (pos_ >= src_.size()) return true;
        if (c == '\n' || c == '#' || (c == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n')))) {
            if (c == '#') scan_comment();
            if (peek() == '\\') {
                // A continuation on an otherwise empty line joins it to the next.
                advance(peek(1) == '\r' ? 3 : 2);
                at_line_start_ = true;
                return true;
            }
            if (peek() == '\n') {
                emit(TokenType::Nl, "\n", pos_, line_, col());
                advance();
            }
            at_line_start_ = true;
            return true;
        }
        int current = indents_.back();
        if (width > current) {
            indents_.push_back(width);
            emit(TokenType::Indent, "", pos_, line_, col());
        } else if (width < current) {
            while (indents_.back() > width) {
                indents_.pop_back();
                emit(TokenType::Dedent, "", pos_, line_, col());
            }
            if (indents_.back() != width) {
                if (opt_.strict_indent)
                    fail("unindent does not match any outer indentation level", pos_, line_, col());
                indents_.push_back(width);
            }
        }
        return false;
    }

    void scan_comment() {
        std::size_t start = pos_;
        int line = line_, c0 = col();
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        std::size_t end = pos_;
        while (end > start && src_[end - 1] == '\r') --end;
        emit(TokenType::Comment, std::string(src_.substr(start, end - start)), start, line, c0);
    }

    void scan_token() {
        char c = peek();
        if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
            advance();
            return;
        }
        if (c == '#') {
            scan_comment();
            return;
        }
        if (c == '\n') {
            if (depth_ == 0) {
                emit(TokenType::Newline, "\n", pos_, line_, col());
                at_line_start_ = true;
            }
            advance();
            return;
        }
        if (c == '\\') {
            if (peek(1) == '\n') { advance(2); return; }
            if (peek(1) == '\r' && peek(2) == '\n') { advance(3); return; }
        }
        std::size_t start = pos_;
        int line = line_, c0 = col();
        auto uc = static_cast<unsigned char>(c);
        if (is_ident_start(uc)) {
            std::size_t end = pos_;
            while (end < src_.size() && is_ident_char(static_cast<unsigned char>(src_[end]))) ++end;
            std::string_view word = src_.substr(pos_, end - pos_);
            if (end < src_.size() && (src_[end] == '\'' || src_[end] == '"') && is_string_prefix(word)) {
                advance(end - pos_);
                scan_string(start, line, c0);
                return;
            }
            advance(end - pos_);
            emit(TokenType::Name, std::string(word), start, line, c0);
            return;
        }
        if (c == '\'' || c == '"') {
            scan_string(start, line, c0);
            return;
        }
        if (std::isdigit(uc) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            scan_number(start, line, c0);
            return;
        }
        for (std::string_view op : k_operators) {
            if (src_.substr(pos_, op.size()) == op) {
                advance(op.size());
                if (op == "(" || op == "[" || op == "{") ++depth_;
                else if ((op == ")" || op == "]" || op == "}") && depth_ > (opt_.fragment ? 1 : 0)) --depth_;
                emit(TokenType::Op, std::string(op), start, line, c0);
                return;
            }
        }
        // Unknown character: surface it as an operator and let the parser reject it.
        advance();
        emit(TokenType::Op, std::string(1, c), start, line, c0);
    }

    void scan_string(std::size_t start, int line, int c0) {
        char quote = peek();
        bool triple = peek(1) == quote && peek(2) == quote;
        advance(triple ? 3 : 1);
        while (true) {
            if (pos_ >= src_.size()) fail("unterminated string literal", start, line, c0);
            char c = peek();
            if (c == '\\') {
                advance(2);
                continue;
            }
            if (!triple && c == '\n') fail("unterminated string literal", start, line, c0);
            if (c == quote) {
                if (!triple) {
                    advance();
                    break;
                }
                if (peek(1) == quote && peek(2) == quote) {
                    advance(3);
                    break;
                }
            }
            advance();
        }
        emit(TokenType::String, std::string(src_.substr(start, pos_ - start)), start, line, c0);
    }

    void scan_number(std::size_t start, int line, int c0) {
        auto digitish = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'o' || peek(1) == 'O' ||
                              peek(1) == 'b' || peek(1) == 'B')) {
            advance(2);
            while (digitish(peek())) advance();
        } else {
            while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
            if (peek() == '.') {
                advance();
                while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
            }
            if (peek() == 'e' || peek() == 'E') {
                char next = peek(1);
                if (std::isdigit(static_cast<unsigned char>(next)) ||
                    ((next == '+' || next == '-') && std::isdigit(static_cast<unsigned char>(peek(2))))) {
                    advance(2);
                    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
                }
            }
            if (peek() == 'j' || peek() == 'J') advance();
        }
        emit(TokenType::Number, std::string(src_.substr(start, pos_ - start)), start, line, c0);
    }

    void finish() {
        if (opt_.fragment) {
            emit(TokenType::EndMarker, "", pos_, line_, col());
            return;
        }
        bool need_newline = false;
        for (auto it = out_.rbegin(); it != out_.rend(); ++it) {
            if (it->type == TokenType::Comment || it->type == TokenType::Nl) continue;
            need_newline = it->type != TokenType::Newline && it->type != TokenType::Dedent &&
                           it->type != TokenType::Indent;
            break;
        }
        if (need_newline) emit(TokenType::Newline, "", pos_, line_, col());
        while (indents_.size() > 1) {
            indents_.pop_back();
            emit(TokenType::Dedent, "", pos_, line_, col());
        }
        emit(TokenType::EndMarker, "", pos_, line_, col());
    }

    std::string_view src_;
    LexOptions opt_;
    std::vector<Token> out_;
    std::vector<int> indents_{0};
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;
    int depth_ = 0;
    bool at_line_start_ = true;
};

bool is_delimiter(std::string_view op) {
    return op == "(" || op == ")" || op == "[" || op == "]" || op == "{" || op == "}" || op == "," ||
           op == ":" || op == "." || op == ";" || op == "->";
}

}  // namespace

std::vector<Token> lex(std::string_view source, const LexOptions& options) {
    return Lexer(source, options).run();
}

TokenStream tokenize(std::string_view source) {
    TokenStream stream;
    for (Token& tok : lex(source)) {
        switch (tok.type) {
            case TokenType::Name:
                stream.push_back({lang::is_keyword(tok.text) ? TokenKind::Keyword : TokenKind::Identifier,
                                  std::move(tok.text)});
                break;
            case TokenType::Number:
            case TokenType::String:
                stream.push_back({TokenKind::Literal, std::move(tok.text)});
                break;
            case TokenType::Op:
                stream.push_back({is_delimiter(tok.text) ? TokenKind::Delimiter : TokenKind::Operator,
                                  std::move(tok.text)});
                break;
            default:
                break;
        }
    }
    return stream;
}

std::string_view to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Keyword: return "keyword";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Literal: return "literal";
        case TokenKind::Operator: return "operator";
        case TokenKind::Delimiter: return "delimiter";
    }
    return "unknown";
}

}  // namespace codeeff::pynorm
