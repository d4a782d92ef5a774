#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "codeeff/error.hpp"

namespace codeeff::pynorm {

enum class TokenType {
    Name,
    Number,
    String,
    Op,
    Newline,  // end of a logical line
    Nl,       // blank or comment-only line
    Indent,
    Dedent,
    Comment,
    EndMarker,
};

struct Token {
    TokenType type;
    std::string text;
    std::size_t offset = 0;  // byte offset of the first character
    int line = 1;            // 1-based
    int col = 0;             // 0-based byte column
};

// Raised by the lexer on an unterminated string or, in strict mode, on
// inconsistent indentation.
class LexError : public Error {
public:
    LexError(const std::string& message, std::size_t offset, int line, int col);

    std::size_t offset() const noexcept { return offset_; }
    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    std::size_t offset_;
    int line_;
    int col_;
};

struct LexOptions {
    // Throw on dedents that match no enclosing indentation level.
    bool strict_indent = false;
    // Offset added to every token offset; used when lexing a fragment
    // (an f-string replacement field) in place.
    std::size_t base_offset = 0;
    // Fragments are lexed as if wrapped in brackets: no NEWLINE/INDENT.
    bool fragment = false;
};

std::vector<Token> lex(std::string_view source, const LexOptions& options = {});

// Lexical token classes exposed to metrics and length filters.
enum class TokenKind { Keyword, Identifier, Literal, Operator, Delimiter };

struct LexicalToken {
    TokenKind kind;
    std::string text;

    friend bool operator==(const LexicalToken&, const LexicalToken&) = default;
};

using TokenStream = std::vector<LexicalToken>;

// Lexical tokens in source order. Comments and layout tokens are excluded,
// so the stream length is the token count used by the length filters.
TokenStream tokenize(std::string_view source);

std::string_view to_string(TokenKind kind);

}  // namespace codeeff::pynorm
