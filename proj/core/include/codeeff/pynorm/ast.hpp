#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "codeeff/error.hpp"

namespace codeeff::pynorm {

// Node kinds of the syntax tree for the subject language. The tree is
// untyped: every node is a kind, an optional text payload and an ordered
// list of children. Optional children are always present as `Empty` so
// each kind has a fixed child layout (documented per kind below).
enum class Kind : std::uint8_t {
    Module,       // statements...
    Block,        // statements...
    Empty,        // placeholder for an absent optional child
    // statements
    ExprStmt,     // [value]
    Assign,       // [target..., value]
    AugAssign,    // text=op ("+="), [target, value]
    AnnAssign,    // [target, annotation, value|Empty]
    If,           // [test, Block, OrElse?]
    While,        // [test, Block, OrElse?]
    For,          // [target, iter, Block, OrElse?]
    OrElse,       // [Block]
    FunctionDef,  // [Identifier, Decorators, Params, returns|Empty, Block]
    ClassDef,     // [Identifier, Decorators, Arguments, Block]
    Decorators,   // expressions...
    Params,       // Param...
    Param,        // text in {"", "*", "**", "/"}; [Identifier|Empty, annotation|Empty, default|Empty]
    Arguments,    // call-style arguments (class bases)
    Return,       // [value|Empty]
    Delete,       // targets...
    Pass,
    Break,
    Continue,
    Global,       // Identifier...
    Nonlocal,     // Identifier...
    Import,       // Alias...
    ImportFrom,   // text=module with leading dots; Alias...
    Alias,        // text=dotted name or "*"; [Identifier|Empty]
    Raise,        // [exc|Empty, cause|Empty]
    Assert,       // [test, msg|Empty]
    Try,          // [Block, ExceptHandler..., OrElse?, Finally?]
    ExceptHandler,  // [type|Empty, Identifier|Empty, Block]
    Finally,      // [Block]
    With,         // [WithItem..., Block]
    WithItem,     // [context, target|Empty]
    // expressions
    Name,         // text=identifier
    Identifier,   // text=identifier in a non-expression position
    Constant,     // text=literal source (numbers, keywords, single string piece)
    Str,          // adjacent string pieces: Constant | FString ...
    FString,      // text=prefix+opening quote; FLiteral | FField ...
    FLiteral,     // text=raw literal body
    FField,       // text=debug/conversion suffix ("=", "!r", "=!r", ...); [expr, FSpec|Empty]
    FSpec,        // FLiteral | FField ...
    Tuple,
    List,
    Set,
    Dict,         // KeyValue | DoubleStarred ...
    KeyValue,     // [key, value]
    Starred,      // [value]
    DoubleStarred,  // [value]
    Keyword,      // [Identifier, value]
    Attribute,    // [value, Identifier]
    Subscript,    // [value, index]
    Slice,        // [lower|Empty, upper|Empty, step|Empty]
    Call,         // [func, arg...]
    BinOp,        // text=op; [left, right]
    UnaryOp,      // text=op; [operand]
    BoolOp,       // text=and|or; values...
    Compare,      // [left, CmpOp, right, CmpOp, right...]
    CmpOp,        // text=operator ("not in", "is not", "<", ...)
    IfExp,        // [body, test, orelse]
    Lambda,       // [Params, body]
    NamedExpr,    // [Name, value]
    ListComp,     // [elt, Comprehension...]
    SetComp,      // [elt, Comprehension...]
    DictComp,     // [KeyValue, Comprehension...]
    GeneratorExp, // [elt, Comprehension...]
    Comprehension,  // [target, iter, condition...]
    Yield,        // [value|Empty]
    YieldFrom,    // [value]
};

std::string_view to_string(Kind kind);

inline constexpr std::size_t k_no_offset = std::numeric_limits<std::size_t>::max();

struct Node {
    Kind kind = Kind::Empty;
    std::string text;
    std::vector<Node> kids;
    // Source offset of the identifier text for Name/Identifier nodes.
    std::size_t offset = k_no_offset;

    Node() = default;
    explicit Node(Kind k, std::string t = {}, std::vector<Node> children = {})
        : kind(k), text(std::move(t)), kids(std::move(children)) {}

    bool empty() const noexcept { return kind == Kind::Empty; }
    bool is_name() const noexcept { return kind == Kind::Name || kind == Kind::Identifier; }
};

// Structural equality: kind, text and children. Offsets are ignored.
bool same_tree(const Node& a, const Node& b);

// S-expression dump, mostly for diagnostics and tests.
std::string dump(const Node& node);

// Raised when source text is not a valid program.
class CompileError : public Error {
public:
    CompileError(const std::string& message, int line, int col);

    const std::string& diagnostic() const noexcept { return diagnostic_; }
    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    std::string diagnostic_;
    int line_;
    int col_;
};

}  // namespace codeeff::pynorm
