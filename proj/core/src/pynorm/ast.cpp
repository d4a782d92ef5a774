#include "codeeff/pynorm/ast.hpp"

#include <algorithm>

namespace codeeff::pynorm {

std::string_view to_string(Kind kind) {
    switch (kind) {
#define CODEEFF_KIND(k) case Kind::k: return #k;
        CODEEFF_KIND(Module) CODEEFF_KIND(Block) CODEEFF_KIND(Empty) CODEEFF_KIND(ExprStmt)
        CODEEFF_KIND(Assign) CODEEFF_KIND(AugAssign) CODEEFF_KIND(AnnAssign) CODEEFF_KIND(If)
        CODEEFF_KIND(While) CODEEFF_KIND(For) CODEEFF_KIND(OrElse) CODEEFF_KIND(FunctionDef)
        CODEEFF_KIND(ClassDef) CODEEFF_KIND(Decorators) CODEEFF_KIND(Params) CODEEFF_KIND(Param)
        CODEEFF_KIND(Arguments) CODEEFF_KIND(Return) CODEEFF_KIND(Delete) CODEEFF_KIND(Pass)
        CODEEFF_KIND(Break) CODEEFF_KIND(Continue) CODEEFF_KIND(Global) CODEEFF_KIND(Nonlocal)
        CODEEFF_KIND(Import) CODEEFF_KIND(ImportFrom) CODEEFF_KIND(Alias) CODEEFF_KIND(Raise)
        CODEEFF_KIND(Assert) CODEEFF_KIND(Try) CODEEFF_KIND(ExceptHandler) CODEEFF_KIND(Finally)
        CODEEFF_KIND(With) CODEEFF_KIND(WithItem) CODEEFF_KIND(Name) CODEEFF_KIND(Identifier)
        CODEEFF_KIND(Constant) CODEEFF_KIND(Str) CODEEFF_KIND(FString) CODEEFF_KIND(FLiteral)
        CODEEFF_KIND(FField) CODEEFF_KIND(FSpec) CODEEFF_KIND(Tuple) CODEEFF_KIND(List)
        CODEEFF_KIND(Set) CODEEFF_KIND(Dict) CODEEFF_KIND(KeyValue) CODEEFF_KIND(Starred)
        CODEEFF_KIND(DoubleStarred) CODEEFF_KIND(Keyword) CODEEFF_KIND(Attribute)
        CODEEFF_KIND(Subscript) CODEEFF_KIND(Slice) CODEEFF_KIND(Call) CODEEFF_KIND(BinOp)
        CODEEFF_KIND(UnaryOp) CODEEFF_KIND(BoolOp) CODEEFF_KIND(Compare) CODEEFF_KIND(CmpOp)
        CODEEFF_KIND(IfExp) CODEEFF_KIND(Lambda) CODEEFF_KIND(NamedExpr) CODEEFF_KIND(ListComp)
        CODEEFF_KIND(SetComp) CODEEFF_KIND(DictComp) CODEEFF_KIND(GeneratorExp)
        CODEEFF_KIND(Comprehension) CODEEFF_KIND(Yield) CODEEFF_KIND(YieldFrom)
#undef CODEEFF_KIND
    }
    return "?";
}

bool same_tree(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.text != b.text || a.kids.size() != b.kids.size()) return false;
    return std::equal(a.kids.begin(), a.kids.end(), b.kids.begin(), same_tree);
}

namespace {

void dump_into(const Node& node, std::string& out) {
    out += '(';
    out += to_string(node.kind);
    if (!node.text.empty()) {
        out += ' ';
        out += node.text;
    }
    for (const Node& kid : node.kids) {
        out += ' ';
        dump_into(kid, out);
    }
    out += ')';
}

}  // namespace

std::string dump(const Node& node) {
    std::string out;
    dump_into(node, out);
    return out;
}

CompileError::CompileError(const std::string& message, int line, int col)
    : Error(message + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
      diagnostic_(message),
      line_(line),
      col_(col) {}

}  // namespace codeeff::pynorm
