#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "codeeff/pynorm/ast.hpp"
#include "codeeff/pynorm/lexer.hpp"
#include "codeeff/pynorm/parser.hpp"
#include "codeeff/pynorm/unparse.hpp"

// Source normalization for the subject language: noise stripping,
// syntax-tree purification and identifier standardization.
namespace codeeff::pynorm {

struct NormalizedCode {
    std::string source;
    // original identifier -> canonical identifier (varN / funcN)
    std::map<std::string, std::string> rename_map;
    bool compile_ok = false;
};

// Reads a denylist file: one statement pattern per line, '#' comments.
std::vector<std::string> load_denylist(const std::filesystem::path& path);

// Removes comments and statements matching the denylist. Purely lexical, so
// it works on code that does not compile. A removed statement that was the
// only statement of its block is replaced by `pass`.
std::string strip_noise(std::string_view source);
std::string strip_noise(std::string_view source, const std::vector<std::string>& denylist);

// Parse and re-emit in canonical layout. Throws CompileError.
std::string ast_roundtrip(std::string_view source);

// Renames locally bound variables to var1, var2, ... and locally defined
// functions and classes to func1, func2, ... in order of first occurrence.
// Layout, comments and all other tokens are left untouched.
//
// Never renamed: builtins, imported names, dunder names, names bound
// directly in a class body (they are reachable as attributes), attribute
// names, and keyword arguments unless the callee is a local function, method or
// class. Canonical names that already occur free in the file are skipped.
// Throws CompileError.
NormalizedCode standardize_identifiers(std::string_view source);

// strip_noise -> ast_roundtrip -> standardize_identifiers. When the code
// does not compile the stripped text is returned with compile_ok = false.
NormalizedCode normalize(std::string_view source);

}  // namespace codeeff::pynorm
