#pragma once

#include <string_view>

#include "codeeff/pynorm/ast.hpp"

namespace codeeff::pynorm {

// Parses a whole program into a Module node. Throws CompileError with the
// position of the first offending token. Besides grammar errors this also
// rejects the compile-time errors the reference interpreter raises for
// misplaced return/yield/break/continue/nonlocal.
//
// Unsupported constructs (async/await, match statements, parenthesized
// with-items) are reported as compile errors.
Node parse_module(std::string_view source);

// Parses a single expression, e.g. an f-string replacement field.
// `base_offset` is added to identifier offsets.
Node parse_expression(std::string_view source, std::size_t base_offset = 0);

// True iff parse_module succeeds.
bool compiles(std::string_view source);

}  // namespace codeeff::pynorm
