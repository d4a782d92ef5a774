#pragma once

#include <string>

#include "codeeff/pynorm/ast.hpp"

namespace codeeff::pynorm {

// Canonical source for a Module (or any statement) node: 4-space indent,
// one statement per line, no blank lines, single spaces around binary
// operators, minimal parentheses. Every line ends with '\n'.
std::string unparse(const Node& node);

// Canonical source for an expression node.
std::string unparse_expression(const Node& node);

}  // namespace codeeff::pynorm
