#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

// Word lists for the subject language (Python) and the dataset vocabulary.
// The lists live in core/data/*.txt and are compiled into the library.
namespace codeeff::lang {

const std::set<std::string, std::less<>>& keywords();
const std::set<std::string, std::less<>>& builtins();
const std::set<std::string, std::less<>>& tag_vocabulary();
const std::vector<std::string>& default_denylist();

bool is_keyword(std::string_view word);
bool is_builtin(std::string_view word);

// Splits a data file into trimmed lines, skipping blanks and '#' comments.
std::vector<std::string> parse_word_list(std::string_view text);

}  // namespace codeeff::lang
