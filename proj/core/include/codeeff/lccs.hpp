#pragma once

#include <cstddef>
#include <string_view>

namespace codeeff {

// Length of the longest common contiguous substring (bytes).
std::size_t longest_common_substring(std::string_view a, std::string_view b);

// longest_common_substring / max(|a|, |b|); two empty texts are identical.
double lccs_similarity(std::string_view a, std::string_view b);

}  // namespace codeeff
