#pragma once

#include <vector>

namespace codeeff {

struct Assignment {
    // Column matched to each row, or -1 when the row is left unmatched
    // (matched to a zero-score dummy).
    std::vector<int> row_to_col;
    double total = 0;
};

// Maximum-weight assignment on an n x m score matrix. Rectangular inputs
// are padded with zero-score dummies. Among optimal assignments the one
// whose row-to-column sequence is lexicographically smallest wins, with
// real columns ordered before dummies. Throws Error on ragged input.
Assignment max_weight_assignment(const std::vector<std::vector<double>>& score);

}  // namespace codeeff
