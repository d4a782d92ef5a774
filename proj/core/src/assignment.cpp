#include "codeeff/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "codeeff/error.hpp"

namespace codeeff {

namespace {

constexpr double k_tie_tolerance = 1e-9;

struct SquareSolution {
    std::vector<int> row_to_col;
    std::vector<double> u, v;  // row and column potentials, 1-based
};

// Minimum-cost perfect matching on a square matrix (potentials method,
// O(n^3)). At the end cost[i][j] - u[i+1] - v[j+1] >= 0, with equality on
// every edge of every optimal matching.
SquareSolution min_cost_square(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<double> minv(n + 1);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            std::size_t i0 = p[j0], j1 = 0;
            double delta = inf;
            const std::vector<double>& row = cost[i0 - 1];
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = row[j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    SquareSolution out;
    out.row_to_col.assign(n, -1);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0) out.row_to_col[p[j] - 1] = static_cast<int>(j - 1);
    out.u = std::move(u);
    out.v = std::move(v);
    return out;
}

// Perfect matchings restricted to tight edges, rewired one row at a time
// so that earlier rows get the smallest possible column.
class TightGraph {
public:
    TightGraph(std::vector<std::vector<std::size_t>> adj, const std::vector<int>& row_to_col)
        : adj_(std::move(adj)), n_(adj_.size()), row_(n_), col_(n_), row_fixed_(n_, 0), col_fixed_(n_, 0), seen_(n_) {
        for (std::size_t i = 0; i < n_; ++i) {
            row_[i] = static_cast<std::size_t>(row_to_col[i]);
            col_[row_[i]] = i;
        }
    }

    void fix_smallest(std::size_t i) {
        for (std::size_t c : adj_[i]) {
            if (col_fixed_[c]) continue;
            if (c == row_[i] || reroute(i, c)) {
                row_fixed_[i] = col_fixed_[c] = 1;
                return;
            }
        }
        throw Error("assignment: internal error fixing row " + std::to_string(i));
    }

    std::size_t col_of(std::size_t i) const { return row_[i]; }

private:
    // Moves row i onto column c: the row holding c must reach i's old
    // column along an alternating path of free tight edges.
    bool reroute(std::size_t i, std::size_t c) {
        std::fill(seen_.begin(), seen_.end(), 0);
        seen_[c] = 1;
        target_ = row_[i];
        path_.clear();
        if (!search(col_[c])) return false;
        // path_ holds the columns taken by successive rows, starting at col_[c]
        std::size_t r = col_[c];
        for (std::size_t y : path_) {
            std::size_t next = col_[y];
            row_[r] = y;
            col_[y] = r;
            r = next;
        }
        row_[i] = c;
        col_[c] = i;
        return true;
    }

    bool search(std::size_t r) {
        for (std::size_t y : adj_[r]) {
            if (col_fixed_[y] || seen_[y]) continue;
            seen_[y] = 1;
            path_.push_back(y);
            if (y == target_ || search(col_[y])) return true;
            path_.pop_back();
        }
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::size_t n_;
    std::vector<std::size_t> row_, col_;
    std::vector<char> row_fixed_, col_fixed_, seen_;
    std::vector<std::size_t> path_;
    std::size_t target_ = 0;
};

}  // namespace

Assignment max_weight_assignment(const std::vector<std::vector<double>>& score) {
    const std::size_t n = score.size();
    const std::size_t m = n == 0 ? 0 : score.front().size();
    for (const auto& row : score) {
        if (row.size() != m) throw Error("assignment: score matrix rows differ in length");
        for (double x : row)
            if (!std::isfinite(x)) throw Error("assignment: scores must be finite");
    }
    Assignment result;
    result.row_to_col.assign(n, -1);
    if (n == 0 || m == 0) return result;

    // Square matrix with zero-score dummies; dummy columns sort last.
    const std::size_t size = std::max(n, m);
    std::vector<std::vector<double>> square(size, std::vector<double>(size, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) square[i][j] = score[i][j];

    double hi = 0;
    for (const auto& row : square)
        for (double x : row) hi = std::max(hi, x);
    std::vector<std::vector<double>> cost(size, std::vector<double>(size));
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) cost[i][j] = hi - square[i][j];
    SquareSolution sol = min_cost_square(cost);

    // Every optimal matching lives on the tight edges; walk rows in order
    // and give each the smallest column that still completes one.
    const double tol = k_tie_tolerance * std::max(1.0, hi);
    std::vector<std::vector<std::size_t>> adj(size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j)
            if (cost[i][j] - sol.u[i + 1] - sol.v[j + 1] <= tol || static_cast<int>(j) == sol.row_to_col[i])
                adj[i].push_back(j);
    TightGraph graph(std::move(adj), sol.row_to_col);
    for (std::size_t i = 0; i < n; ++i) {
        graph.fix_smallest(i);
        std::size_t c = graph.col_of(i);
        result.row_to_col[i] = c < m ? static_cast<int>(c) : -1;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (result.row_to_col[i] >= 0) result.total += score[i][static_cast<std::size_t>(result.row_to_col[i])];
    return result;
}

}  // namespace codeeff
