#pragma once

// Independent reference implementations used as test oracles, plus fixture
// helpers. Nothing here calls into the library code it checks.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path fixture(const std::string& rel) {
    return std::filesystem::path(CODEEFF_FIXTURE_DIR) / rel;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream b;
    b << in.rdbuf();
    return b.str();
}

inline std::vector<std::filesystem::path> fixture_files(const std::string& dir, const std::string& ext) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(fixture(dir)))
        if (e.path().extension() == ext) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

// Textbook BLEU over string tokens: clipped precisions for orders
// 1..min(4, |cand|), uniform weights, brevity penalty, and a zero-match
// order replaced by 1 / (2^k * total) with k the running count of such
// orders.
inline double bleu_oracle(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
    if (cand.empty() || ref.empty()) return 0;
    const int max_n = std::min<int>(4, static_cast<int>(cand.size()));
    double log_sum = 0;
    int zero_orders = 0;
    for (int n = 1; n <= max_n; ++n) {
        std::map<std::vector<std::string>, int> c, r;
        for (std::size_t i = 0; i + n <= cand.size(); ++i) c[{cand.begin() + i, cand.begin() + i + n}]++;
        for (std::size_t i = 0; i + n <= ref.size(); ++i) r[{ref.begin() + i, ref.begin() + i + n}]++;
        int matched = 0, total = 0;
        for (auto& [g, k] : c) {
            total += k;
            auto it = r.find(g);
            matched += std::min(k, it == r.end() ? 0 : it->second);
        }
        double p;
        if (matched > 0) {
            p = static_cast<double>(matched) / total;
        } else {
            ++zero_orders;
            p = 1.0 / (std::pow(2.0, zero_orders) * total);
        }
        log_sum += std::log(p) / max_n;
    }
    double c_len = static_cast<double>(cand.size()), r_len = static_cast<double>(ref.size());
    double bp = c_len > r_len ? 1.0 : std::exp(1.0 - r_len / c_len);
    return 100.0 * bp * std::exp(log_sum);
}

// Maximum over all injective row->column maps (or column->row when there
// are more rows), summed in row order.
inline double assignment_oracle(const std::vector<std::vector<double>>& s) {
    const std::size_t n = s.size(), m = n ? s[0].size() : 0;
    if (n == 0 || m == 0) return 0;
    double best = -1e300;
    if (n <= m) {
        std::vector<int> cols(m);
        std::iota(cols.begin(), cols.end(), 0);
        // Every permutation of the columns; the first n are the matches.
        do {
            double t = 0;
            for (std::size_t i = 0; i < n; ++i) t += s[i][cols[i]];
            best = std::max(best, t);
        } while (std::next_permutation(cols.begin(), cols.end()));
    } else {
        std::vector<int> rows(n);
        std::iota(rows.begin(), rows.end(), 0);
        do {
            // rows[j] is the row matched to column j; sum in row order
            std::vector<double> per_row(n, 0.0);
            for (std::size_t j = 0; j < m; ++j) per_row[rows[j]] = s[rows[j]][j];
            double t = 0;
            for (double v : per_row) t += v;
            best = std::max(best, t);
        } while (std::next_permutation(rows.begin(), rows.end()));
    }
    return best;
}

inline std::size_t lccs_oracle(const std::string& a, const std::string& b) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::size_t k = 0;
            while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k]) ++k;
            best = std::max(best, k);
        }
    return best;
}

// Rank of v[i] as 1 + (#smaller) + (#equal - 1) / 2.
inline std::vector<double> rank_oracle(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0, eq = 0;
        for (double w : v) {
            if (w < v[i]) ++less;
            if (w == v[i]) ++eq;
        }
        r[i] = 1 + less + (eq - 1) / 2;
    }
    return r;
}

inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n, num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx += (x[i] - mx) * (x[i] - mx);
        dy += (y[i] - my) * (y[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

inline double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_oracle(rank_oracle(x), rank_oracle(y));
}

}  // namespace testsupport
