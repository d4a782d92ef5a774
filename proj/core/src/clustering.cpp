#include "codeeff/clustering.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "codeeff/error.hpp"

namespace codeeff {

namespace {

using Members = std::vector<std::size_t>;

double spread(const DistanceMatrix& d, const Members& m) {
    double s = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) s += d[m[i]][m[j]];
    return s;
}

// Member with the smallest total distance to the others; ties to the
// smaller index.
std::size_t medoid_of(const DistanceMatrix& d, const Members& m) {
    std::size_t best = m.front();
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t a : m) {
        double cost = 0;
        for (std::size_t b : m) cost += d[a][b];
        if (cost < best_cost) {
            best_cost = cost;
            best = a;
        }
    }
    return best;
}

struct Split {
    Members left, right;
    double cost = std::numeric_limits<double>::infinity();
};

Split two_medoids(const DistanceMatrix& d, const Members& m, std::size_t a, std::size_t b) {
    Split s;
    for (int iter = 0; iter < 100; ++iter) {
        s.left.clear();
        s.right.clear();
        for (std::size_t x : m) {
            if (x == a) s.left.push_back(x);
            else if (x == b) s.right.push_back(x);
            else if (d[x][a] <= d[x][b]) s.left.push_back(x);
            else s.right.push_back(x);
        }
        std::size_t na = medoid_of(d, s.left), nb = medoid_of(d, s.right);
        if (na == a && nb == b) break;
        a = na;
        b = nb;
    }
    s.cost = 0;
    for (std::size_t x : s.left) s.cost += d[x][a];
    for (std::size_t x : s.right) s.cost += d[x][b];
    return s;
}

Split best_split(const DistanceMatrix& d, const Members& m, std::mt19937_64& rng, int restarts) {
    // Farthest pair first; ties to the lexicographically smallest pair.
    std::size_t fa = m[0], fb = m[1];
    double far = -1;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (d[m[i]][m[j]] > far) {
                far = d[m[i]][m[j]];
                fa = m[i];
                fb = m[j];
            }
    Split best = two_medoids(d, m, fa, fb);
    std::uniform_int_distribution<std::size_t> pick(0, m.size() - 1);
    for (int r = 0; r < restarts && m.size() > 2; ++r) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        Split s = two_medoids(d, m, m[std::min(i, j)], m[std::max(i, j)]);
        if (s.cost < best.cost) best = std::move(s);
    }
    return best;
}

}  // namespace

ClusterAssignment bisecting_medoids(const DistanceMatrix& d, std::size_t k, const ClusterOptions& options,
                                    std::vector<std::string>* warnings) {
    const std::size_t n = d.size();
    if (k == 0) throw Error("cluster count must be at least 1");
    for (const auto& row : d)
        if (row.size() != n) throw Error("distance matrix must be square");
    ClusterAssignment out;
    if (n == 0) return out;
    if (k > n) {
        if (warnings)
            warnings->push_back("requested " + std::to_string(k) + " clusters for " + std::to_string(n) +
                                " items; using " + std::to_string(n));
        k = n;
    }

    std::mt19937_64 rng(options.seed);
    std::vector<Members> clusters(1);
    for (std::size_t i = 0; i < n; ++i) clusters[0].push_back(i);
    while (clusters.size() < k) {
        std::size_t target = clusters.size();
        double widest = -1;
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            if (clusters[c].size() < 2) continue;
            double s = spread(d, clusters[c]);
            if (s > widest) {
                widest = s;
                target = c;
            }
        }
        Split s = best_split(d, clusters[target], rng, options.restarts);
        std::sort(s.left.begin(), s.left.end());
        std::sort(s.right.begin(), s.right.end());
        clusters[target] = std::move(s.left);
        clusters.insert(clusters.begin() + static_cast<std::ptrdiff_t>(target) + 1, std::move(s.right));
    }
    // Clusters are numbered by their smallest member.
    std::sort(clusters.begin(), clusters.end(), [](const Members& a, const Members& b) { return a.front() < b.front(); });
    out.cluster_of.assign(n, 0);
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (std::size_t x : clusters[c]) out.cluster_of[x] = c;
    out.members = std::move(clusters);
    return out;
}

}  // namespace codeeff
