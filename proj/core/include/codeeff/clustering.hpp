#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace codeeff {

// Symmetric matrix of non-negative distances with a zero diagonal.
using DistanceMatrix = std::vector<std::vector<double>>;

struct ClusterAssignment {
    std::vector<std::size_t> cluster_of;  // per item
    std::vector<std::vector<std::size_t>> members;  // per cluster, ascending
    std::size_t k() const noexcept { return members.size(); }
};

struct ClusterOptions {
    std::uint64_t seed = 0;
    // Random medoid initializations tried per split, besides the farthest
    // pair.
    int restarts = 8;
};

// Bisecting 2-medoid clustering. Starting from one cluster, the cluster
// with the largest sum of pairwise distances is split until there are k
// clusters. k larger than the item count is lowered to it and a warning
// is appended. Deterministic for a given seed. Throws Error for k == 0 or
// a malformed matrix.
ClusterAssignment bisecting_medoids(const DistanceMatrix& distance, std::size_t k, const ClusterOptions& options = {},
                                    std::vector<std::string>* warnings = nullptr);

}  // namespace codeeff
