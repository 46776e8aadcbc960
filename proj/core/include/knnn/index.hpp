#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "knnn/feature_matrix.hpp"
#include "knnn/linalg.hpp"
#include "knnn/partition.hpp"

namespace knnn {

/// Result of an exact k-NN query: row ids with their Euclidean
/// distances, sorted by (distance, id) ascending.
struct NeighborQueryResult {
    std::vector<std::uint32_t> ids;
    std::vector<double> distances;
};

/// Exact Euclidean k-NN by linear scan with partial selection. Ties are
/// broken by ascending row id; exclude_id (when given) never appears.
/// Throws NotEnoughNeighbors if fewer than k eligible rows exist,
/// DimensionMismatch if the query width differs from the matrix.
NeighborQueryResult knn_query(const FeatureMatrix& train, std::span<const double> query,
                              std::size_t k,
                              std::optional<std::uint32_t> exclude_id = std::nullopt);

/// Fitted k-NNN model: the training matrix, the feature partition, and
/// for every (training point, feature set) pair the eigenpairs of the
/// covariance of that point's k_nnn nearest neighbors' sub-vectors.
/// Eigenvalues are clamped by EigenPack::apply_floor. Immutable after
/// fit; safe for concurrent queries.
struct TrainedModel {
    FeatureMatrix train;
    PartitionPlan plan;
    std::uint32_t k_nnn = 0;
    std::uint32_t n = 0; // eigenpairs kept per set (per-set count is min(n, width))

    std::vector<linalg::EigenPack> packs; // N * S, index p * S + s

    const linalg::EigenPack& pack(std::size_t point, std::size_t set) const {
        return packs[point * plan.set_count() + set];
    }
};

/// The training phase: for each training point, find its k_nnn nearest
/// neighbors (itself excluded), and per feature set store the top-n
/// eigenpairs of the neighbors' sub-vector covariance.
/// Requires 2 <= k_nnn <= N-1 and 1 <= n <= L.
TrainedModel fit(const FeatureMatrix& train, PartitionPlan plan, std::uint32_t k_nnn,
                 std::uint32_t n, unsigned threads = 1);

} // namespace knnn
