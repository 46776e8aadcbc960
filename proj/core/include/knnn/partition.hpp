#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "knnn/feature_matrix.hpp"

namespace knnn {

/// A permutation of the D feature indices plus the boundaries splitting
/// the permuted order into S = ceil(D/L) contiguous sets of width L
/// (the last set may be narrower).
struct PartitionPlan {
    std::vector<std::uint32_t> permutation; // permutation[i] = source feature at position i
    std::uint32_t set_width = 0;            // L

    std::size_t dim() const noexcept { return permutation.size(); }
    std::size_t set_count() const noexcept {
        return (dim() + set_width - 1) / set_width;
    }
    std::size_t set_begin(std::size_t s) const noexcept { return s * set_width; }
    std::size_t set_size(std::size_t s) const noexcept {
        const std::size_t begin = set_begin(s);
        return std::min<std::size_t>(set_width, dim() - begin);
    }

    /// dst[i] = src[permutation[i]]; dst must have size D.
    void apply(std::span<const double> src, std::span<double> dst) const;
    std::vector<double> apply(std::span<const double> src) const;

    /// Inverse permutation: invert(apply(x)) == x.
    std::vector<double> invert(std::span<const double> permuted) const;

    bool operator==(const PartitionPlan&) const = default;
};

/// Identity permutation, contiguous sets of width L.
/// Throws BadWidth unless 1 <= L <= D.
PartitionPlan identity_plan(std::size_t dim, std::size_t set_width);

/// Greedy correlation-driven reordering: position 0 keeps feature 0,
/// position 1 takes the unplaced feature with the highest |Pearson| to
/// it, and each later position takes the unplaced feature maximizing the
/// mean |Pearson| against the previous two placed features. When a set
/// fills to L the next set opens with the unplaced feature minimizing
/// that same mean against the previous set's last two features. Ties go
/// to the lowest original feature index.
PartitionPlan correlation_plan(const FeatureMatrix& train, std::size_t set_width);

} // namespace knnn
