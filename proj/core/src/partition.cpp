#include "knnn/partition.hpp"

#include <algorithm>
#include <cmath>

#include "knnn/errors.hpp"
#include "knnn/linalg.hpp"

namespace knnn {

void PartitionPlan::apply(std::span<const double> src, std::span<double> dst) const {
    if (src.size() != dim() || dst.size() != dim())
        throw PlanMismatch("PartitionPlan::apply: vector dimension differs from plan");
    for (std::size_t i = 0; i < permutation.size(); ++i) dst[i] = src[permutation[i]];
}

std::vector<double> PartitionPlan::apply(std::span<const double> src) const {
    std::vector<double> dst(dim());
    apply(src, dst);
    return dst;
}

std::vector<double> PartitionPlan::invert(std::span<const double> permuted) const {
    if (permuted.size() != dim())
        throw PlanMismatch("PartitionPlan::invert: vector dimension differs from plan");
    std::vector<double> out(dim());
    for (std::size_t i = 0; i < permutation.size(); ++i) out[permutation[i]] = permuted[i];
    return out;
}

namespace {

void check_width(std::size_t dim, std::size_t set_width) {
    if (set_width < 1 || set_width > dim)
        throw BadWidth("set width must satisfy 1 <= L <= D (got L=" +
                       std::to_string(set_width) + ", D=" + std::to_string(dim) + ")");
}

} // namespace

PartitionPlan identity_plan(std::size_t dim, std::size_t set_width) {
    check_width(dim, set_width);
    PartitionPlan plan;
    plan.set_width = static_cast<std::uint32_t>(set_width);
    plan.permutation.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) plan.permutation[i] = static_cast<std::uint32_t>(i);
    return plan;
}

PartitionPlan correlation_plan(const FeatureMatrix& train, std::size_t set_width) {
    const std::size_t dim = train.cols();
    check_width(dim, set_width);
    if (train.rows() < 2)
        throw DegenerateSample("correlation_plan: need at least 2 training rows");

    // |Pearson| between all feature pairs, computed once.
    std::vector<std::vector<double>> columns(dim);
    for (std::size_t c = 0; c < dim; ++c) columns[c] = train.column(c);
    std::vector<double> corr(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        corr[i * dim + i] = 1.0;
        for (std::size_t j = i + 1; j < dim; ++j) {
            const double r = std::abs(linalg::pearson(columns[i], columns[j]));
            corr[i * dim + j] = r;
            corr[j * dim + i] = r;
        }
    }

    std::vector<bool> placed(dim, false);
    std::vector<std::uint32_t> order;
    order.reserve(dim);
    order.push_back(0); // first entry stays in place
    placed[0] = true;

    // Mean |corr| of candidate c against the up-to-two entries at the
    // back of `refs` (fewer when fewer exist).
    auto mean_corr = [&](std::size_t c) {
        const std::size_t have = std::min<std::size_t>(order.size(), 2);
        double sum = 0.0;
        for (std::size_t r = 0; r < have; ++r)
            sum += corr[c * dim + order[order.size() - 1 - r]];
        return sum / static_cast<double>(have);
    };

    while (order.size() < dim) {
        const bool starts_set = order.size() % set_width == 0;
        std::size_t best = dim;
        double best_score = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            if (placed[c]) continue;
            const double score = mean_corr(c);
            // Strict inequality keeps the lowest original index on ties.
            const bool better = best == dim || (starts_set ? score < best_score
                                                           : score > best_score);
            if (better) {
                best = c;
                best_score = score;
            }
        }
        order.push_back(static_cast<std::uint32_t>(best));
        placed[best] = true;
    }

    PartitionPlan plan;
    plan.set_width = static_cast<std::uint32_t>(set_width);
    plan.permutation = std::move(order);
    return plan;
}

} // namespace knnn
