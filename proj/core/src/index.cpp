#include "knnn/index.hpp"

#include <algorithm>
#include <cmath>

#include "knnn/errors.hpp"
#include "knnn/parallel.hpp"

namespace knnn {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

NeighborQueryResult knn_query(const FeatureMatrix& train, std::span<const double> query,
                              std::size_t k, std::optional<std::uint32_t> exclude_id) {
    if (query.size() != train.cols())
        throw DimensionMismatch("knn_query: query dimension differs from training data");
    const std::size_t n = train.rows();
    const std::size_t eligible = n - (exclude_id && *exclude_id < n ? 1 : 0);
    if (k < 1 || k > eligible)
        throw NotEnoughNeighbors("knn_query: k=" + std::to_string(k) + " but only " +
                                 std::to_string(eligible) + " eligible rows");

    std::vector<std::pair<double, std::uint32_t>> heap; // (squared distance, id)
    heap.reserve(k + 1);
    for (std::uint32_t id = 0; id < n; ++id) {
        if (exclude_id && id == *exclude_id) continue;
        const double d2 = squared_distance(train.row(id), query);
        if (heap.size() < k) {
            heap.emplace_back(d2, id);
            std::push_heap(heap.begin(), heap.end());
        } else if (std::pair(d2, id) < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = {d2, id};
            std::push_heap(heap.begin(), heap.end());
        }
    }
    std::sort_heap(heap.begin(), heap.end());

    NeighborQueryResult result;
    result.ids.reserve(k);
    result.distances.reserve(k);
    for (const auto& [d2, id] : heap) {
        result.ids.push_back(id);
        result.distances.push_back(std::sqrt(d2));
    }
    return result;
}

TrainedModel fit(const FeatureMatrix& train, PartitionPlan plan, std::uint32_t k_nnn,
                 std::uint32_t n, unsigned threads) {
    const std::size_t rows = train.rows();
    const std::size_t dim = train.cols();
    if (plan.dim() != dim)
        throw PlanMismatch("fit: plan dimension differs from training data");
    if (k_nnn < 2) throw DegenerateSample("fit: k_nnn must be >= 2");
    if (rows < 2 || k_nnn > rows - 1)
        throw NotEnoughNeighbors("fit: k_nnn=" + std::to_string(k_nnn) + " needs at least " +
                                 std::to_string(k_nnn + 1) + " training rows, have " +
                                 std::to_string(rows));
    if (n < 1 || n > plan.set_width)
        throw BadWidth("fit: n must satisfy 1 <= n <= L");

    const std::size_t sets = plan.set_count();
    TrainedModel model;
    model.train = train;
    model.plan = std::move(plan);
    model.k_nnn = k_nnn;
    model.n = n;
    model.packs.resize(rows * sets);

    parallel_for(rows, threads, [&](std::size_t p) {
        const auto neighbors = knn_query(train, train.row(p), k_nnn,
                                         static_cast<std::uint32_t>(p));
        // Permute each neighbor row once, then slice per set.
        std::vector<std::vector<double>> permuted(k_nnn);
        for (std::size_t i = 0; i < k_nnn; ++i)
            permuted[i] = model.plan.apply(train.row(neighbors.ids[i]));

        for (std::size_t s = 0; s < sets; ++s) {
            const std::size_t begin = model.plan.set_begin(s);
            const std::size_t width = model.plan.set_size(s);
            std::vector<std::span<const double>> sub;
            sub.reserve(k_nnn);
            for (const auto& row : permuted)
                sub.emplace_back(row.data() + begin, width);
            const auto cov = linalg::covariance(sub);
            auto pack = linalg::eig_sym(cov).top(std::min<std::size_t>(n, width));
            pack.apply_floor();
            model.packs[p * sets + s] = std::move(pack);
        }
    });
    return model;
}

} // namespace knnn
