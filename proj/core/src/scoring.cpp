#include "knnn/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "knnn/errors.hpp"
#include "knnn/parallel.hpp"

namespace knnn {

Method method_from_string(const std::string& name) {
    if (name == "knn") return Method::knn;
    if (name == "global") return Method::global;
    if (name == "local") return Method::local;
    if (name == "knnn") return Method::knnn;
    throw BadSpec("unknown method '" + name + "' (expected knn|global|local|knnn)");
}

std::string method_name(Method method) {
    switch (method) {
        case Method::knn: return "knn";
        case Method::global: return "global";
        case Method::local: return "local";
        case Method::knnn: return "knnn";
    }
    return "?";
}

namespace {

// sum_j |diff . v_j| / sqrt(e_j) over the pack's eigenpairs.
double normalized_projection_sum(const linalg::EigenPack& pack,
                                 std::span<const double> diff, std::size_t n_used) {
    double sum = 0.0;
    n_used = std::min(n_used, pack.count());
    for (std::size_t j = 0; j < n_used; ++j) {
        const auto v = pack.vec(j);
        double dot = 0.0;
        for (std::size_t c = 0; c < v.size(); ++c) dot += diff[c] * v[c];
        sum += std::abs(dot) / std::sqrt(pack.values[j]);
    }
    return sum;
}

// Eigenpairs of the covariance of the given training rows (full width),
// floored, truncated to n (n = 0 keeps all). Raises the eig dimension
// limit to D: the partition machinery is what keeps per-set widths
// small; global/local normalization intentionally work on full vectors.
linalg::EigenPack eigen_of_rows(const FeatureMatrix& train,
                                std::span<const std::uint32_t> ids, std::uint32_t n) {
    std::vector<std::span<const double>> rows;
    rows.reserve(ids.size());
    for (auto id : ids) rows.emplace_back(train.row(id));
    const auto cov = linalg::covariance(rows);
    linalg::EigOptions opts;
    opts.max_dim = std::max<std::size_t>(opts.max_dim, train.cols());
    auto pack = linalg::eig_sym(cov, opts);
    if (n > 0) pack = pack.top(n);
    pack.apply_floor();
    return pack;
}

} // namespace

double score_knn(const TrainedModel& model, std::span<const double> query, std::uint32_t k) {
    const auto result = knn_query(model.train, query, k);
    double sum = 0.0;
    for (double d : result.distances) sum += d;
    return sum;
}

linalg::EigenPack compute_global_pack(const TrainedModel& model, std::uint32_t n) {
    if (model.train.rows() < 2)
        throw DegenerateSample("global pack: need at least 2 training rows");
    std::vector<std::uint32_t> all(model.train.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
    return eigen_of_rows(model.train, all, n);
}

double score_global(const TrainedModel& model, const linalg::EigenPack& global_pack,
                    std::span<const double> query, std::uint32_t k) {
    const auto result = knn_query(model.train, query, k);
    std::vector<double> diff(query.size());
    double score = 0.0;
    for (auto id : result.ids) {
        const auto row = model.train.row(id);
        for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = query[c] - row[c];
        score += normalized_projection_sum(global_pack, diff, global_pack.count());
    }
    return score;
}

double score_global(const TrainedModel& model, std::span<const double> query,
                    std::uint32_t k, std::uint32_t n) {
    return score_global(model, compute_global_pack(model, n), query, k);
}

double score_local(const TrainedModel& model, std::span<const double> query,
                   std::uint32_t k, std::uint32_t n) {
    if (k < 2) throw DegenerateSample("score_local: covariance needs k >= 2 neighbors");
    const auto result = knn_query(model.train, query, k);
    const auto pack = eigen_of_rows(model.train, result.ids, n);
    std::vector<double> diff(query.size());
    double score = 0.0;
    for (auto id : result.ids) {
        const auto row = model.train.row(id);
        for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = query[c] - row[c];
        score += normalized_projection_sum(pack, diff, pack.count());
    }
    return score;
}

std::pair<double, Breakdown> score_knnn(const TrainedModel& model,
                                        std::span<const double> query,
                                        const ScoreConfig& config) {
    if (query.size() != model.plan.dim())
        throw PlanMismatch("score_knnn: query dimension differs from the model's plan");
    const auto result = knn_query(model.train, query, config.k);
    const std::size_t sets = model.plan.set_count();
    const std::size_t n_used = config.n == 0 ? model.n : std::min(config.n, model.n);

    const auto permuted_query = model.plan.apply(query);
    std::vector<double> diff(query.size());

    double score = 0.0;
    Breakdown breakdown;
    breakdown.reserve(result.ids.size());
    for (std::size_t i = 0; i < result.ids.size(); ++i) {
        const std::uint32_t id = result.ids[i];
        const auto permuted_row = model.plan.apply(model.train.row(id));
        for (std::size_t c = 0; c < diff.size(); ++c)
            diff[c] = permuted_query[c] - permuted_row[c];

        NeighborBreakdown entry;
        entry.neighbor_id = id;
        entry.per_set.resize(sets);
        for (std::size_t s = 0; s < sets; ++s) {
            const auto& pack = model.pack(id, s);
            const std::span<const double> sub(diff.data() + model.plan.set_begin(s),
                                              model.plan.set_size(s));
            const double partial = normalized_projection_sum(pack, sub, n_used);
            entry.per_set[s] = partial;
            score += partial;
        }
        breakdown.push_back(std::move(entry));
    }
    return {score, std::move(breakdown)};
}

Scorer::Scorer(const TrainedModel& model, ScoreConfig config)
    : model_(&model), config_(config) {
    if (config_.method == Method::knnn && config_.k_nnn == 0)
        config_.method = Method::knn; // k_nnn = 0 degenerates to plain knn
    if (config_.k < 1) throw BadSpec("scorer: k must be >= 1");
    if (config_.method == Method::global)
        global_ = compute_global_pack(*model_, config_.n);
}

double Scorer::score(std::span<const double> query) const {
    switch (config_.method) {
        case Method::knn: return score_knn(*model_, query, config_.k);
        case Method::global: return score_global(*model_, *global_, query, config_.k);
        case Method::local: return score_local(*model_, query, config_.k, config_.n);
        case Method::knnn: return score_knnn(*model_, query, config_).first;
    }
    throw BadSpec("scorer: invalid method");
}

std::pair<double, Breakdown> Scorer::score_with_breakdown(
    std::span<const double> query) const {
    if (config_.method == Method::knnn) return score_knnn(*model_, query, config_);
    return {score(query), {}};
}

ScoreReport Scorer::score_matrix(const FeatureMatrix& queries, unsigned threads,
                                 bool with_breakdown) const {
    if (queries.empty()) throw EmptyInput("score_matrix: no queries");
    ScoreReport report;
    report.config = config_;
    report.scores.resize(queries.rows());
    if (with_breakdown) report.breakdowns.resize(queries.rows());
    parallel_for(queries.rows(), threads, [&](std::size_t i) {
        if (with_breakdown) {
            auto [s, b] = score_with_breakdown(queries.row(i));
            report.scores[i] = s;
            report.breakdowns[i] = std::move(b);
        } else {
            report.scores[i] = score(queries.row(i));
        }
    });
    return report;
}

} // namespace knnn
