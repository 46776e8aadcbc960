#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knnn/index.hpp"

namespace knnn {

enum class Method { knn, global, local, knnn };

Method method_from_string(const std::string& name); // throws BadSpec
std::string method_name(Method method);

/// Scoring configuration. n = 0 means "all available eigenpairs";
/// set_width = 0 means "auto": min(5, D). k_nnn = 0 with method knnn is
/// an alias for plain knn.
struct ScoreConfig {
    Method method = Method::knnn;
    std::uint32_t k = 3;
    std::uint32_t k_nnn = 25;
    std::uint32_t n = 0;
    std::uint32_t set_width = 0;
    bool reorder = true;
};

/// Per-neighbor, per-set partial sums of a k-NNN score.
struct NeighborBreakdown {
    std::uint32_t neighbor_id = 0;
    std::vector<double> per_set;
};
using Breakdown = std::vector<NeighborBreakdown>;

struct ScoreReport {
    std::vector<double> scores;
    ScoreConfig config;
    std::vector<Breakdown> breakdowns; // empty unless requested
};

/// Baseline: sum of Euclidean distances to the k nearest training rows.
double score_knn(const TrainedModel& model, std::span<const double> query, std::uint32_t k);

/// Global eigen normalization: one eigendecomposition of the whole
/// training covariance; AS = sum_i sum_j |(f - f_i) . v_j| / sqrt(e_j).
/// The overload without a pack computes it on the fly (convenient for
/// single queries); batch work should reuse compute_global_pack once.
linalg::EigenPack compute_global_pack(const TrainedModel& model, std::uint32_t n);
double score_global(const TrainedModel& model, const linalg::EigenPack& global_pack,
                    std::span<const double> query, std::uint32_t k);
double score_global(const TrainedModel& model, std::span<const double> query,
                    std::uint32_t k, std::uint32_t n);

/// Local eigen normalization: eigenpairs of the covariance of the
/// query's own k nearest training neighbors, computed at query time.
/// Requires k >= 2.
double score_local(const TrainedModel& model, std::span<const double> query,
                   std::uint32_t k, std::uint32_t n);

/// The k-NNN operator: neighbors found on full vectors, each neighbor's
/// stored per-set eigenpairs weight the permuted difference,
/// AS = sum_i sum_j sum_s |(f_s - f_{i,s}) . v_{ij,s}| / sqrt(e_{ij,s}).
std::pair<double, Breakdown> score_knnn(const TrainedModel& model,
                                        std::span<const double> query,
                                        const ScoreConfig& config);

/// Facade binding a model to one configuration; resolves defaults and
/// precomputes the global pack when needed. Read-only after
/// construction, safe for concurrent scoring.
class Scorer {
public:
    Scorer(const TrainedModel& model, ScoreConfig config);

    double score(std::span<const double> query) const;
    std::pair<double, Breakdown> score_with_breakdown(std::span<const double> query) const;

    /// Scores every row; parallel across queries.
    ScoreReport score_matrix(const FeatureMatrix& queries, unsigned threads = 1,
                             bool with_breakdown = false) const;

    const ScoreConfig& config() const noexcept { return config_; }

private:
    const TrainedModel* model_;
    ScoreConfig config_;
    std::optional<linalg::EigenPack> global_;
};

} // namespace knnn
