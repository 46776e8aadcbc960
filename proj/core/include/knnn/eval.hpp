#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "knnn/feature_matrix.hpp"
#include "knnn/scoring.hpp"

namespace knnn::eval {

struct RocResult {
    double auroc = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

/// AUROC via the rank-sum (Mann-Whitney) identity with average ranks for
/// ties: the probability that a random positive outscores a random
/// negative, ties counted as 1/2. Throws DegenerateLabels when one class
/// is missing, DimensionMismatch on length disagreement.
RocResult auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct SweepRow {
    ScoreConfig config;
    double auroc = 0.0;
};

/// Runs every config against the benchmark, refitting only once per
/// distinct (reorder, L, k_nnn) combination, and tabulates AUROC per
/// config in input order.
std::vector<SweepRow> sweep(const FeatureMatrix& train, const LabeledSet& test,
                            const std::vector<ScoreConfig>& configs,
                            unsigned threads = 1);

/// CSV form of the sweep table: "method,k,k_nnn,L,n,reorder,auroc".
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace knnn::eval
