#include "knnn/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

#include "knnn/errors.hpp"
#include "knnn/index.hpp"
#include "knnn/partition.hpp"

namespace knnn::eval {

RocResult auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size())
        throw DimensionMismatch("auroc: scores and labels lengths differ");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (auto l : labels) n_pos += l ? 1 : 0;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw DegenerateLabels("auroc: need at least one positive and one negative");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tie groups, summed for the positives.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t)
            if (labels[order[t]]) rank_sum_pos += avg_rank;
        i = j + 1;
    }

    const double u = rank_sum_pos -
                     static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    RocResult result;
    result.auroc = u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
    result.n_pos = n_pos;
    result.n_neg = n_neg;
    return result;
}

std::vector<SweepRow> sweep(const FeatureMatrix& train, const LabeledSet& test,
                            const std::vector<ScoreConfig>& configs, unsigned threads) {
    if (test.features.rows() != test.labels.size())
        throw DimensionMismatch("sweep: test labels do not match test rows");

    struct FitKey {
        bool reorder;
        std::uint32_t set_width;
        std::uint32_t k_nnn;
        auto operator<=>(const FitKey&) const = default;
    };
    std::map<FitKey, TrainedModel> cache;

    auto resolve_width = [&](std::uint32_t w) {
        return w == 0 ? static_cast<std::uint32_t>(
                            std::min<std::size_t>(5, train.cols()))
                      : w;
    };

    // Non-knnn methods ignore packs and plan, so any cached model with the
    // same training matrix serves them; fit a minimal one if none exists.
    auto model_for = [&](const ScoreConfig& cfg) -> const TrainedModel& {
        const bool needs_packs = cfg.method == Method::knnn && cfg.k_nnn > 0;
        if (!needs_packs && !cache.empty()) return cache.begin()->second;
        const std::uint32_t width = resolve_width(cfg.set_width);
        const std::uint32_t k_nnn =
            needs_packs ? cfg.k_nnn
                        : static_cast<std::uint32_t>(
                              std::min<std::size_t>(25, train.rows() - 1));
        const FitKey key{needs_packs && cfg.reorder, width, k_nnn};
        auto it = cache.find(key);
        if (it == cache.end()) {
            PartitionPlan plan = key.reorder ? correlation_plan(train, width)
                                             : identity_plan(train.cols(), width);
            it = cache.emplace(key, fit(train, std::move(plan), k_nnn, width, threads))
                     .first;
        }
        return it->second;
    };

    std::vector<SweepRow> rows;
    rows.reserve(configs.size());
    for (const auto& cfg : configs) {
        const TrainedModel& model = model_for(cfg);
        Scorer scorer(model, cfg);
        const auto report = scorer.score_matrix(test.features, threads);
        ScoreConfig echoed = cfg;
        if (cfg.method == Method::knnn && cfg.k_nnn > 0 && cfg.set_width == 0)
            echoed.set_width = resolve_width(cfg.set_width);
        rows.push_back({echoed, auroc(report.scores, test.labels).auroc});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "method,k,k_nnn,L,n,reorder,auroc\n";
    char buf[160];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%s,%u,%u,%u,%u,%d,%.6f\n",
                      method_name(row.config.method).c_str(), row.config.k,
                      row.config.k_nnn, row.config.set_width, row.config.n,
                      row.config.reorder ? 1 : 0, row.auroc);
        out += buf;
    }
    return out;
}

} // namespace knnn::eval
