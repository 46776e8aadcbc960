#include <benchmark/benchmark.h>

#include <vector>

#include "knnn/eval.hpp"
#include "knnn/index.hpp"
#include "knnn/linalg.hpp"
#include "knnn/partition.hpp"
#include "knnn/rng.hpp"
#include "knnn/scoring.hpp"

namespace {

knnn::FeatureMatrix random_matrix(std::size_t rows, std::size_t dim,
                                  std::uint64_t seed = 42) {
    knnn::Rng rng(seed);
    knnn::FeatureMatrix m;
    std::vector<double> row(dim);
    for (std::size_t r = 0; r < rows; ++r) {
        for (auto& v : row) v = rng.normal();
        m.append_row(row);
    }
    return m;
}

void BM_EigSym(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    knnn::Rng rng(7);
    std::vector<double> entries(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
            const double v = rng.uniform() * 2 - 1;
            entries[i * dim + j] = v;
            entries[j * dim + i] = v;
        }
    const knnn::linalg::SymmetricMatrix mat(dim, entries);
    for (auto _ : state) {
        auto pack = knnn::linalg::eig_sym(mat);
        benchmark::DoNotOptimize(pack);
    }
}
BENCHMARK(BM_EigSym)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_KnnQuery(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto dim = static_cast<std::size_t>(state.range(1));
    const auto train = random_matrix(rows, dim);
    knnn::Rng rng(9);
    std::vector<double> q(dim);
    for (auto& v : q) v = rng.normal();
    for (auto _ : state) {
        auto result = knnn::knn_query(train, q, 25);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_KnnQuery)->Args({1000, 64})->Args({5000, 64})->Args({5000, 512});

void BM_Fit(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto dim = static_cast<std::size_t>(state.range(1));
    const auto train = random_matrix(rows, dim);
    const auto width = std::min<std::size_t>(5, dim);
    for (auto _ : state) {
        auto model = knnn::fit(train, knnn::identity_plan(dim, width), 25,
                               static_cast<std::uint32_t>(width), 1);
        benchmark::DoNotOptimize(model);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}
BENCHMARK(BM_Fit)->Args({500, 2})->Args({500, 64})->Args({1000, 128})->Unit(benchmark::kMillisecond);

void BM_ScoreKnnn(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto dim = static_cast<std::size_t>(state.range(1));
    const auto train = random_matrix(rows, dim);
    const auto width = std::min<std::size_t>(5, dim);
    const auto model = knnn::fit(train, knnn::identity_plan(dim, width), 25,
                                 static_cast<std::uint32_t>(width), 2);
    knnn::ScoreConfig cfg;
    cfg.method = knnn::Method::knnn;
    cfg.k = 3;
    cfg.k_nnn = 25;
    const knnn::Scorer scorer(model, cfg);
    knnn::Rng rng(11);
    std::vector<double> q(dim);
    for (auto& v : q) v = rng.normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(scorer.score(q));
    }
}
BENCHMARK(BM_ScoreKnnn)->Args({1000, 64})->Args({5000, 512});

void BM_CorrelationPlan(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const auto train = random_matrix(600, dim);
    for (auto _ : state) {
        auto plan = knnn::correlation_plan(train, 5);
        benchmark::DoNotOptimize(plan);
    }
    state.SetComplexityN(static_cast<std::int64_t>(dim));
}
BENCHMARK(BM_CorrelationPlan)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Auroc(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    knnn::Rng rng(13);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = rng.uniform();
        labels[i] = rng.uniform() < 0.5 ? 1 : 0;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(knnn::eval::auroc(scores, labels));
    }
}
BENCHMARK(BM_Auroc)->Arg(1000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
