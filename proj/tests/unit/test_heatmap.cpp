#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "knnn/csv.hpp"
#include "knnn/errors.hpp"
#include "knnn/heatmap.hpp"
#include "knnn/rng.hpp"
#include "knnn/synth.hpp"
#include "test_util.hpp"

using namespace knnn;
using test_util::TempDir;

namespace {

TrainedModel arcs_model(std::uint64_t seed = 2) {
    synth::SynthSpec spec;
    spec.shape = synth::Shape::twoarcs;
    spec.noise = 0.05;
    spec.seed = seed;
    auto [train, test] = synth::make_benchmark(spec, 150, 10);
    (void)test;
    return fit(train, identity_plan(2, 2), 25, 2);
}

ScoreConfig knnn_cfg() {
    ScoreConfig cfg;
    cfg.method = Method::knnn;
    cfg.k = 3;
    cfg.k_nnn = 25;
    return cfg;
}

} // namespace

TEST_CASE("a 1x1 grid equals a direct scorer call at the box center") {
    const auto model = arcs_model();
    const auto cfg = knnn_cfg();
    const Box box{{-0.4, 0.1}, {0.6, 0.9}};
    const auto grid = render_heatmap(model, cfg, box, 1, 1);
    REQUIRE(grid.values.size() == 1);
    const Scorer scorer(model, cfg);
    const double center[2] = {0.1, 0.5};
    CHECK(grid.values[0] == scorer.score(center));
    const auto [cx, cy] = grid.cell_center(0, 0);
    CHECK(cx == doctest::Approx(0.1));
    CHECK(cy == doctest::Approx(0.5));
}

TEST_CASE("heatmap CSV re-reads to the direct scorer values") {
    TempDir dir;
    const auto model = arcs_model();
    const auto cfg = knnn_cfg();
    const auto box = synth::shape_bbox(synth::Shape::twoarcs).expanded(0.2);
    const auto grid = render_heatmap(model, cfg, box, 24, 18, 2);
    const auto path = dir.path / "g.csv";
    write_heatmap_csv(grid, path);
    const auto loaded = load_csv(path);
    REQUIRE(loaded.rows() == 18);
    REQUIRE(loaded.cols() == 24);

    const Scorer scorer(model, cfg);
    for (std::uint32_t r = 0; r < grid.height; ++r) {
        for (std::uint32_t c = 0; c < grid.width; ++c) {
            CHECK(loaded.row(r)[c] == grid.at(r, c)); // bitwise via 17-digit csv
            const auto [x, y] = grid.cell_center(r, c);
            const double q[2] = {x, y};
            CHECK(std::abs(grid.at(r, c) - scorer.score(q)) <= 1e-12);
        }
    }
}

TEST_CASE("cells nearest the arcs fall in the low decile of scores") {
    const auto model = arcs_model();
    const auto box = synth::shape_bbox(synth::Shape::twoarcs).expanded(0.2);
    const auto grid = render_heatmap(model, knnn_cfg(), box, 60, 48, 2);

    auto sorted = grid.values;
    std::sort(sorted.begin(), sorted.end());
    const double q10 = sorted[sorted.size() / 10];

    // Every bottom-decile cell must be near a training point.
    for (std::uint32_t r = 0; r < grid.height; ++r) {
        for (std::uint32_t c = 0; c < grid.width; ++c) {
            if (grid.at(r, c) > q10) continue;
            const auto [x, y] = grid.cell_center(r, c);
            double best = 1e300;
            for (std::size_t i = 0; i < model.train.rows(); ++i) {
                const auto row = model.train.row(i);
                best = std::min(best, std::hypot(x - row[0], y - row[1]));
            }
            CHECK(best <= 0.15);
        }
    }
}

TEST_CASE("PGM bytes are invariant under affine score rescaling") {
    TempDir dir;
    const auto model = arcs_model();
    const auto box = synth::shape_bbox(synth::Shape::twoarcs).expanded(0.2);
    auto grid = render_heatmap(model, knnn_cfg(), box, 30, 20, 2);

    const auto p1 = dir.path / "a.pgm";
    write_heatmap_pgm(grid, p1);

    auto rescaled = grid;
    for (auto& v : rescaled.values) v = 2.5 * v + 7.0;
    const auto p2 = dir.path / "b.pgm";
    write_heatmap_pgm(rescaled, p2);

    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)),
                         std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)),
                         std::istreambuf_iterator<char>());
    CHECK(b1 == b2);

    // Valid P5 header, max byte 255, payload size matches.
    std::istringstream header(b1.substr(0, 64));
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    header >> magic >> w >> h >> maxval;
    CHECK(magic == "P5");
    CHECK(w == 30);
    CHECK(h == 20);
    CHECK(maxval == 255);
    CHECK(b1.size() == static_cast<std::size_t>(header.tellg()) + 1 + 30 * 20);
}

TEST_CASE("constant grids render as all-zero PGMs") {
    TempDir dir;
    HeatmapGrid grid;
    grid.bbox = Box{{0, 0}, {1, 1}};
    grid.width = 4;
    grid.height = 2;
    grid.values.assign(8, 5.5);
    const auto p = dir.path / "c.pgm";
    write_heatmap_pgm(grid, p);
    std::ifstream f(p, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(f)),
                            std::istreambuf_iterator<char>());
    const auto payload = bytes.substr(bytes.size() - 8);
    for (char b : payload) CHECK(b == 0);
}

TEST_CASE("grid rows run top to bottom") {
    HeatmapGrid grid;
    grid.bbox = Box{{0, 0}, {4, 2}};
    grid.width = 4;
    grid.height = 2;
    grid.values.assign(8, 0.0);
    const auto [x0, y0] = grid.cell_center(0, 0);
    const auto [x1, y1] = grid.cell_center(1, 0);
    CHECK(x0 == x1);
    CHECK(y0 == doctest::Approx(1.5)); // row 0 sits at the top of the box
    CHECK(y1 == doctest::Approx(0.5));
    const auto [x3, y3] = grid.cell_center(0, 3);
    CHECK(x3 == doctest::Approx(3.5));
    CHECK(y3 == y0);
}

TEST_CASE("render_heatmap rejects non-2-D models") {
    Rng rng(3);
    FeatureMatrix train;
    std::vector<double> row(3);
    for (int i = 0; i < 10; ++i) {
        for (auto& v : row) v = rng.uniform();
        train.append_row(row);
    }
    const auto model = fit(train, identity_plan(3, 3), 3, 3);
    CHECK_THROWS_AS(
        render_heatmap(model, knnn_cfg(), Box{{0, 0}, {1, 1}}, 4, 4),
        DimensionError);
}
