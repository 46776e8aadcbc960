#include "knnn/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "knnn/csv.hpp"
#include "knnn/errors.hpp"
#include "knnn/parallel.hpp"

namespace knnn {

std::pair<double, double> HeatmapGrid::cell_center(std::uint32_t row,
                                                   std::uint32_t col) const {
    const double dx = bbox.extent(0) / width;
    const double dy = bbox.extent(1) / height;
    const double x = bbox.lo[0] + (col + 0.5) * dx;
    const double y = bbox.hi[1] - (row + 0.5) * dy; // row 0 = top
    return {x, y};
}

HeatmapGrid render_heatmap(const TrainedModel& model, const ScoreConfig& config,
                           const Box& bbox, std::uint32_t width, std::uint32_t height,
                           unsigned threads) {
    if (model.train.cols() != 2)
        throw DimensionError("render_heatmap: model must be 2-D");
    if (bbox.dim() != 2) throw DimensionError("render_heatmap: bbox must be 2-D");
    bbox.validate();
    if (width == 0 || height == 0)
        throw BadSpec("render_heatmap: resolution must be positive");

    HeatmapGrid grid;
    grid.bbox = bbox;
    grid.width = width;
    grid.height = height;
    grid.values.resize(std::size_t{width} * height);

    Scorer scorer(model, config);
    parallel_for(grid.values.size(), threads, [&](std::size_t cell) {
        const auto row = static_cast<std::uint32_t>(cell / width);
        const auto col = static_cast<std::uint32_t>(cell % width);
        const auto [x, y] = grid.cell_center(row, col);
        const double q[2] = {x, y};
        grid.values[cell] = scorer.score(q);
    });
    return grid;
}

void write_heatmap_csv(const HeatmapGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EmptyInput("cannot open file for writing: " + path.string());
    for (std::uint32_t r = 0; r < grid.height; ++r) {
        for (std::uint32_t c = 0; c < grid.width; ++c) {
            if (c) out << ',';
            out << format_double(grid.at(r, c));
        }
        out << '\n';
    }
}

void write_heatmap_pgm(const HeatmapGrid& grid, const std::filesystem::path& path) {
    const auto [lo_it, hi_it] = std::minmax_element(grid.values.begin(), grid.values.end());
    const double lo = *lo_it, hi = *hi_it;
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw EmptyInput("cannot open file for writing: " + path.string());
    out << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    std::vector<std::uint8_t> bytes(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        bytes[i] = static_cast<std::uint8_t>(std::lround((grid.values[i] - lo) * scale));
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

} // namespace knnn
