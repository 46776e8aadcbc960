#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "knnn/box.hpp"
#include "knnn/scoring.hpp"

namespace knnn {

/// Dense scorer evaluation over a 2-D box. Values are stored row-major
/// with row 0 the top of the image (max y); cell (r, c) is evaluated at
/// the cell center.
struct HeatmapGrid {
    Box bbox;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<double> values;

    double at(std::uint32_t row, std::uint32_t col) const {
        return values[std::size_t{row} * width + col];
    }
    /// Center of cell (row, col) in data coordinates.
    std::pair<double, double> cell_center(std::uint32_t row, std::uint32_t col) const;
};

/// Evaluates the configured scorer at every cell center.
/// Throws DimensionError unless the model (and box) are 2-D.
HeatmapGrid render_heatmap(const TrainedModel& model, const ScoreConfig& config,
                           const Box& bbox, std::uint32_t width, std::uint32_t height,
                           unsigned threads = 1);

/// Raw scores, one grid row per line, 17 significant digits.
void write_heatmap_csv(const HeatmapGrid& grid, const std::filesystem::path& path);

/// Binary PGM (P5), min-max normalized: the highest score maps to 255.
/// A constant grid renders as all zeros.
void write_heatmap_pgm(const HeatmapGrid& grid, const std::filesystem::path& path);

} // namespace knnn
