#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "knnn/feature_matrix.hpp"

namespace knnn {

// Embedding CSV: UTF-8, LF or CRLF line endings, ',' delimiter, no
// quoting, numeric fields only (decimal or scientific). Label CSV: one
// integer (0 or 1) per line. Writers emit 17 significant digits so a
// load/save/load cycle reproduces values exactly.

/// Throws ParseError (with 1-based file line) on any malformed row,
/// EmptyInput when no data rows remain.
FeatureMatrix load_csv(const std::filesystem::path& path, bool has_header = false);

void save_csv(const FeatureMatrix& matrix, const std::filesystem::path& path);

std::vector<std::uint8_t> load_labels(const std::filesystem::path& path);

void save_labels(const std::vector<std::uint8_t>& labels,
                 const std::filesystem::path& path);

/// Single-column score file (one score per line, 17 significant digits).
std::vector<double> load_scores(const std::filesystem::path& path);
void save_scores(const std::vector<double>& scores, const std::filesystem::path& path);

/// Formats one double with 17 significant digits ("%.17g").
std::string format_double(double value);

} // namespace knnn
