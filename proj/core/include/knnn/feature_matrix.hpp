#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace knnn {

/// N x D matrix of feature vectors with dense 0-based row ids.
/// Immutable after construction apart from append during building;
/// entries are validated finite at ingest.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t cols, std::vector<double> data);

    /// Appends one row; fixes D on first append. Throws DimensionMismatch
    /// on width disagreement.
    void append_row(std::span<const double> row);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<const double> data() const noexcept { return data_; }

    /// Column copy (used by correlation computations).
    std::vector<double> column(std::size_t c) const;

    bool operator==(const FeatureMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Feature vectors plus one binary label per row (0 = normal, 1 = anomalous).
struct LabeledSet {
    FeatureMatrix features;
    std::vector<std::uint8_t> labels;
};

/// Seeded random split: a Fisher-Yates permutation (see Rng) of the rows,
/// first ceil(N/2) to train, rest to test. Same seed, same split.
/// Throws EmptyInput if the matrix has fewer than 2 rows.
std::pair<FeatureMatrix, FeatureMatrix> split_half(const FeatureMatrix& matrix,
                                                   std::uint64_t seed);

} // namespace knnn
