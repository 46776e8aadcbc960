#include "knnn/feature_matrix.hpp"

#include <cmath>

#include "knnn/errors.hpp"
#include "knnn/rng.hpp"

namespace knnn {

FeatureMatrix::FeatureMatrix(std::size_t cols, std::vector<double> data)
    : cols_(cols), data_(std::move(data)) {
    if (cols_ == 0) throw DimensionMismatch("FeatureMatrix: D must be >= 1");
    if (data_.size() % cols_ != 0)
        throw DimensionMismatch("FeatureMatrix: data size not a multiple of D");
    rows_ = data_.size() / cols_;
    for (double v : data_)
        if (!std::isfinite(v))
            throw DimensionMismatch("FeatureMatrix: non-finite entry");
}

void FeatureMatrix::append_row(std::span<const double> row) {
    if (rows_ == 0 && cols_ == 0) {
        if (row.empty()) throw DimensionMismatch("FeatureMatrix: empty row");
        cols_ = row.size();
    } else if (row.size() != cols_) {
        throw DimensionMismatch("FeatureMatrix: row width disagrees");
    }
    for (double v : row)
        if (!std::isfinite(v))
            throw DimensionMismatch("FeatureMatrix: non-finite entry");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
}

std::vector<double> FeatureMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i * cols_ + c];
    return out;
}

std::pair<FeatureMatrix, FeatureMatrix> split_half(const FeatureMatrix& matrix,
                                                   std::uint64_t seed) {
    const std::size_t n = matrix.rows();
    if (n < 2) throw EmptyInput("split_half: need at least 2 rows");

    Rng rng(seed);
    const auto perm = rng.permutation(n);
    const std::size_t n_train = (n + 1) / 2;

    FeatureMatrix train, test;
    for (std::size_t i = 0; i < n; ++i) {
        auto& dst = i < n_train ? train : test;
        dst.append_row(matrix.row(perm[i]));
    }
    return {std::move(train), std::move(test)};
}

} // namespace knnn
