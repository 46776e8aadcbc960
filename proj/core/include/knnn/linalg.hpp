#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace knnn::linalg {

/// Dense symmetric matrix, row-major. Construction symmetrizes the
/// input by averaging (a_ij + a_ji) / 2, so entries(i,j) == entries(j,i)
/// holds exactly afterwards.
class SymmetricMatrix {
public:
    SymmetricMatrix(std::size_t dim, std::vector<double> entries);

    /// Zero matrix of the given dimension.
    explicit SymmetricMatrix(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    double& at(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    std::span<const double> data() const noexcept { return entries_; }

private:
    std::size_t dim_;
    std::vector<double> entries_;
};

/// Eigenpairs of a symmetric matrix: `values` sorted non-increasing,
/// `vectors` the matching unit-norm column vectors stored contiguously
/// (component c of eigenvector j at vectors[j * dim + c]).
struct EigenPack {
    std::size_t dim = 0;
    std::vector<double> values;
    std::vector<double> vectors;

    std::size_t count() const noexcept { return values.size(); }
    std::span<const double> vec(std::size_t j) const {
        return {vectors.data() + j * dim, dim};
    }

    /// Copy of the leading n eigenpairs (n clamped to count()).
    EigenPack top(std::size_t n) const;

    /// Clamps every eigenvalue to rel * (leading eigenvalue, or 1 if the
    /// leading one is <= 0). Keeps the 1/sqrt(e) weighting finite on
    /// rank-deficient covariances.
    void apply_floor(double rel = kEigenvalueFloorRel);

    static constexpr double kEigenvalueFloorRel = 1e-6;
};

struct EigOptions {
    std::size_t max_dim = 64;
    int max_sweeps = 100;
    double tol = 1e-12; // convergence: off-diagonal norm <= tol * ||A||_F
};

/// Unbiased sample covariance (1/(m-1) normalization). Accumulation
/// order is fixed by sorting samples lexicographically, so the result
/// is bit-identical under any reordering of the input.
/// Throws DegenerateSample if m < 2 or dimensions disagree.
SymmetricMatrix covariance(std::span<const std::span<const double>> samples);
SymmetricMatrix covariance(const std::vector<std::vector<double>>& samples);

/// Full eigendecomposition by cyclic Jacobi rotations. Eigenvalues
/// unfloored, sorted descending; each eigenvector's sign is fixed so its
/// largest-magnitude component is positive.
/// Throws DimensionMismatch if dim exceeds opts.max_dim, NoConvergence
/// if the off-diagonal norm is not below opts.tol * ||A||_F within
/// opts.max_sweeps sweeps.
EigenPack eig_sym(const SymmetricMatrix& matrix, const EigOptions& opts = {});

/// Pearson correlation coefficient, clamped to [-1, 1]. Returns exactly
/// 0 when either column has zero variance. Throws DimensionMismatch on
/// length disagreement, DegenerateSample if fewer than 2 entries.
double pearson(std::span<const double> col_a, std::span<const double> col_b);

} // namespace knnn::linalg
