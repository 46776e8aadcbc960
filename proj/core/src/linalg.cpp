#include "knnn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "knnn/errors.hpp"

namespace knnn::linalg {

SymmetricMatrix::SymmetricMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim_ < 1) throw DimensionMismatch("SymmetricMatrix: dim must be >= 1");
    if (entries_.size() != dim_ * dim_)
        throw DimensionMismatch("SymmetricMatrix: entry count does not match dim*dim");
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            const double avg = (entries_[i * dim_ + j] + entries_[j * dim_ + i]) / 2.0;
            entries_[i * dim_ + j] = avg;
            entries_[j * dim_ + i] = avg;
        }
    }
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim)
    : dim_(dim), entries_(dim * dim, 0.0) {
    if (dim_ < 1) throw DimensionMismatch("SymmetricMatrix: dim must be >= 1");
}

EigenPack EigenPack::top(std::size_t n) const {
    n = std::min(n, count());
    EigenPack out;
    out.dim = dim;
    out.values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
    out.vectors.assign(vectors.begin(), vectors.begin() + static_cast<std::ptrdiff_t>(n * dim));
    return out;
}

void EigenPack::apply_floor(double rel) {
    if (values.empty()) return;
    const double lead = values.front();
    const double floor = rel * (lead > 0.0 ? lead : 1.0);
    for (double& v : values) v = std::max(v, floor);
}

namespace {

SymmetricMatrix covariance_impl(const std::vector<std::span<const double>>& samples) {
    const std::size_t m = samples.size();
    if (m < 2) throw DegenerateSample("covariance: need at least 2 samples");
    const std::size_t dim = samples.front().size();
    if (dim < 1) throw DegenerateSample("covariance: samples must be non-empty vectors");
    for (const auto& s : samples)
        if (s.size() != dim)
            throw DegenerateSample("covariance: sample dimensions disagree");

    // Fixed accumulation order: lexicographic by value. Makes the result
    // exactly invariant under permutation of the input samples.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(samples[a].begin(), samples[a].end(),
                                            samples[b].begin(), samples[b].end());
    });

    std::vector<double> mean(dim, 0.0);
    for (std::size_t idx : order)
        for (std::size_t c = 0; c < dim; ++c) mean[c] += samples[idx][c];
    for (double& v : mean) v /= static_cast<double>(m);

    std::vector<double> acc(dim * dim, 0.0);
    std::vector<double> dev(dim);
    for (std::size_t idx : order) {
        for (std::size_t c = 0; c < dim; ++c) dev[c] = samples[idx][c] - mean[c];
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) acc[i * dim + j] += dev[i] * dev[j];
    }
    const double norm = 1.0 / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
            const double v = acc[i * dim + j] * norm;
            acc[i * dim + j] = v;
            acc[j * dim + i] = v;
        }
    return SymmetricMatrix(dim, std::move(acc));
}

} // namespace

SymmetricMatrix covariance(std::span<const std::span<const double>> samples) {
    return covariance_impl({samples.begin(), samples.end()});
}

SymmetricMatrix covariance(const std::vector<std::vector<double>>& samples) {
    std::vector<std::span<const double>> views;
    views.reserve(samples.size());
    for (const auto& s : samples) views.emplace_back(s);
    return covariance_impl(views);
}

EigenPack eig_sym(const SymmetricMatrix& matrix, const EigOptions& opts) {
    const std::size_t n = matrix.dim();
    if (n > opts.max_dim)
        throw DimensionMismatch("eig_sym: dim " + std::to_string(n) + " exceeds limit " +
                                std::to_string(opts.max_dim));

    std::vector<double> a(matrix.data().begin(), matrix.data().end());
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double norm_a = 0.0;
    for (double x : a) norm_a += x * x;
    norm_a = std::sqrt(norm_a);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
        return std::sqrt(2.0 * s);
    };

    const double target = opts.tol * norm_a;
    bool converged = off_norm() <= target;
    for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a[i * n + p];
                    const double aiq = a[i * n + q];
                    const double nip = aip - s * (aiq + tau * aip);
                    const double niq = aiq + s * (aip - tau * aiq);
                    a[i * n + p] = nip;
                    a[p * n + i] = nip;
                    a[i * n + q] = niq;
                    a[q * n + i] = niq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v[i * n + p];
                    const double viq = v[i * n + q];
                    v[i * n + p] = vip - s * (viq + tau * vip);
                    v[i * n + q] = viq + s * (vip - tau * viq);
                }
            }
        }
        converged = off_norm() <= target;
    }
    if (!converged)
        throw NoConvergence("eig_sym: Jacobi sweeps did not reduce the off-diagonal norm");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * n + x] > a[y * n + y];
    });

    EigenPack pack;
    pack.dim = n;
    pack.values.resize(n);
    pack.vectors.resize(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t col = order[j];
        pack.values[j] = a[col * n + col];
        double* dst = pack.vectors.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) dst[i] = v[i * n + col];
        // Sign convention: largest-magnitude component positive.
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(dst[i]) > std::abs(dst[arg])) arg = i;
        if (dst[arg] < 0.0)
            for (std::size_t i = 0; i < n; ++i) dst[i] = -dst[i];
    }
    return pack;
}

double pearson(std::span<const double> col_a, std::span<const double> col_b) {
    if (col_a.size() != col_b.size())
        throw DimensionMismatch("pearson: column lengths differ");
    const std::size_t m = col_a.size();
    if (m < 2) throw DegenerateSample("pearson: need at least 2 entries");

    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean_a += col_a[i];
        mean_b += col_b[i];
    }
    mean_a /= static_cast<double>(m);
    mean_b /= static_cast<double>(m);

    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double da = col_a[i] - mean_a;
        const double db = col_b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0; // constant column convention
    const double r = sab / std::sqrt(saa * sbb);
    return std::clamp(r, -1.0, 1.0);
}

} // namespace knnn::linalg
