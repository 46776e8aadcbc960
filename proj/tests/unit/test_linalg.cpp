#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "knnn/errors.hpp"
#include "knnn/linalg.hpp"
#include "knnn/rng.hpp"

using namespace knnn;
using linalg::EigenPack;
using linalg::SymmetricMatrix;

namespace {

// Test-side oracle: rebuilds V diag(e) V^T entry by entry.
std::vector<double> reconstruct(const EigenPack& pack) {
    const std::size_t n = pack.dim;
    std::vector<double> out(n * n, 0.0);
    for (std::size_t j = 0; j < pack.count(); ++j) {
        const auto v = pack.vec(j);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out[r * n + c] += pack.values[j] * v[r] * v[c];
    }
    return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SymmetricMatrix random_symmetric(Rng& rng, std::size_t dim, double scale = 1.0) {
    std::vector<double> entries(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
            const double v = scale * (rng.uniform() * 2.0 - 1.0);
            entries[i * dim + j] = v;
            entries[j * dim + i] = v;
        }
    return SymmetricMatrix(dim, std::move(entries));
}

} // namespace

TEST_CASE("covariance of identical points is the zero matrix") {
    const std::vector<std::vector<double>> samples{{0, 0}, {0, 0}};
    const auto cov = linalg::covariance(samples);
    CHECK(cov(0, 0) == 0.0);
    CHECK(cov(0, 1) == 0.0);
    CHECK(cov(1, 1) == 0.0);
}

TEST_CASE("covariance matches the hand-computed unbiased estimator") {
    SUBCASE("cross of four points") {
        const std::vector<std::vector<double>> samples{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        const auto cov = linalg::covariance(samples);
        CHECK(cov(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(cov(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(cov(0, 1) == doctest::Approx(0.0).scale(1));
    }
    SUBCASE("two points on the x-axis") {
        const std::vector<std::vector<double>> samples{{0, 0}, {2, 0}};
        const auto cov = linalg::covariance(samples);
        CHECK(cov(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(cov(0, 1) == 0.0);
        CHECK(cov(1, 1) == 0.0);
    }
}

TEST_CASE("covariance rejects degenerate input") {
    CHECK_THROWS_AS(linalg::covariance(std::vector<std::vector<double>>{{1, 2}}),
                    DegenerateSample);
    CHECK_THROWS_AS(linalg::covariance(std::vector<std::vector<double>>{{1, 2}, {1}}),
                    DegenerateSample);
}

TEST_CASE("covariance is exactly invariant under sample reordering") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 3 + static_cast<std::size_t>(rng.uniform() * 8);
        const std::size_t dim = 1 + static_cast<std::size_t>(rng.uniform() * 5);
        std::vector<std::vector<double>> samples(m, std::vector<double>(dim));
        for (auto& s : samples)
            for (auto& v : s) v = rng.uniform() * 10.0 - 5.0;

        const auto base = linalg::covariance(samples);
        auto shuffled = samples;
        const auto perm = rng.permutation(m);
        for (std::size_t i = 0; i < m; ++i) shuffled[i] = samples[perm[i]];
        const auto again = linalg::covariance(shuffled);
        for (std::size_t i = 0; i < dim * dim; ++i)
            CHECK(base.data()[i] == again.data()[i]); // bitwise
    }
}

TEST_CASE("eig_sym solves the trivial cases") {
    SUBCASE("identity") {
        const auto pack = linalg::eig_sym(SymmetricMatrix(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
        for (double v : pack.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
        // Orthonormality of the returned basis.
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) {
                double dot = 0;
                for (std::size_t c = 0; c < 3; ++c) dot += pack.vec(a)[c] * pack.vec(b)[c];
                CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).scale(1).epsilon(1e-12));
            }
    }
    SUBCASE("already diagonal") {
        const auto pack = linalg::eig_sym(SymmetricMatrix(2, {2, 0, 0, 0.5}));
        CHECK(pack.values[0] == doctest::Approx(2.0));
        CHECK(pack.values[1] == doctest::Approx(0.5));
        CHECK(std::abs(pack.vec(0)[0]) == doctest::Approx(1.0));
        CHECK(std::abs(pack.vec(1)[1]) == doctest::Approx(1.0));
    }
    SUBCASE("analytic 2x2") {
        const auto pack = linalg::eig_sym(SymmetricMatrix(2, {2, 1, 1, 2}));
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CHECK(pack.values[0] == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(pack.values[1] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(pack.vec(0)[0] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
        CHECK(pack.vec(0)[1] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
        CHECK(pack.vec(1)[0] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
        CHECK(pack.vec(1)[1] == doctest::Approx(-inv_sqrt2).epsilon(1e-12));
    }
}

TEST_CASE("eig_sym reconstruction, orthogonality and trace on random matrices") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 1 + static_cast<std::size_t>(rng.uniform() * 16);
        const auto mat = random_symmetric(rng, dim, trial % 3 == 0 ? 100.0 : 1.0);
        const auto pack = linalg::eig_sym(mat);

        double norm = 0.0;
        for (double v : mat.data()) norm = std::max(norm, std::abs(v));
        CHECK(max_abs_diff(reconstruct(pack), mat.data()) <= 1e-8 * std::max(1.0, norm));

        CHECK(std::is_sorted(pack.values.rbegin(), pack.values.rend()));

        double trace = 0.0;
        for (std::size_t i = 0; i < dim; ++i) trace += mat(i, i);
        const double value_sum =
            std::accumulate(pack.values.begin(), pack.values.end(), 0.0);
        CHECK(trace == doctest::Approx(value_sum).epsilon(1e-10).scale(std::max(1.0, norm)));

        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = a; b < dim; ++b) {
                double dot = 0;
                for (std::size_t c = 0; c < dim; ++c) dot += pack.vec(a)[c] * pack.vec(b)[c];
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-8);
            }
            // Sign convention: the largest-magnitude component is positive.
            const auto v = pack.vec(a);
            const auto arg = std::max_element(v.begin(), v.end(), [](double x, double y) {
                return std::abs(x) < std::abs(y);
            });
            CHECK(*arg > 0.0);
        }
    }
}

TEST_CASE("eig_sym enforces the dimension limit") {
    CHECK_THROWS_AS(linalg::eig_sym(SymmetricMatrix(65)), DimensionMismatch);
    linalg::EigOptions opts;
    opts.max_dim = 65;
    CHECK_NOTHROW(linalg::eig_sym(SymmetricMatrix(65), opts));
}

TEST_CASE("eigenvalue floor clamps relative to the leading value") {
    EigenPack pack;
    pack.dim = 2;
    pack.values = {2.0, 1e-18};
    pack.vectors = {1, 0, 0, 1};
    pack.apply_floor();
    CHECK(pack.values[0] == 2.0);
    CHECK(pack.values[1] == 2e-6);

    EigenPack zero;
    zero.dim = 1;
    zero.values = {0.0};
    zero.vectors = {1};
    zero.apply_floor();
    CHECK(zero.values[0] == 1e-6);
}

TEST_CASE("pearson handles the documented cases") {
    const std::vector<double> a{1, 2, 3};
    CHECK(linalg::pearson(a, a) == 1.0);
    CHECK(linalg::pearson(a, std::vector<double>{3, 2, 1}) == -1.0);
    CHECK(linalg::pearson(std::vector<double>{1, 2, 3, 4},
                          std::vector<double>{5, 5, 5, 5}) == 0.0);
    CHECK_THROWS_AS(linalg::pearson(a, std::vector<double>{1, 2}), DimensionMismatch);
}

TEST_CASE("pearson is exactly symmetric and bounded") {
    Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 30);
        std::vector<double> a(m), b(m);
        for (std::size_t i = 0; i < m; ++i) {
            a[i] = rng.uniform() * 4.0 - 2.0;
            b[i] = rng.uniform() * 4.0 - 2.0;
        }
        const double ab = linalg::pearson(a, b);
        CHECK(ab == linalg::pearson(b, a)); // bitwise
        CHECK(ab >= -1.0);
        CHECK(ab <= 1.0);
    }
}
