#include "knnn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "knnn/errors.hpp"
#include "knnn/rng.hpp"

namespace knnn::synth {

namespace {

constexpr double kPi = std::numbers::pi;

// twoarcs geometry, pinned: both arcs span [pi/6, 5pi/6]; holes sit at
// 35-45% of the outer arc's parameter range and 55-65% of the inner's.
constexpr double kArcThetaLo = kPi / 6.0;
constexpr double kArcSpan = 2.0 * kPi / 3.0;
constexpr double kOuterArcRadius = 1.0;
constexpr double kInnerArcRadius = 0.6;
constexpr double kOuterHoleLo = 0.35, kOuterHoleHi = 0.45;
constexpr double kInnerHoleLo = 0.55, kInnerHoleHi = 0.65;

// Maps u in [0,1) to a parameter in [0,1] \ (hole_lo, hole_hi),
// uniformly over the kept measure.
double skip_hole(double u, double hole_lo, double hole_hi) {
    const double kept = 1.0 - (hole_hi - hole_lo);
    const double x = u * kept;
    return x < hole_lo ? x : x + (hole_hi - hole_lo);
}

struct Point2 {
    double x, y;
};

Point2 moons_point(bool second_arc, double t) {
    // Arc A is the upper half unit circle; arc B is A shifted by
    // (+1, -0.5) and reflected across the x-axis, which interleaves the
    // two half circles.
    const double theta = t * kPi;
    if (!second_arc) return {std::cos(theta), std::sin(theta)};
    return {1.0 + std::cos(theta), 0.5 - std::sin(theta)};
}

Point2 circles_point(bool inner, double t) {
    const double r = inner ? 0.5 : 1.0;
    const double theta = t * 2.0 * kPi;
    return {r * std::cos(theta), r * std::sin(theta)};
}

Point2 swissroll_point(double t01) {
    const double t = 1.5 * kPi + t01 * 3.0 * kPi;
    return {t * std::cos(t) / 3.0, t * std::sin(t) / 3.0};
}

Point2 threelines_point(int segment, double t) {
    switch (segment) {
        case 0: return {t, 0.0};
        case 1: return {t, 1.0};
        default: return {1.5, t};
    }
}

Point2 twoarcs_point(bool inner, double u) {
    const double lambda = inner ? skip_hole(u, kInnerHoleLo, kInnerHoleHi)
                                : skip_hole(u, kOuterHoleLo, kOuterHoleHi);
    const double theta = kArcThetaLo + lambda * kArcSpan;
    const double r = inner ? kInnerArcRadius : kOuterArcRadius;
    return {r * std::cos(theta), r * std::sin(theta)};
}

FeatureMatrix generate_2d(const SynthSpec& spec) {
    Rng rng(spec.seed);
    FeatureMatrix out;
    double row[2];
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        Point2 p{};
        switch (spec.shape) {
            case Shape::moons: {
                const bool second = rng.uniform() < 0.5;
                p = moons_point(second, rng.uniform());
                break;
            }
            case Shape::circles: {
                const bool inner = rng.uniform() < 0.5;
                p = circles_point(inner, rng.uniform());
                break;
            }
            case Shape::swissroll:
                p = swissroll_point(rng.uniform());
                break;
            case Shape::threelines: {
                const int segment = std::min(2, static_cast<int>(rng.uniform() * 3.0));
                p = threelines_point(segment, rng.uniform());
                break;
            }
            case Shape::twoarcs: {
                const bool inner = rng.uniform() < 0.5;
                p = twoarcs_point(inner, rng.uniform());
                break;
            }
            case Shape::fig6:
                break; // handled elsewhere
        }
        if (spec.noise > 0.0) {
            const auto [dx, dy] = rng.normal_pair();
            p.x += spec.noise * dx;
            p.y += spec.noise * dy;
        }
        row[0] = p.x;
        row[1] = p.y;
        out.append_row(row);
    }
    return out;
}

FeatureMatrix generate_fig6(const SynthSpec& spec) {
    // Pairs (0,2) and (1,3) jointly Gaussian with correlation rho;
    // the two pairs are independent; all marginals N(0,1).
    constexpr double rho = 0.95;
    const double tail = std::sqrt(1.0 - rho * rho);
    Rng rng(spec.seed);
    FeatureMatrix out;
    double row[4];
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        const auto [z0, z1] = rng.normal_pair();
        const auto [z2, z3] = rng.normal_pair();
        row[0] = z0;
        row[2] = rho * z0 + tail * z1;
        row[1] = z2;
        row[3] = rho * z2 + tail * z3;
        out.append_row(row);
    }
    return out;
}

} // namespace

Shape shape_from_string(const std::string& name) {
    if (name == "moons") return Shape::moons;
    if (name == "circles") return Shape::circles;
    if (name == "swissroll") return Shape::swissroll;
    if (name == "threelines") return Shape::threelines;
    if (name == "twoarcs") return Shape::twoarcs;
    if (name == "fig6") return Shape::fig6;
    throw BadSpec("unknown shape '" + name +
                  "' (expected moons|circles|swissroll|threelines|twoarcs|fig6)");
}

std::string shape_name(Shape shape) {
    switch (shape) {
        case Shape::moons: return "moons";
        case Shape::circles: return "circles";
        case Shape::swissroll: return "swissroll";
        case Shape::threelines: return "threelines";
        case Shape::twoarcs: return "twoarcs";
        case Shape::fig6: return "fig6";
    }
    return "?";
}

Box shape_bbox(Shape shape) {
    if (shape == Shape::fig6) return Box{{-3, -3, -3, -3}, {3, 3, 3, 3}};

    // Dense noiseless sweep over every branch of the parametrization.
    constexpr std::size_t kSteps = 10001;
    Box box{{1e300, 1e300}, {-1e300, -1e300}};
    auto absorb = [&](Point2 p) {
        box.lo[0] = std::min(box.lo[0], p.x);
        box.lo[1] = std::min(box.lo[1], p.y);
        box.hi[0] = std::max(box.hi[0], p.x);
        box.hi[1] = std::max(box.hi[1], p.y);
    };
    for (std::size_t i = 0; i < kSteps; ++i) {
        const double t = static_cast<double>(i) / (kSteps - 1);
        switch (shape) {
            case Shape::moons:
                absorb(moons_point(false, t));
                absorb(moons_point(true, t));
                break;
            case Shape::circles:
                absorb(circles_point(false, t));
                absorb(circles_point(true, t));
                break;
            case Shape::swissroll:
                absorb(swissroll_point(t));
                break;
            case Shape::threelines:
                for (int seg = 0; seg < 3; ++seg) absorb(threelines_point(seg, t));
                break;
            case Shape::twoarcs:
                absorb(twoarcs_point(false, t));
                absorb(twoarcs_point(true, t));
                break;
            case Shape::fig6:
                break;
        }
    }
    return box;
}

FeatureMatrix generate(const SynthSpec& spec) {
    if (spec.n_points < 1) throw BadSpec("generate: n_points must be >= 1");
    if (spec.noise < 0.0) throw BadSpec("generate: noise must be >= 0");
    if (spec.shape == Shape::fig6) return generate_fig6(spec);
    return generate_2d(spec);
}

FeatureMatrix sample_negatives(const Box& bbox, std::size_t n, std::uint64_t seed) {
    bbox.validate();
    if (n < 1) throw BadSpec("sample_negatives: n must be >= 1");
    Rng rng(seed);
    FeatureMatrix out;
    std::vector<double> row(bbox.dim());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < bbox.dim(); ++d)
            row[d] = rng.uniform(bbox.lo[d], bbox.hi[d]);
        out.append_row(row);
    }
    return out;
}

std::pair<FeatureMatrix, LabeledSet> make_benchmark(const SynthSpec& spec,
                                                    std::size_t n_train,
                                                    std::size_t n_test) {
    if (n_train < 2) throw BadSpec("make_benchmark: n_train must be >= 2");
    if (n_test < 1) throw BadSpec("make_benchmark: n_test must be >= 1");

    SplitMix64 sm(spec.seed);
    const std::uint64_t seed_gen = sm.next();
    const std::uint64_t seed_split = sm.next();
    const std::uint64_t seed_neg = sm.next();
    const std::uint64_t seed_shuffle = sm.next();

    SynthSpec gen_spec = spec;
    gen_spec.n_points = 2 * n_train;
    gen_spec.seed = seed_gen;
    const FeatureMatrix pool = generate(gen_spec);
    auto [train, heldout] = split_half(pool, seed_split);

    const Box box = spec.bbox ? *spec.bbox : shape_bbox(spec.shape).expanded(0.2);
    const FeatureMatrix negatives = sample_negatives(box, n_test, seed_neg);

    // label 1 = anomalous; higher score should predict label 1.
    const std::size_t total = heldout.rows() + negatives.rows();
    Rng shuffle_rng(seed_shuffle);
    const auto perm = shuffle_rng.permutation(total);

    LabeledSet test;
    test.labels.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t src = perm[i];
        if (src < heldout.rows()) {
            test.features.append_row(heldout.row(src));
            test.labels[i] = 0;
        } else {
            test.features.append_row(negatives.row(src - heldout.rows()));
            test.labels[i] = 1;
        }
    }
    return {std::move(train), std::move(test)};
}

} // namespace knnn::synth
