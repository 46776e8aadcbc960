#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "knnn/box.hpp"
#include "knnn/feature_matrix.hpp"

namespace knnn::synth {

enum class Shape { moons, circles, swissroll, threelines, twoarcs, fig6 };

Shape shape_from_string(const std::string& name); // throws BadSpec
std::string shape_name(Shape shape);

/// Benchmark description. All randomness flows from `seed` through the
/// library PRNG (splitmix64 -> xoshiro256++), so identical specs give
/// bit-identical output. `bbox`, when unset, defaults to the noiseless
/// shape bounds grown by 20%.
struct SynthSpec {
    Shape shape = Shape::moons;
    std::size_t n_points = 250;
    double noise = 0.0;
    std::uint64_t seed = 1;
    std::optional<Box> bbox;
};

/// Axis-aligned bounds of the noiseless shape (dense parameter sweep for
/// the 2-D curves, +/-3 per axis for fig6).
Box shape_bbox(Shape shape);

/// On-shape sample. Per point the draw order is fixed: the branch/
/// parameter uniforms first, then one Box-Muller pair per 2 coordinates
/// when noise > 0 (fig6 ignores `noise`; its Gaussian structure is the
/// distribution). Shapes:
///   moons      - arc A (cos t, sin t), arc B (1 + cos t, -sin t - 0.5), t in [0, pi]
///   circles    - radii 1.0 / 0.5, common center, angle in [0, 2pi)
///   swissroll  - (t cos t, t sin t) / 3, t in [1.5pi, 4.5pi]
///   threelines - y=0 and y=1 for x in [0,1], plus x=1.5 for y in [0,1]
///   twoarcs    - radii 1.0 / 0.6, theta in [pi/6, 5pi/6], each arc with a
///                10%-of-span hole (outer at 35-45%, inner at 55-65%)
///   fig6       - 4-D, pairs (0,2) and (1,3) jointly Gaussian with
///                correlation 0.95, pairs independent
FeatureMatrix generate(const SynthSpec& spec);

/// n points uniform over the box, seeded; per point the coordinates are
/// drawn in axis order. Throws BadSpec on a degenerate box.
FeatureMatrix sample_negatives(const Box& bbox, std::size_t n, std::uint64_t seed);

/// The evaluation protocol: 2*n_train on-shape points split in half
/// (train / held-out normals, label 0), n_test box-uniform negatives
/// (label 1), test set shuffled. Sub-seeds for generation, split,
/// negatives and shuffle are the first four splitmix64 outputs of
/// spec.seed.
std::pair<FeatureMatrix, LabeledSet> make_benchmark(const SynthSpec& spec,
                                                    std::size_t n_train,
                                                    std::size_t n_test);

} // namespace knnn::synth
