#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "knnn/errors.hpp"

namespace knnn {

/// Axis-aligned box in D dimensions.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const noexcept { return lo.size(); }

    void validate() const {
        if (lo.empty() || lo.size() != hi.size())
            throw BadSpec("box: lo/hi dimensions disagree or empty");
        for (std::size_t d = 0; d < lo.size(); ++d)
            if (!(lo[d] < hi[d])) throw BadSpec("box: degenerate extent");
    }

    double extent(std::size_t d) const { return hi[d] - lo[d]; }

    /// Grows the box by `frac` of each axis extent in total
    /// (frac/2 added per side).
    Box expanded(double frac) const {
        Box out = *this;
        for (std::size_t d = 0; d < lo.size(); ++d) {
            const double pad = extent(d) * frac / 2.0;
            out.lo[d] -= pad;
            out.hi[d] += pad;
        }
        return out;
    }

    bool contains(std::span<const double> p) const {
        if (p.size() != dim()) return false;
        for (std::size_t d = 0; d < lo.size(); ++d)
            if (p[d] < lo[d] || p[d] > hi[d]) return false;
        return true;
    }
};

} // namespace knnn
