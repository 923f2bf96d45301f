#pragma once

// Seeded sample points in a coordinate box, skipping listed singular loci.

#include "pw/geometry.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace pw {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::size_t kDefaultPoints = 100;
inline constexpr double kDefaultTolerance = 1e-9;

struct SamplingSpec {
    /// Reject points where |expr| < min_abs.
    struct Avoid {
        ScalarField expr;
        double min_abs = 0.0;
    };

    /// Per-coordinate [lo, hi]; coordinates not listed use [-2, 2].
    std::vector<std::pair<std::string, std::pair<double, double>>> box;
    std::vector<Avoid> avoid;

    std::pair<double, double> range(const std::string& coord) const;
    bool admits(const Point& p) const;
};

/// Draws `count` points uniformly from the box, rejecting points in avoided
/// regions. Throws InvalidArgumentError if the avoided region swallows the box.
std::vector<Point> sample_points(const Chart& chart, const SamplingSpec& spec, std::size_t count,
                                 std::uint64_t seed = kDefaultSeed);

} // namespace pw
