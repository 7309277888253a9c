#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hud/geometry.hpp"

namespace hud {

/// N element positions in a periodic box. The box is square for every
/// user-facing pattern; tiling with reps_x != reps_y produces a rectangular
/// box internally (box_x != box_y), which save/load round-trips via an
/// optional Ly header token.
struct PointPattern {
    std::vector<Vec2> points;
    double box_x = 0.0;
    double box_y = 0.0;
    std::string label;

    std::size_t size() const { return points.size(); }
    bool square_box() const { return box_x == box_y; }

    /// Box side for square patterns (the L of the file format).
    double box_length() const { return box_x; }

    /// Smallest periodic pairwise distance; also reports the closest pair.
    double min_pair_distance(int* out_i = nullptr, int* out_j = nullptr) const;

    /// Mean nearest-neighbor distance under the periodic metric.
    double mean_nearest_neighbor_distance() const;

    /// Throws InvalidArgument if any invariant fails (coordinates in range,
    /// N >= 1, no coincident points).
    void validate() const;
};

/// rows x cols rectangular lattice with the given spacing, centered in a
/// square box of side max(rows, cols) * spacing.
PointPattern generate_periodic(int rows, int cols, double spacing);

/// N points i.i.d. uniform on [0, L)^2, deterministic for a given seed.
PointPattern generate_random(int n, double box_length, std::uint64_t seed);

/// Periodic replication: reps_x * reps_y translated copies of `sub`.
PointPattern tile(const PointPattern& sub, int reps_x, int reps_y);

/// Text format: `# hudarray pattern v1 L=<m> N=<count>` header, one `x y`
/// pair per line, 17 significant digits.
void save_pattern(const PointPattern& pattern, const std::string& path);
PointPattern load_pattern(const std::string& path);

}  // namespace hud
