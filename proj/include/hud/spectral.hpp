#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hud/geometry.hpp"
#include "hud/pattern.hpp"

namespace hud {

/// One reciprocal-lattice sample: integer indices, wavevector in rad/m, and
/// the structure factor value there.
struct SpectralSample {
    int nx = 0;
    int ny = 0;
    double kx = 0.0;
    double ky = 0.0;
    double s = 0.0;
};

/// Structure factor sampled on the reciprocal lattice of the pattern's box.
/// Convention: S(k) = |sum_n exp(i k.r_n)|^2 / N (modulus squared).
struct SpectralMap {
    std::vector<SpectralSample> samples;  // all (nx, ny) with |n| <= n_max, (0,0) excluded
    int n_max = 0;
    std::size_t n_points = 0;
    double box_x = 0.0;
    double box_y = 0.0;
    std::string source;
    bool modulus_squared = true;
};

struct StealthSummary {
    double chi_achieved = 0.0;
    double k_c = 0.0;          // rad/m
    int independent_count = 0; // M: half-plane constrained vectors with S <= threshold
    double max_s_inside = 0.0;
};

/// The constrained reciprocal set for a stealthy target: all half-plane
/// lattice vectors with 0 < |k| <= k_c, where k_c is the smallest lattice
/// radius whose cumulative count M satisfies M >= chi * N * d (d = 2).
struct ConstrainedSet {
    std::vector<Vec2> wavevectors;  // one of each +-k pair, in rad/m
    std::vector<std::pair<int, int>> indices;
    double k_c = 0.0;
    double chi_achieved = 0.0;
};

ConstrainedSet constrained_lattice(double chi, std::size_t n_points, double box_length);

/// Structure factor over the full index square |nx|,|ny| <= n_max via
/// per-point phase tables (the accelerated path).
SpectralMap structure_factor(const PointPattern& pattern, int n_max);

/// Direct-sum reference semantics: S at arbitrary wavevectors, one cos/sin
/// evaluation per (k, point) pair. Used as the independent certificate.
std::vector<double> structure_factor_direct(const PointPattern& pattern,
                                            const std::vector<Vec2>& wavevectors);

/// k_c, M and achieved chi of a computed map: the largest lattice radius such
/// that every independent vector with 0 < |k| <= k_c stays at or below
/// `zero_threshold`.
StealthSummary stealth_summary(const SpectralMap& map, std::size_t n_points,
                               double zero_threshold);

/// Monte-Carlo number variance sigma^2(R) over n_windows periodic disks per
/// radius. Radii must satisfy R < min(box_x, box_y) / 2.
struct NumberVariancePoint {
    double radius = 0.0;
    double variance = 0.0;
    double mean_count = 0.0;
};

std::vector<NumberVariancePoint> number_variance(const PointPattern& pattern,
                                                 const std::vector<double>& radii,
                                                 int n_windows, std::uint64_t seed);

/// Least-squares slope of log(sigma^2) vs log(R); ignores non-positive values.
double log_log_slope(const std::vector<NumberVariancePoint>& curve);

}  // namespace hud
