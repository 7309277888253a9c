#include "hud/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

#include "hud/errors.hpp"
#include "hud/parallel.hpp"

namespace hud {

ConstrainedSet constrained_lattice(double chi, std::size_t n_points, double box_length) {
    if (!(chi > 0.0) || chi > 0.5) throw InvalidArgument("chi must lie in (0, 0.5]");
    if (!(box_length > 0.0)) throw InvalidArgument("box length must be positive");
    if (n_points < 1) throw InvalidArgument("N must be >= 1");

    const double target = chi * 2.0 * static_cast<double>(n_points);  // M >= chi*N*d, d=2

    // Gather half-plane lattice indices by squared radius until the running
    // count reaches the target, then keep every complete shell up to that
    // radius (boundary inclusive).
    struct Entry {
        int r2;
        int nx;
        int ny;
    };
    std::vector<Entry> entries;
    int shell_r2 = 0;
    std::size_t count = 0;
    while (static_cast<double>(count) < target) {
        ++shell_r2;
        const int limit = static_cast<int>(std::floor(std::sqrt(static_cast<double>(shell_r2))));
        bool any = false;
        for (int nx = 0; nx <= limit; ++nx) {
            for (int ny = -limit; ny <= limit; ++ny) {
                if (nx == 0 && ny <= 0) continue;  // half-plane: one of each +-k pair
                if (nx * nx + ny * ny == shell_r2) {
                    entries.push_back({shell_r2, nx, ny});
                    any = true;
                }
            }
        }
        if (any) count = entries.size();
    }

    ConstrainedSet out;
    out.k_c = std::sqrt(static_cast<double>(shell_r2)) * kTwoPi / box_length;
    out.chi_achieved = static_cast<double>(count) / (2.0 * static_cast<double>(n_points));
    out.wavevectors.reserve(count);
    out.indices.reserve(count);
    const double unit = kTwoPi / box_length;
    for (const Entry& e : entries) {
        out.wavevectors.push_back({unit * e.nx, unit * e.ny});
        out.indices.emplace_back(e.nx, e.ny);
    }
    return out;
}

SpectralMap structure_factor(const PointPattern& pattern, int n_max) {
    if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
    pattern.validate();

    const std::size_t n = pattern.points.size();
    const int width = 2 * n_max + 1;

    // Phase tables: powers of the per-point fundamental phases, so the map
    // costs two complex multiplies per (k, point) instead of a sincos.
    std::vector<std::complex<double>> px(n * (n_max + 1));
    std::vector<std::complex<double>> py(n * (n_max + 1));
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> bx = std::polar(1.0, kTwoPi * pattern.points[i].x / pattern.box_x);
        const std::complex<double> by = std::polar(1.0, kTwoPi * pattern.points[i].y / pattern.box_y);
        px[i * (n_max + 1)] = 1.0;
        py[i * (n_max + 1)] = 1.0;
        for (int j = 1; j <= n_max; ++j) {
            px[i * (n_max + 1) + j] = px[i * (n_max + 1) + j - 1] * bx;
            py[i * (n_max + 1) + j] = py[i * (n_max + 1) + j - 1] * by;
        }
    }

    SpectralMap map;
    map.n_max = n_max;
    map.n_points = n;
    map.box_x = pattern.box_x;
    map.box_y = pattern.box_y;
    map.source = pattern.label;
    map.samples.resize(static_cast<std::size_t>(width) * width - 1);

    const double ux = kTwoPi / pattern.box_x;
    const double uy = kTwoPi / pattern.box_y;
    parallel_for(static_cast<std::size_t>(width) * width, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const int nx = static_cast<int>(idx) / width - n_max;
            const int ny = static_cast<int>(idx) % width - n_max;
            if (nx == 0 && ny == 0) continue;
            std::complex<double> sum = 0.0;
            const int ax = nx < 0 ? -nx : nx;
            const int ay = ny < 0 ? -ny : ny;
            for (std::size_t i = 0; i < n; ++i) {
                std::complex<double> ex = px[i * (n_max + 1) + ax];
                std::complex<double> ey = py[i * (n_max + 1) + ay];
                if (nx < 0) ex = std::conj(ex);
                if (ny < 0) ey = std::conj(ey);
                sum += ex * ey;
            }
            // map index: skip the origin slot
            std::size_t slot = idx;
            const std::size_t origin = static_cast<std::size_t>(n_max) * width + n_max;
            if (idx == origin) continue;
            if (idx > origin) slot = idx - 1;
            map.samples[slot] = {nx, ny, ux * nx, uy * ny, std::norm(sum) / static_cast<double>(n)};
        }
    });
    return map;
}

std::vector<double> structure_factor_direct(const PointPattern& pattern,
                                            const std::vector<Vec2>& wavevectors) {
    const std::size_t n = pattern.points.size();
    std::vector<double> out(wavevectors.size());
    parallel_for(wavevectors.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            double c = 0.0, s = 0.0;
            for (const Vec2& p : pattern.points) {
                const double arg = wavevectors[m].x * p.x + wavevectors[m].y * p.y;
                c += std::cos(arg);
                s += std::sin(arg);
            }
            out[m] = (c * c + s * s) / static_cast<double>(n);
        }
    });
    return out;
}

StealthSummary stealth_summary(const SpectralMap& map, std::size_t n_points,
                               double zero_threshold) {
    if (map.samples.empty()) throw InvalidArgument("spectral map is empty");

    // Half-plane samples inside the largest complete shell (|k| limited by
    // n_max along the axes; corners beyond n_max would be partial shells).
    struct HalfSample {
        double k;
        double s;
    };
    std::vector<HalfSample> half;
    const double k_limit =
        static_cast<double>(map.n_max) * kTwoPi / std::max(map.box_x, map.box_y);
    for (const SpectralSample& smp : map.samples) {
        if (smp.nx < 0 || (smp.nx == 0 && smp.ny <= 0)) continue;
        const double k = std::hypot(smp.kx, smp.ky);
        if (k > k_limit * (1.0 + 1e-12)) continue;
        half.push_back({k, smp.s});
    }
    std::sort(half.begin(), half.end(),
              [](const HalfSample& a, const HalfSample& b) { return a.k < b.k; });

    StealthSummary summary;
    std::size_t i = 0;
    int passing = 0;
    double k_c = 0.0;
    double max_inside = 0.0;
    while (i < half.size()) {
        // one shell = all samples at (numerically) the same radius
        std::size_t j = i;
        bool shell_ok = true;
        double shell_max = 0.0;
        while (j < half.size() && half[j].k <= half[i].k * (1.0 + 1e-9)) {
            shell_ok = shell_ok && half[j].s <= zero_threshold;
            shell_max = std::max(shell_max, half[j].s);
            ++j;
        }
        if (!shell_ok) break;
        passing += static_cast<int>(j - i);
        k_c = half[i].k;
        max_inside = std::max(max_inside, shell_max);
        i = j;
    }
    summary.independent_count = passing;
    summary.k_c = k_c;
    summary.max_s_inside = max_inside;
    summary.chi_achieved = static_cast<double>(passing) / (2.0 * static_cast<double>(n_points));
    return summary;
}

std::vector<NumberVariancePoint> number_variance(const PointPattern& pattern,
                                                 const std::vector<double>& radii,
                                                 int n_windows, std::uint64_t seed) {
    pattern.validate();
    if (n_windows < 1) throw InvalidArgument("n_windows must be >= 1");
    const double half_min = 0.5 * std::min(pattern.box_x, pattern.box_y);
    for (double r : radii) {
        if (!(r > 0.0) || r >= half_min) {
            throw InvalidArgument("window radius must satisfy 0 < R < L/2");
        }
    }

    // Window centers drawn serially so results are seed-deterministic, then
    // counted in parallel.
    SeededRng rng(seed);
    std::vector<Vec2> centers(static_cast<std::size_t>(n_windows));
    for (Vec2& c : centers) c = {rng.uniform(pattern.box_x), rng.uniform(pattern.box_y)};

    std::vector<double> sorted_radii(radii);
    std::sort(sorted_radii.begin(), sorted_radii.end());

    const std::size_t n_r = sorted_radii.size();
    std::vector<double> sum(n_r, 0.0), sum_sq(n_r, 0.0);
    std::mutex merge_mutex;
    parallel_for(centers.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> local_sum(n_r, 0.0), local_sq(n_r, 0.0);
        std::vector<double> dist;
        dist.reserve(pattern.points.size());
        for (std::size_t w = begin; w < end; ++w) {
            dist.clear();
            for (const Vec2& p : pattern.points) {
                dist.push_back(periodic_distance(p, centers[w], pattern.box_x, pattern.box_y));
            }
            std::sort(dist.begin(), dist.end());
            for (std::size_t ri = 0; ri < n_r; ++ri) {
                const auto it =
                    std::upper_bound(dist.begin(), dist.end(), sorted_radii[ri]);
                const double count = static_cast<double>(it - dist.begin());
                local_sum[ri] += count;
                local_sq[ri] += count * count;
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t ri = 0; ri < n_r; ++ri) {
            sum[ri] += local_sum[ri];
            sum_sq[ri] += local_sq[ri];
        }
    });

    std::vector<NumberVariancePoint> out(n_r);
    const double w = static_cast<double>(n_windows);
    for (std::size_t ri = 0; ri < n_r; ++ri) {
        const double mean = sum[ri] / w;
        out[ri] = {sorted_radii[ri], sum_sq[ri] / w - mean * mean, mean};
    }
    return out;
}

double log_log_slope(const std::vector<NumberVariancePoint>& curve) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const NumberVariancePoint& p : curve) {
        if (!(p.variance > 0.0) || !(p.radius > 0.0)) continue;
        const double x = std::log(p.radius);
        const double y = std::log(p.variance);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw InvalidArgument("need at least two positive variance samples for a slope");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hud
