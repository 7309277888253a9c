#include "hud/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "hud/errors.hpp"
#include "hud/parallel.hpp"

namespace hud {

namespace {

constexpr double kDbFloor = -120.0;  // export clip where |A|^2 underflows

double to_db(double linear_power, double reference) {
    if (!(linear_power > 0.0) || !(reference > 0.0)) return kDbFloor;
    const double db = 10.0 * std::log10(linear_power / reference);
    return db < kDbFloor ? kDbFloor : db;
}

}  // namespace

void SteeringTarget::validate() const {
    if (!(frequency > 0.0)) throw InvalidArgument("frequency must be positive");
    if (!(sound_speed > 0.0)) throw InvalidArgument("sound speed must be positive");
    if (theta_s < 0.0 || theta_s >= kPi / 2.0) {
        throw InvalidArgument("steering elevation must lie in [0, pi/2)");
    }
}

std::vector<double> DirectivityPattern::cut_thetas() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const DirectivitySample& s : samples) out.push_back(s.theta);
    return out;
}

std::vector<double> DirectivityPattern::cut_levels_db() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const DirectivitySample& s : samples) out.push_back(s.level_db);
    return out;
}

std::vector<double> DirectivityPattern::amplitudes() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const DirectivitySample& s : samples) out.push_back(std::pow(10.0, s.level_db / 20.0));
    return out;
}

Vec2 observation_wavevector(double theta, double phi, double frequency, double sound_speed) {
    if (!(frequency > 0.0)) throw InvalidArgument("frequency must be positive");
    if (!(sound_speed > 0.0)) throw InvalidArgument("sound speed must be positive");
    const double k = kTwoPi * frequency / sound_speed * std::sin(theta);
    return {k * std::cos(phi), k * std::sin(phi)};
}

std::vector<std::complex<double>> steering_weights(const PointPattern& pattern,
                                                   const SteeringTarget& target) {
    target.validate();
    const Vec2 k_s =
        observation_wavevector(target.theta_s, target.phi_s, target.frequency, target.sound_speed);
    std::vector<std::complex<double>> weights;
    weights.reserve(pattern.points.size());
    for (const Vec2& r : pattern.points) {
        weights.push_back(std::polar(1.0, -(k_s.x * r.x + k_s.y * r.y)));
    }
    return weights;
}

namespace {

// Shared scan: per (theta, phi) sample, |sum_j w_j g_j exp(i k.r_j)|^2 / N
// with an optional per-sample element gain g(theta).
DirectivityPattern scan_pattern(const PointPattern& pattern,
                                const std::vector<std::complex<double>>& weights,
                                const std::vector<double>& theta_grid,
                                const std::vector<double>& phi_grid, double frequency,
                                double sound_speed, const PistonElement* elem,
                                const std::string& label) {
    if (theta_grid.empty() || phi_grid.empty()) throw InvalidArgument("empty angle grid");
    if (!weights.empty() && weights.size() != pattern.points.size()) {
        throw InvalidArgument("weight count differs from element count");
    }
    pattern.validate();

    const std::size_t n = pattern.points.size();
    const std::size_t total = theta_grid.size() * phi_grid.size();
    DirectivityPattern out;
    out.frequency = frequency;
    out.label = label;
    out.samples.resize(total);

    std::vector<double> power(total, 0.0);
    parallel_for(total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const double theta = theta_grid[idx / phi_grid.size()];
            const double phi = phi_grid[idx % phi_grid.size()];
            const Vec2 k = observation_wavevector(theta, phi, frequency, sound_speed);
            std::complex<double> sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double arg = k.x * pattern.points[j].x + k.y * pattern.points[j].y;
                const std::complex<double> phase = std::polar(1.0, arg);
                sum += weights.empty() ? phase : weights[j] * phase;
            }
            double p = std::norm(sum) / static_cast<double>(n);
            if (elem) {
                const double g = element_directivity(*elem, theta, frequency, sound_speed);
                p *= g * g;
            }
            power[idx] = p;
        }
    });

    const double peak = *std::max_element(power.begin(), power.end());
    if (!(peak > 0.0)) throw InvalidArgument("pattern has no radiated power");
    for (std::size_t idx = 0; idx < total; ++idx) {
        out.samples[idx] = {theta_grid[idx / phi_grid.size()], phi_grid[idx % phi_grid.size()],
                            to_db(power[idx], peak)};
    }
    return out;
}

}  // namespace

DirectivityPattern array_factor(const PointPattern& pattern,
                                const std::vector<std::complex<double>>& weights,
                                const std::vector<double>& theta_grid,
                                const std::vector<double>& phi_grid, double frequency,
                                double sound_speed) {
    return scan_pattern(pattern, weights, theta_grid, phi_grid, frequency, sound_speed, nullptr,
                        "array factor: " + pattern.label);
}

ExclusionAngle exclusion_radius(double k_c, double frequency, double sound_speed) {
    if (k_c < 0.0) throw InvalidArgument("k_c must be >= 0");
    if (!(frequency > 0.0)) throw InvalidArgument("frequency must be positive");
    if (!(sound_speed > 0.0)) throw InvalidArgument("sound speed must be positive");
    const double lambda = sound_speed / frequency;
    const double argument = k_c * lambda / kTwoPi;
    if (argument > 1.0) return {kPi / 2.0, true};
    return {std::asin(argument), false};
}

double element_directivity(const PistonElement& elem, double theta, double frequency,
                           double sound_speed) {
    if (elem.radius < 0.0) throw InvalidArgument("piston radius must be >= 0");
    if (elem.radius == 0.0) return 1.0;
    const double x =
        kTwoPi * frequency / sound_speed * elem.radius * std::abs(std::sin(theta));
    if (x < 1e-6) {
        // 2 J1(x)/x = 1 - x^2/8 + x^4/192 - ...
        return 1.0 - x * x / 8.0;
    }
    return 2.0 * std::cyl_bessel_j(1, x) / x;
}

DirectivityPattern total_directivity(const PointPattern& pattern,
                                     const std::vector<std::complex<double>>& weights,
                                     const PistonElement& elem,
                                     const std::vector<double>& theta_grid,
                                     const std::vector<double>& phi_grid, double frequency,
                                     double sound_speed) {
    return scan_pattern(pattern, weights, theta_grid, phi_grid, frequency, sound_speed, &elem,
                        "total directivity: " + pattern.label);
}

std::vector<std::complex<double>> quantize_delays(const std::vector<std::complex<double>>& weights,
                                                  double frequency, double resolution) {
    if (!(resolution > 0.0)) throw InvalidArgument("delay resolution must be positive");
    if (!(frequency > 0.0)) throw InvalidArgument("frequency must be positive");
    const double phase_step = kTwoPi * frequency * resolution;
    std::vector<std::complex<double>> out;
    out.reserve(weights.size());
    for (const std::complex<double>& w : weights) {
        const double mag = std::abs(w);
        const double phase = std::arg(w);
        out.push_back(std::polar(mag, std::round(phase / phase_step) * phase_step));
    }
    return out;
}

PatternMetrics metrics(const DirectivityPattern& cut, double main_lobe_theta,
                       double main_lobe_halfwidth, double theta_exc) {
    if (cut.samples.empty()) throw InvalidArgument("empty pattern");
    if (!(main_lobe_halfwidth > 0.0)) throw InvalidArgument("halfwidth must be positive");

    PatternMetrics result;
    result.main_lobe_level_db = -std::numeric_limits<double>::infinity();
    bool direction_sampled = false;

    double psll = -std::numeric_limits<double>::infinity();
    double floor = -std::numeric_limits<double>::infinity();
    bool annulus_hit = false;
    const double sin_main = std::sin(main_lobe_theta);
    const double sin_exc = std::sin(theta_exc);
    for (const DirectivitySample& s : cut.samples) {
        const double dist = std::abs(s.theta - main_lobe_theta);
        if (dist <= main_lobe_halfwidth) {
            direction_sampled = true;
            result.main_lobe_level_db = std::max(result.main_lobe_level_db, s.level_db);
            continue;
        }
        psll = std::max(psll, s.level_db);
        // steered exclusion disk |k - k_s| <= k_c reads |sin t - sin t_s| <= sin t_exc
        if (theta_exc > main_lobe_halfwidth && std::abs(std::sin(s.theta) - sin_main) <= sin_exc) {
            floor = std::max(floor, s.level_db);
            annulus_hit = true;
        }
    }
    if (!direction_sampled) throw InvalidArgument("main lobe direction not inside sampled grid");
    result.psll_db = psll;
    result.exclusion_applicable = annulus_hit;
    result.exclusion_floor_db = annulus_hit ? floor : 0.0;

    // -3 dB full width around the main lobe in the cut plane, linear
    // interpolation between grid samples
    std::vector<std::pair<double, double>> sorted;
    sorted.reserve(cut.samples.size());
    for (const DirectivitySample& s : cut.samples) sorted.emplace_back(s.theta, s.level_db);
    std::sort(sorted.begin(), sorted.end());
    std::size_t peak_idx = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (std::abs(sorted[i].first - main_lobe_theta) <= main_lobe_halfwidth &&
            sorted[i].second > best) {
            best = sorted[i].second;
            peak_idx = i;
        }
    }
    const double half_level = best - 3.0;
    double left = sorted.front().first, right = sorted.back().first;
    for (std::size_t i = peak_idx; i-- > 0;) {
        if (sorted[i].second <= half_level) {
            const double t = (half_level - sorted[i].second) /
                             (sorted[i + 1].second - sorted[i].second);
            left = sorted[i].first + t * (sorted[i + 1].first - sorted[i].first);
            break;
        }
    }
    for (std::size_t i = peak_idx + 1; i < sorted.size(); ++i) {
        if (sorted[i].second <= half_level) {
            const double t = (half_level - sorted[i - 1].second) /
                             (sorted[i].second - sorted[i - 1].second);
            right = sorted[i - 1].first + t * (sorted[i].first - sorted[i - 1].first);
            break;
        }
    }
    result.beamwidth_deg = rad_to_deg(right - left);
    return result;
}

DirectivityPattern piston_field_scan(const PointPattern& pattern,
                                     const std::vector<std::complex<double>>& weights,
                                     const PistonElement& elem,
                                     const std::vector<double>& theta_grid, double phi,
                                     double distance, double frequency, double sound_speed) {
    if (theta_grid.empty()) throw InvalidArgument("empty angle grid");
    if (!(distance > 0.0)) throw InvalidArgument("distance must be positive");
    pattern.validate();
    if (!weights.empty() && weights.size() != pattern.points.size()) {
        throw InvalidArgument("weight count differs from element count");
    }

    // array centered at the origin, microphone on a circle of given radius
    const double cx = 0.5 * pattern.box_x;
    const double cy = 0.5 * pattern.box_y;
    const double k = kTwoPi * frequency / sound_speed;

    DirectivityPattern out;
    out.frequency = frequency;
    out.label = "piston field scan: " + pattern.label;
    std::vector<double> power(theta_grid.size());
    for (std::size_t idx = 0; idx < theta_grid.size(); ++idx) {
        const double theta = theta_grid[idx];
        // field point in the plane spanned by (cos phi, sin phi, 0) and z
        const double fx = distance * std::sin(theta) * std::cos(phi);
        const double fy = distance * std::sin(theta) * std::sin(phi);
        const double fz = distance * std::cos(theta);
        std::complex<double> field = 0.0;
        for (std::size_t j = 0; j < pattern.points.size(); ++j) {
            const double ex = pattern.points[j].x - cx;
            const double ey = pattern.points[j].y - cy;
            const double dx = fx - ex;
            const double dy = fy - ey;
            const double d = std::sqrt(dx * dx + dy * dy + fz * fz);
            // aspect angle between the element normal (+z) and the field point
            const double aspect = std::acos(std::clamp(fz / d, -1.0, 1.0));
            const double gain = element_directivity(elem, aspect, frequency, sound_speed);
            const double drive_phase = weights.empty() ? 0.0 : std::arg(weights[j]);
            const double amp = (weights.empty() ? 1.0 : std::abs(weights[j])) * elem.amplitude;
            field += amp * gain / d *
                     std::polar(1.0, elem.initial_phase + drive_phase + k * d);
        }
        power[idx] = std::norm(field);
    }
    const double peak = *std::max_element(power.begin(), power.end());
    if (!(peak > 0.0)) throw InvalidArgument("pattern has no radiated power");
    out.samples.reserve(theta_grid.size());
    for (std::size_t idx = 0; idx < theta_grid.size(); ++idx) {
        out.samples.push_back({theta_grid[idx], phi, to_db(power[idx], peak)});
    }
    return out;
}

std::vector<double> uniform_theta_grid(double start_deg, double stop_deg, double step_deg) {
    if (!(step_deg > 0.0) || stop_deg < start_deg) throw InvalidArgument("bad theta grid");
    std::vector<double> grid;
    const int count = static_cast<int>(std::round((stop_deg - start_deg) / step_deg));
    grid.reserve(count + 1);
    for (int i = 0; i <= count; ++i) grid.push_back(deg_to_rad(start_deg + i * step_deg));
    return grid;
}

}  // namespace hud
