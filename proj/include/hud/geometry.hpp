#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hud {

/// 2-D vector in meters (real space) or rad/m (reciprocal space).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2& operator+=(const Vec2& v) { x += v.x; y += v.y; return *this; }
    Vec2& operator-=(const Vec2& v) { x -= v.x; y -= v.y; return *this; }
    Vec2& operator*=(double t) { x *= t; y *= t; return *this; }

    friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend Vec2 operator*(Vec2 a, double t) { return a *= t; }
    friend Vec2 operator*(double t, Vec2 a) { return a *= t; }

    friend double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

/// Wrap a coordinate into the canonical periodic range [0, L).
inline double wrap_coordinate(double x, double length) {
    double w = std::fmod(x, length);
    if (w < 0.0) w += length;
    // fmod can return exactly `length` after the correction when x is a tiny
    // negative number; fold that back onto 0.
    if (w >= length) w = 0.0;
    return w;
}

/// Minimum-image separation component for a periodic axis of the given length.
inline double min_image(double dx, double length) {
    return dx - length * std::round(dx / length);
}

/// Periodic (minimum-image) distance between two points in an Lx-by-Ly box.
inline double periodic_distance(const Vec2& a, const Vec2& b, double lx, double ly) {
    return std::hypot(min_image(a.x - b.x, lx), min_image(a.y - b.y, ly));
}

/// Deterministic uniform/Gaussian source on top of mt19937_64.
///
/// Draws are built directly from the raw 64-bit stream so that sequences are
/// identical across standard libraries, which keeps generated artifacts
/// byte-stable for a given seed.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [0, hi).
    double uniform(double hi) { return uniform() * hi; }

    /// Standard normal via Box-Muller (polar form).
    double gaussian() {
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return u * std::sqrt(-2.0 * std::log(s) / s);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace hud
