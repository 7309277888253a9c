#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "hud/errors.hpp"
#include "hud/pattern.hpp"
#include "hud/radiation.hpp"

using namespace hud;

namespace {

// power-series Bessel J1, independent of the library's special functions
double series_j1(double x) {
    double term = x / 2.0;
    double sum = term;
    for (int m = 1; m < 40; ++m) {
        term *= -(x * x / 4.0) / (m * (m + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double bisect_j1_root(double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (series_j1(lo) * series_j1(mid) <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// direct linear-power array factor for oracle use
double direct_power(const PointPattern& p, const std::vector<std::complex<double>>& w, double kx,
                    double ky) {
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const std::complex<double> phase = std::polar(1.0, kx * p.points[j].x + ky * p.points[j].y);
        sum += (w.empty() ? 1.0 : w[j]) * phase;
    }
    return std::norm(sum) / static_cast<double>(p.size());
}

constexpr double kSpacing = 0.0128625;  // 3 f0 = 40 kHz at c = 343
constexpr double kC = 343.0;

}  // namespace

TEST_CASE("observation wavevector") {
    const Vec2 boresight = observation_wavevector(0.0, 1.234, 40e3, kC);
    CHECK(boresight.x == 0.0);
    CHECK(boresight.y == 0.0);

    const Vec2 grazing = observation_wavevector(kPi / 2.0, 0.0, 40e3, kC);
    CHECK(grazing.x == doctest::Approx(kTwoPi * 40e3 / kC));
    CHECK(grazing.y == doctest::Approx(0.0));

    const Vec2 thirty = observation_wavevector(deg_to_rad(30.0), 0.0, 40e3, kC);
    CHECK(thirty.norm() == doctest::Approx(kPi * 40e3 / kC));
}

TEST_CASE("steering weights") {
    const PointPattern p = generate_random(30, 0.2, 4);
    SUBCASE("boresight target gives unit weights") {
        const auto w = steering_weights(p, {0.0, 0.0, 40e3, kC});
        for (const auto& wi : w) {
            CHECK(wi.real() == doctest::Approx(1.0));
            CHECK(wi.imag() == doctest::Approx(0.0));
        }
    }
    SUBCASE("all weights have unit magnitude") {
        const auto w = steering_weights(p, {deg_to_rad(25.0), deg_to_rad(40.0), 40e3, kC});
        for (const auto& wi : w) CHECK(std::abs(wi) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("antipodal elements get conjugate weights about the center") {
        PointPattern two;
        two.box_x = two.box_y = 0.2;
        two.points = {{0.1 - 0.03, 0.1}, {0.1 + 0.03, 0.1}};
        const auto w = steering_weights(two, {deg_to_rad(20.0), 0.0, 40e3, kC});
        // center phase factors out; relative phases are conjugate
        const std::complex<double> ratio = w[0] / w[1];
        CHECK(std::abs(ratio.imag()) > 0.01);
        CHECK(std::abs(w[0] * std::conj(w[1]) - ratio) < 1e-12);
        const Vec2 ks = observation_wavevector(deg_to_rad(20.0), 0.0, 40e3, kC);
        CHECK(std::arg(ratio) == doctest::Approx(ks.x * 0.06));
    }
}

TEST_CASE("array factor anchors") {
    SUBCASE("colocated elements give a flat pattern") {
        PointPattern p;
        p.box_x = p.box_y = 0.2;
        // same physical location is invalid input (coincident points), so use
        // one point: |A|^2 = 1 everywhere, flat at 0 dB
        p.points = {{0.1, 0.1}};
        const auto cut = array_factor(p, {}, uniform_theta_grid(-90, 90, 1.0), {0.0}, 40e3, kC);
        for (const auto& s : cut.samples) CHECK(s.level_db == doctest::Approx(0.0));
    }
    SUBCASE("periodic 14x14 grating lobes at asin(2/3)") {
        const PointPattern p = generate_periodic(14, 14, kSpacing);
        const auto cut =
            array_factor(p, {}, uniform_theta_grid(-90, 90, 0.1), {0.0}, 40e3, kC);
        // find the highest sample near +41.81 degrees
        double best_level = -1e9, best_theta = 0.0;
        for (const auto& s : cut.samples) {
            const double deg = rad_to_deg(s.theta);
            if (deg > 20.0 && s.level_db > best_level) {
                best_level = s.level_db;
                best_theta = deg;
            }
        }
        CHECK(std::abs(best_theta - rad_to_deg(std::asin(2.0 / 3.0))) < 0.2);
        CHECK(best_level > -0.1);
    }
}

TEST_CASE("shift theorem: steering equals evaluating at k - k_s") {
    const PointPattern p = generate_random(40, 0.2, 21);
    const SteeringTarget target{deg_to_rad(18.0), deg_to_rad(0.0), 40e3, kC};
    const auto w = steering_weights(p, target);
    const Vec2 ks = observation_wavevector(target.theta_s, target.phi_s, 40e3, kC);
    for (double theta_deg : {-50.0, -10.0, 0.0, 12.0, 33.0, 71.0}) {
        const Vec2 k = observation_wavevector(deg_to_rad(theta_deg), 0.0, 40e3, kC);
        const double steered = direct_power(p, w, k.x, k.y);
        const double shifted = direct_power(p, {}, k.x - ks.x, k.y - ks.y);
        CHECK(steered == doctest::Approx(shifted).epsilon(1e-12));
    }
}

TEST_CASE("exclusion radius saturates with a flag") {
    CHECK(exclusion_radius(0.0, 40e3, kC).radians == 0.0);
    const double lambda = kC / 40e3;
    const ExclusionAngle at_one = exclusion_radius(kTwoPi / lambda, 40e3, kC);
    CHECK(at_one.radians == doctest::Approx(kPi / 2.0));
    CHECK_FALSE(at_one.full_hemisphere);
    const ExclusionAngle beyond = exclusion_radius(1.5 * kTwoPi / lambda, 40e3, kC);
    CHECK(beyond.radians == doctest::Approx(kPi / 2.0));
    CHECK(beyond.full_hemisphere);
}

TEST_CASE("piston element directivity") {
    const PistonElement piston{0.005, 1.0, 0.0};
    CHECK(element_directivity(piston, 0.0, 40e3, kC) == doctest::Approx(1.0));
    CHECK(element_directivity({0.0, 1.0, 0.0}, 1.1, 40e3, kC) == 1.0);

    SUBCASE("first null at the first root of J1 (series oracle)") {
        const double root = bisect_j1_root(3.0, 4.5);
        CHECK(root == doctest::Approx(3.8317059702).epsilon(1e-9));
        // pick frequency so that k a sin(theta) can reach the root
        const double freq = 60e3;
        const double ka = kTwoPi * freq / kC * piston.radius;
        REQUIRE(ka > root);
        const double theta_null = std::asin(root / ka);
        CHECK(std::abs(element_directivity(piston, theta_null, freq, kC)) < 1e-9);
        // strictly positive before the first null
        CHECK(element_directivity(piston, 0.8 * theta_null, freq, kC) > 0.0);
    }
}

TEST_CASE("total directivity composes piston and array factor") {
    const PointPattern p = generate_periodic(2, 2, kSpacing);
    const auto thetas = uniform_theta_grid(-60, 60, 0.5);

    SUBCASE("point-source element reproduces the array factor") {
        const auto af = array_factor(p, {}, thetas, {0.0}, 40e3, kC);
        const auto total = total_directivity(p, {}, {0.0, 1.0, 0.0}, thetas, {0.0}, 40e3, kC);
        REQUIRE(af.samples.size() == total.samples.size());
        for (std::size_t i = 0; i < af.samples.size(); ++i) {
            CHECK(af.samples[i].level_db == doctest::Approx(total.samples[i].level_db));
        }
    }
    SUBCASE("single element pattern is the squared piston gain alone") {
        PointPattern one;
        one.box_x = one.box_y = 0.2;
        one.points = {{0.1, 0.1}};
        const PistonElement piston{0.005, 1.0, 0.0};
        const auto total = total_directivity(one, {}, piston, thetas, {0.0}, 40e3, kC);
        for (const auto& s : total.samples) {
            const double g = element_directivity(piston, s.theta, 40e3, kC);
            const double expect_db = 20.0 * std::log10(std::max(std::abs(g), 1e-12));
            CHECK(s.level_db == doctest::Approx(expect_db).epsilon(1e-6));
        }
    }
}

TEST_CASE("far-field model matches brute-force piston fields at 2 m") {
    // 2x2 lattice, microphone circle at 2 m: the finite-distance sum keeps
    // per-element spreading, propagation phase and aspect angles
    const PointPattern p = generate_periodic(2, 2, kSpacing);
    const PistonElement piston{0.005, 1.0, 0.0};
    const auto thetas = uniform_theta_grid(-60, 60, 0.5);

    SUBCASE("unsteered") {
        const auto far = total_directivity(p, {}, piston, thetas, {0.0}, 40e3, kC);
        const auto near = piston_field_scan(p, {}, piston, thetas, 0.0, 2.0, 40e3, kC);
        REQUIRE(far.samples.size() == near.samples.size());
        for (std::size_t i = 0; i < far.samples.size(); ++i) {
            CHECK(std::abs(far.samples[i].level_db - near.samples[i].level_db) < 0.5);
        }
    }
    SUBCASE("steered 20 degrees") {
        const SteeringTarget target{deg_to_rad(20.0), 0.0, 40e3, kC};
        const auto w = steering_weights(p, target);
        const auto far = total_directivity(p, w, piston, thetas, {0.0}, 40e3, kC);
        const auto near = piston_field_scan(p, w, piston, thetas, 0.0, 2.0, 40e3, kC);
        for (std::size_t i = 0; i < far.samples.size(); ++i) {
            CHECK(std::abs(far.samples[i].level_db - near.samples[i].level_db) < 0.5);
        }
    }
}

TEST_CASE("delay quantization") {
    const PointPattern p = generate_random(25, 0.2, 8);
    const auto w = steering_weights(p, {deg_to_rad(30.0), 0.0, 40e3, kC});

    SUBCASE("vanishing resolution leaves weights unchanged") {
        const auto q = quantize_delays(w, 40e3, 1e-15);
        for (std::size_t i = 0; i < w.size(); ++i) {
            CHECK(std::abs(q[i] - w[i]) < 1e-9);
        }
    }
    SUBCASE("0.8 us at 40 kHz snaps phases to 11.52 degree steps") {
        const double step = kTwoPi * 40e3 * 0.8e-6;
        CHECK(rad_to_deg(step) == doctest::Approx(11.52));
        const auto q = quantize_delays(w, 40e3, 0.8e-6);
        for (const auto& qi : q) {
            const double ratio = std::arg(qi) / step;
            CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
            CHECK(std::abs(qi) == doctest::Approx(1.0));
        }
    }
    CHECK_THROWS_AS(quantize_delays(w, 40e3, 0.0), InvalidArgument);
}

TEST_CASE("pattern metrics") {
    // constructed cut: main lobe at 0, secondary lobe of equal height at 40 deg
    DirectivityPattern cut;
    cut.frequency = 40e3;
    for (int i = -900; i <= 900; ++i) {
        const double theta = deg_to_rad(i * 0.1);
        double level = -60.0;
        if (std::abs(i) <= 20) level = -0.05 * i * i * 0.1;  // parabolic main lobe
        if (std::abs(i - 400) <= 20) level = -0.05 * (i - 400) * (i - 400) * 0.1;
        cut.samples.push_back({theta, 0.0, level});
    }
    SUBCASE("two equal lobes give 0 dB PSLL") {
        const PatternMetrics m = metrics(cut, 0.0, deg_to_rad(5.0), deg_to_rad(30.0));
        CHECK(m.psll_db == doctest::Approx(0.0));
        CHECK(m.exclusion_applicable);
        // annulus (5, 30) degrees only sees the -60 dB floor
        CHECK(m.exclusion_floor_db == doctest::Approx(-60.0));
    }
    SUBCASE("single lobe with a -60 dB floor") {
        DirectivityPattern single;
        single.frequency = 40e3;
        for (int i = -900; i <= 900; ++i) {
            const double theta = deg_to_rad(i * 0.1);
            const double level = std::abs(i) <= 20 ? -0.005 * i * i : -60.0;
            single.samples.push_back({theta, 0.0, level});
        }
        const PatternMetrics m = metrics(single, 0.0, deg_to_rad(5.0), deg_to_rad(30.0));
        CHECK(m.psll_db == doctest::Approx(-60.0));
    }
    SUBCASE("empty annulus is flagged not applicable") {
        const PatternMetrics m = metrics(cut, 0.0, deg_to_rad(5.0), deg_to_rad(2.0));
        CHECK_FALSE(m.exclusion_applicable);
    }
    SUBCASE("beamwidth interpolates the -3 dB crossings") {
        // parabolic lobe: level = -0.005 i^2 dB hits -3 dB at i = 24.5 samples
        DirectivityPattern single;
        single.frequency = 40e3;
        for (int i = -900; i <= 900; ++i) {
            const double theta = deg_to_rad(i * 0.1);
            const double level = std::abs(i) <= 100 ? -0.005 * i * i : -60.0;
            single.samples.push_back({theta, 0.0, level});
        }
        const PatternMetrics m = metrics(single, 0.0, deg_to_rad(5.0), deg_to_rad(30.0));
        CHECK(m.beamwidth_deg == doctest::Approx(2.0 * std::sqrt(3.0 / 0.005) * 0.1).epsilon(0.01));
    }
    SUBCASE("main lobe outside the grid throws") {
        CHECK_THROWS_AS(metrics(cut, deg_to_rad(120.0), deg_to_rad(5.0), deg_to_rad(30.0)),
                        InvalidArgument);
    }
}
