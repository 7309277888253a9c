#include <cmath>
#include <vector>

#include "doctest.h"
#include "hud/errors.hpp"
#include "hud/parametric.hpp"
#include "hud/pattern.hpp"
#include "hud/radiation.hpp"

using namespace hud;

namespace {

DirectivityPattern flat_cut(const std::vector<double>& thetas, double level_db) {
    DirectivityPattern out;
    out.frequency = 40e3;
    for (double t : thetas) out.samples.push_back({t, 0.0, level_db});
    return out;
}

DirectivityPattern gaussian_lobe(const std::vector<double>& thetas, double center,
                                 double width) {
    DirectivityPattern out;
    out.frequency = 40e3;
    for (double t : thetas) {
        const double amp = std::exp(-0.5 * (t - center) * (t - center) / (width * width));
        out.samples.push_back({t, 0.0, 20.0 * std::log10(std::max(amp, 1e-6))});
    }
    return out;
}

}  // namespace

TEST_CASE("Westervelt directivity") {
    ParametricSetup setup;
    setup.f1 = 40e3;
    setup.f2 = 41e3;
    setup.alpha1 = 0.1;
    setup.alpha2 = 0.11;

    SUBCASE("unity on axis, strictly decreasing, positive") {
        const auto thetas = uniform_theta_grid(-80, 80, 0.5);
        const auto dw = westervelt_directivity(setup, thetas);
        const std::size_t mid = thetas.size() / 2;
        CHECK(dw[mid] == doctest::Approx(1.0));
        for (std::size_t i = mid; i + 1 < dw.size(); ++i) {
            CHECK(dw[i + 1] < dw[i] + 1e-15);
            CHECK(dw[i + 1] > 0.0);
        }
    }
    SUBCASE("symmetric in theta") {
        const auto thetas = uniform_theta_grid(-60, 60, 1.0);
        const auto dw = westervelt_directivity(setup, thetas);
        for (std::size_t i = 0; i < dw.size(); ++i) {
            CHECK(dw[i] == doctest::Approx(dw[dw.size() - 1 - i]));
        }
    }
    SUBCASE("closed-form half-power angle") {
        // D_W = 1/sqrt(2) where k_d tan^2 theta = alpha_s
        const double alpha_s = setup.alpha1 + setup.alpha2;
        const double k_d = kTwoPi * std::abs(setup.f1 - setup.f2) / setup.sound_speed;
        const double theta_star = std::atan(std::sqrt(alpha_s / k_d));
        const auto dw = westervelt_directivity(setup, {theta_star});
        CHECK(dw[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("degenerate difference (k_d = 0) is identically 1") {
        ParametricSetup same = setup;
        same.f2 = same.f1;  // invalid: f1 == f2 is rejected
        CHECK_THROWS_AS(westervelt_directivity(same, {0.1}), InvalidArgument);
        // nearly-degenerate pair instead
        same.f2 = same.f1 * (1.0 + 1e-12);
        const auto dw = westervelt_directivity(same, uniform_theta_grid(-80, 80, 5.0));
        for (double v : dw) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("grid touching +-pi/2 is rejected") {
        CHECK_THROWS_AS(westervelt_directivity(setup, {kPi / 2.0}), InvalidArgument);
    }
}

TEST_CASE("product model") {
    const auto thetas = uniform_theta_grid(-90, 90, 0.1);

    SUBCASE("flat second pattern is the identity") {
        const auto d1 = gaussian_lobe(thetas, 0.0, deg_to_rad(4.0));
        const auto d2 = flat_cut(thetas, 0.0);
        const SecondaryPrediction pred = product_model(d1, d2);
        REQUIRE(pred.cut.samples.size() == d1.samples.size());
        for (std::size_t i = 0; i < d1.samples.size(); ++i) {
            CHECK(pred.cut.samples[i].level_db ==
                  doctest::Approx(d1.samples[i].level_db).epsilon(1e-9));
        }
    }
    SUBCASE("identical inputs double the level in dB") {
        const auto d1 = gaussian_lobe(thetas, deg_to_rad(10.0), deg_to_rad(6.0));
        const SecondaryPrediction pred = product_model(d1, d1);
        for (std::size_t i = 0; i < d1.samples.size(); ++i) {
            const double expected = std::max(2.0 * d1.samples[i].level_db, -120.0);
            CHECK(pred.cut.samples[i].level_db == doctest::Approx(expected).epsilon(1e-6));
        }
    }
    SUBCASE("grid mismatch is rejected") {
        const auto d1 = gaussian_lobe(uniform_theta_grid(-90, 90, 0.1), 0.0, 0.1);
        const auto d2 = gaussian_lobe(uniform_theta_grid(-90, 90, 0.2), 0.0, 0.1);
        CHECK_THROWS_AS(product_model(d1, d2), InvalidArgument);
    }
}

TEST_CASE("convolution model") {
    ParametricSetup setup;
    setup.f1 = 40e3;
    setup.f2 = 41e3;
    setup.alpha1 = 0.15;
    setup.alpha2 = 0.16;
    const auto thetas = uniform_theta_grid(-90, 90, 0.1);

    SUBCASE("near-delta kernel reduces to the product model") {
        ParametricSetup tight = setup;
        tight.alpha1 = 5e-7;  // alpha_s -> 0: kernel width well under a grid step
        tight.alpha2 = 5e-7;
        const auto d1 = gaussian_lobe(thetas, 0.0, deg_to_rad(5.0));
        const auto d2 = gaussian_lobe(thetas, deg_to_rad(2.0), deg_to_rad(5.0));
        const auto conv = convolution_model(d1, d2, tight);
        const auto prod = product_model(d1, d2);
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            if (prod.cut.samples[i].level_db > -60.0) {
                CHECK(std::abs(conv.cut.samples[i].level_db - prod.cut.samples[i].level_db) <
                      0.2);
            }
        }
    }
    SUBCASE("delta-like product reproduces the Westervelt kernel shape") {
        // product concentrated in one sample at theta = 0
        DirectivityPattern d1 = flat_cut(thetas, -120.0);
        d1.samples[thetas.size() / 2].level_db = 0.0;
        const auto d2 = flat_cut(thetas, 0.0);
        const auto conv = convolution_model(d1, d2, setup);
        const auto dw = westervelt_directivity(setup, thetas);
        const double peak = *std::max_element(dw.begin(), dw.end());
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const double expected = 20.0 * std::log10(dw[i] / peak);
            if (expected > -60.0) {
                CHECK(conv.cut.samples[i].level_db == doctest::Approx(expected).epsilon(1e-3));
            }
        }
    }
    SUBCASE("normalization invariance: scaling an input changes nothing") {
        const auto d1 = gaussian_lobe(thetas, 0.0, deg_to_rad(5.0));
        const auto d2 = gaussian_lobe(thetas, deg_to_rad(1.0), deg_to_rad(7.0));
        DirectivityPattern d1_scaled = d1;
        for (auto& s : d1_scaled.samples) s.level_db += 14.0;  // linear factor 5
        d1_scaled.normalized = false;
        const auto a = convolution_model(d1, d2, setup);
        const auto b = convolution_model(d1_scaled, d2, setup);
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            CHECK(a.cut.samples[i].level_db ==
                  doctest::Approx(b.cut.samples[i].level_db).epsilon(1e-9));
        }
    }
    SUBCASE("smoothing never narrows the -3 dB width") {
        const auto d1 = gaussian_lobe(thetas, 0.0, deg_to_rad(3.0));
        const auto conv = convolution_model(d1, d1, setup);
        const auto prod = product_model(d1, d1);
        const PatternMetrics mc = metrics(conv.cut, 0.0, deg_to_rad(10.0), deg_to_rad(20.0));
        const PatternMetrics mp = metrics(prod.cut, 0.0, deg_to_rad(10.0), deg_to_rad(20.0));
        CHECK(mc.beamwidth_deg >= mp.beamwidth_deg - 1e-9);
    }
    SUBCASE("non-uniform grid is rejected") {
        std::vector<double> bad = {0.0, 0.1, 0.25, 0.3};
        DirectivityPattern d1;
        d1.frequency = 40e3;
        for (double t : bad) d1.samples.push_back({t, 0.0, 0.0});
        CHECK_THROWS_AS(convolution_model(d1, d1, setup), InvalidArgument);
    }
}

TEST_CASE("double sideband pairs point the same way") {
    // main lobes of (40, 39) and (40, 41) kHz predictions coincide within one
    // grid step when the primaries share a steering direction
    const auto thetas = uniform_theta_grid(-90, 90, 0.1);
    const PointPattern p = generate_periodic(14, 14, 0.0128625);
    const SteeringTarget t40{deg_to_rad(15.0), 0.0, 40e3, 343.0};
    const SteeringTarget t39{deg_to_rad(15.0), 0.0, 39e3, 343.0};
    const SteeringTarget t41{deg_to_rad(15.0), 0.0, 41e3, 343.0};
    const auto d40 = array_factor(p, steering_weights(p, t40), thetas, {0.0}, 40e3, 343.0);
    const auto d39 = array_factor(p, steering_weights(p, t39), thetas, {0.0}, 39e3, 343.0);
    const auto d41 = array_factor(p, steering_weights(p, t41), thetas, {0.0}, 41e3, 343.0);

    ParametricSetup lower{40e3, 39e3, 0.12, 0.11, 343.0, SecondaryModel::convolution};
    ParametricSetup upper{40e3, 41e3, 0.12, 0.13, 343.0, SecondaryModel::convolution};
    const auto pred_lower = convolution_model(d40, d39, lower);
    const auto pred_upper = convolution_model(d40, d41, upper);

    auto argmax_theta = [](const DirectivityPattern& cut) {
        double best = -1e9, theta = 0.0;
        for (const auto& s : cut.samples) {
            if (s.level_db > best) {
                best = s.level_db;
                theta = s.theta;
            }
        }
        return theta;
    };
    CHECK(std::abs(argmax_theta(pred_lower.cut) - argmax_theta(pred_upper.cut)) <
          deg_to_rad(0.1) + 1e-12);
}

TEST_CASE("default attenuation model") {
    const Atmosphere atm;
    SUBCASE("monotone between 30 and 40 kHz at default conditions") {
        CHECK(default_attenuation(40e3, atm) > default_attenuation(30e3, atm));
    }
    SUBCASE("positive over the supported band") {
        for (double f = 1e3; f <= 200e3; f *= 2.0) {
            CHECK(default_attenuation(f, atm) > 0.0);
        }
    }
    SUBCASE("plausible magnitude at 40 kHz, 20 C, 50 % RH") {
        // about 1.3 dB/m in standard tables
        const double np_per_m = default_attenuation(40e3, atm);
        const double db_per_m = np_per_m * 8.686;
        CHECK(db_per_m > 0.8);
        CHECK(db_per_m < 2.0);
    }
    SUBCASE("override wins verbatim") {
        Atmosphere forced = atm;
        forced.override_alpha = 0.321;
        CHECK(default_attenuation(40e3, forced) == 0.321);
    }
    SUBCASE("out-of-range frequency is rejected") {
        CHECK_THROWS_AS(default_attenuation(500.0, atm), InvalidArgument);
        CHECK_THROWS_AS(default_attenuation(300e3, atm), InvalidArgument);
    }
}
