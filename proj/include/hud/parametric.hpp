#pragma once

#include <string>
#include <vector>

#include "hud/radiation.hpp"

namespace hud {

enum class SecondaryModel { product, convolution };

/// Two primary frequencies and their attenuation rates; the secondary beam
/// lives at the difference frequency |f1 - f2|.
struct ParametricSetup {
    double f1 = 40e3;
    double f2 = 41e3;
    double alpha1 = 0.0;  // Np/m at f1
    double alpha2 = 0.0;  // Np/m at f2
    double sound_speed = 343.0;
    SecondaryModel model = SecondaryModel::convolution;

    double difference_frequency() const { return f1 > f2 ? f1 - f2 : f2 - f1; }
    void validate() const;
};

struct SecondaryPrediction {
    DirectivityPattern cut;  // at the difference frequency, 0 dB max
    SecondaryModel model = SecondaryModel::product;
    std::string primary_labels;
};

/// Westervelt difference-frequency directivity
///   D_W(theta) = alpha_s / sqrt(alpha_s^2 + k_d^2 tan^4 theta),
/// alpha_s = alpha1 + alpha2, k_d = |k1 - k2|. Grid must stay inside the open
/// interval (-pi/2, pi/2).
std::vector<double> westervelt_directivity(const ParametricSetup& setup,
                                           const std::vector<double>& theta_grid);

/// Pointwise amplitude product of two primary cuts on identical grids.
SecondaryPrediction product_model(const DirectivityPattern& d1, const DirectivityPattern& d2);

/// Linear convolution over theta of the amplitude product with the unit-sum
/// sampled Westervelt kernel, truncated to the original span. Requires a
/// uniform theta grid.
SecondaryPrediction convolution_model(const DirectivityPattern& d1, const DirectivityPattern& d2,
                                      const ParametricSetup& setup);

/// Atmospheric absorption defaults for the attenuation rates.
struct Atmosphere {
    double temperature_c = 20.0;
    double relative_humidity = 50.0;  // percent
    double pressure_kpa = 101.325;
    double override_alpha = -1.0;  // Np/m; >= 0 bypasses the model
};

/// Absorption rate in Np/m from the ISO 9613-1 analytic fit (or the verbatim
/// override). Valid for frequencies in [1 kHz, 200 kHz].
double default_attenuation(double frequency, const Atmosphere& atmosphere);

}  // namespace hud
