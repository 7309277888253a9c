#include "hud/parametric.hpp"

#include <algorithm>
#include <cmath>

#include "hud/errors.hpp"

namespace hud {

void ParametricSetup::validate() const {
    if (!(f1 > 0.0) || !(f2 > 0.0)) throw InvalidArgument("primary frequencies must be positive");
    if (f1 == f2) throw InvalidArgument("difference frequency must be nonzero (f1 != f2)");
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0)) {
        throw InvalidArgument("attenuation rates must be positive");
    }
    if (!(sound_speed > 0.0)) throw InvalidArgument("sound speed must be positive");
}

std::vector<double> westervelt_directivity(const ParametricSetup& setup,
                                           const std::vector<double>& theta_grid) {
    setup.validate();
    const double alpha_s = setup.alpha1 + setup.alpha2;
    const double k1 = kTwoPi * setup.f1 / setup.sound_speed;
    const double k2 = kTwoPi * setup.f2 / setup.sound_speed;
    const double k_d = std::abs(k1 - k2);

    std::vector<double> out;
    out.reserve(theta_grid.size());
    for (double theta : theta_grid) {
        if (std::abs(theta) >= kPi / 2.0) {
            throw InvalidArgument("Westervelt directivity is singular at theta = +-pi/2");
        }
        const double tan2 = std::tan(theta) * std::tan(theta);
        out.push_back(alpha_s / std::sqrt(alpha_s * alpha_s + k_d * k_d * tan2 * tan2));
    }
    return out;
}

namespace {

void require_matching_cuts(const DirectivityPattern& d1, const DirectivityPattern& d2) {
    if (d1.samples.size() != d2.samples.size() || d1.samples.empty()) {
        throw InvalidArgument("primary patterns must share one nonempty grid");
    }
    for (std::size_t i = 0; i < d1.samples.size(); ++i) {
        if (std::abs(d1.samples[i].theta - d2.samples[i].theta) > 1e-12 ||
            std::abs(d1.samples[i].phi - d2.samples[i].phi) > 1e-12) {
            throw InvalidArgument("primary patterns sampled on different grids");
        }
    }
}

DirectivityPattern normalized_from_amplitude(const std::vector<double>& amplitude,
                                             const DirectivityPattern& grid_source,
                                             double frequency, std::string label) {
    const double peak = *std::max_element(amplitude.begin(), amplitude.end());
    if (!(peak > 0.0)) throw InvalidArgument("secondary prediction has no power");
    DirectivityPattern out;
    out.frequency = frequency;
    out.label = std::move(label);
    out.samples.reserve(amplitude.size());
    for (std::size_t i = 0; i < amplitude.size(); ++i) {
        const double rel = amplitude[i] / peak;
        double db = rel > 0.0 ? 20.0 * std::log10(rel) : -120.0;
        if (db < -120.0) db = -120.0;
        out.samples.push_back(
            {grid_source.samples[i].theta, grid_source.samples[i].phi, db});
    }
    return out;
}

}  // namespace

SecondaryPrediction product_model(const DirectivityPattern& d1, const DirectivityPattern& d2) {
    require_matching_cuts(d1, d2);
    const std::vector<double> a1 = d1.amplitudes();
    const std::vector<double> a2 = d2.amplitudes();
    std::vector<double> product(a1.size());
    for (std::size_t i = 0; i < a1.size(); ++i) product[i] = a1[i] * a2[i];

    SecondaryPrediction prediction;
    prediction.model = SecondaryModel::product;
    prediction.primary_labels = d1.label + " x " + d2.label;
    prediction.cut = normalized_from_amplitude(product, d1, std::abs(d1.frequency - d2.frequency),
                                               "product model secondary");
    return prediction;
}

SecondaryPrediction convolution_model(const DirectivityPattern& d1, const DirectivityPattern& d2,
                                      const ParametricSetup& setup) {
    require_matching_cuts(d1, d2);
    setup.validate();

    // uniform theta grid required
    const std::size_t n = d1.samples.size();
    if (n < 2) throw InvalidArgument("need at least two samples to convolve");
    const double step = d1.samples[1].theta - d1.samples[0].theta;
    if (!(step > 0.0)) throw InvalidArgument("theta grid must be increasing");
    for (std::size_t i = 1; i < n; ++i) {
        const double local = d1.samples[i].theta - d1.samples[i - 1].theta;
        if (std::abs(local - step) > 1e-9 * std::max(1.0, std::abs(step))) {
            throw InvalidArgument("convolution model requires a uniform theta grid");
        }
    }

    const std::vector<double> a1 = d1.amplitudes();
    const std::vector<double> a2 = d2.amplitudes();
    std::vector<double> product(n);
    for (std::size_t i = 0; i < n; ++i) product[i] = a1[i] * a2[i];

    // Westervelt kernel sampled on symmetric offsets inside the open interval,
    // normalized to unit sum so predictions stay scale-free
    const int half = static_cast<int>(std::floor((kPi / 2.0 - 1e-9) / step));
    std::vector<double> offsets;
    offsets.reserve(2 * half + 1);
    for (int j = -half; j <= half; ++j) offsets.push_back(j * step);
    std::vector<double> kernel = westervelt_directivity(setup, offsets);
    double kernel_sum = 0.0;
    for (double v : kernel) kernel_sum += v;
    for (double& v : kernel) v /= kernel_sum;

    // linear convolution truncated back to the original span
    std::vector<double> convolved(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            const int src = static_cast<int>(i) - j;
            if (src < 0 || src >= static_cast<int>(n)) continue;
            acc += kernel[j + half] * product[src];
        }
        convolved[i] = acc;
    }

    SecondaryPrediction prediction;
    prediction.model = SecondaryModel::convolution;
    prediction.primary_labels = d1.label + " x " + d2.label;
    prediction.cut = normalized_from_amplitude(convolved, d1,
                                               std::abs(d1.frequency - d2.frequency),
                                               "convolution model secondary");
    return prediction;
}

double default_attenuation(double frequency, const Atmosphere& atmosphere) {
    if (atmosphere.override_alpha >= 0.0) return atmosphere.override_alpha;
    if (frequency < 1e3 || frequency > 200e3) {
        throw InvalidArgument("attenuation model valid for 1 kHz to 200 kHz");
    }

    // ISO 9613-1 atmospheric absorption: relaxation frequencies of O2 and N2,
    // classical + rotational losses. Result converted from dB/m to Np/m.
    const double t_kelvin = atmosphere.temperature_c + 273.15;
    const double t_ref = 293.15;
    const double p_ref = 101.325;
    const double p_rel = atmosphere.pressure_kpa / p_ref;
    const double t_rel = t_kelvin / t_ref;

    // saturation vapor pressure (ISO 9613-1 Annex B)
    const double t_triple = 273.16;
    const double c_sat = -6.8346 * std::pow(t_triple / t_kelvin, 1.261) + 4.6151;
    const double p_sat_rel = std::pow(10.0, c_sat);
    const double humidity_molar =
        atmosphere.relative_humidity * p_sat_rel / p_rel;  // molar concentration, percent

    const double f_rO =
        p_rel * (24.0 + 4.04e4 * humidity_molar * (0.02 + humidity_molar) /
                            (0.391 + humidity_molar));
    const double f_rN =
        p_rel * std::pow(t_rel, -0.5) *
        (9.0 + 280.0 * humidity_molar * std::exp(-4.170 * (std::pow(t_rel, -1.0 / 3.0) - 1.0)));

    const double f2 = frequency * frequency;
    const double alpha_db_per_m =
        8.686 * f2 *
        (1.84e-11 / p_rel * std::sqrt(t_rel) +
         std::pow(t_rel, -2.5) *
             (0.01275 * std::exp(-2239.1 / t_kelvin) / (f_rO + f2 / f_rO) +
              0.1068 * std::exp(-3352.0 / t_kelvin) / (f_rN + f2 / f_rN)));
    return alpha_db_per_m / 8.686;  // Np/m
}

}  // namespace hud
