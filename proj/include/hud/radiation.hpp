#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hud/geometry.hpp"
#include "hud/pattern.hpp"

namespace hud {

/// Desired main-lobe direction and operating frequency.
struct SteeringTarget {
    double theta_s = 0.0;  // radians, elevation from boresight, [0, pi/2)
    double phi_s = 0.0;    // radians, azimuth
    double frequency = 40e3;
    double sound_speed = 343.0;

    void validate() const;
};

/// Sampled far-field level over (theta, phi), dB relative to its own maximum.
struct DirectivitySample {
    double theta = 0.0;  // radians; signed in cut planes
    double phi = 0.0;
    double level_db = 0.0;
};

struct DirectivityPattern {
    std::vector<DirectivitySample> samples;
    double frequency = 0.0;
    std::string label;
    bool normalized = true;  // max level is exactly 0 dB

    /// Theta values of a single-phi cut (requires all samples at one phi).
    std::vector<double> cut_thetas() const;
    std::vector<double> cut_levels_db() const;
    /// Linear amplitude 10^(dB/20) per sample.
    std::vector<double> amplitudes() const;
};

/// Circular piston element, Eq.-style 2 J1(ka sin t)/(ka sin t) directivity.
struct PistonElement {
    double radius = 0.0;        // meters; 0 = point source
    double amplitude = 1.0;     // linear drive units
    double initial_phase = 0.0; // radians
};

/// k = (2 pi f / c) sin(theta) (cos(phi), sin(phi)).
Vec2 observation_wavevector(double theta, double phi, double frequency, double sound_speed);

/// Unit-magnitude steering phases w_j = exp(-i k_s . r_j).
std::vector<std::complex<double>> steering_weights(const PointPattern& pattern,
                                                   const SteeringTarget& target);

/// |A(k(theta, phi))|^2 = |sum_j w_j exp(i k . r_j)|^2 / N over the grid
/// (all theta x phi combinations), normalized to 0 dB max.
DirectivityPattern array_factor(const PointPattern& pattern,
                                const std::vector<std::complex<double>>& weights,
                                const std::vector<double>& theta_grid,
                                const std::vector<double>& phi_grid,
                                double frequency, double sound_speed);

/// arcsin(k_c lambda / 2 pi); saturates (flagged) at pi/2 when the stealthy
/// disk covers the whole visible region.
struct ExclusionAngle {
    double radians = 0.0;
    bool full_hemisphere = false;
};

ExclusionAngle exclusion_radius(double k_c, double frequency, double sound_speed);

/// Piston amplitude directivity with the removable theta = 0 singularity
/// handled analytically; 1 for a point source.
double element_directivity(const PistonElement& elem, double theta, double frequency,
                           double sound_speed);

/// |D_f(theta)|^2 * |A(theta, phi)|^2, normalized to 0 dB max.
DirectivityPattern total_directivity(const PointPattern& pattern,
                                     const std::vector<std::complex<double>>& weights,
                                     const PistonElement& elem,
                                     const std::vector<double>& theta_grid,
                                     const std::vector<double>& phi_grid,
                                     double frequency, double sound_speed);

/// Snap each weight phase to the nearest multiple of 2 pi f * resolution
/// (one delay-line step); magnitudes untouched.
std::vector<std::complex<double>> quantize_delays(const std::vector<std::complex<double>>& weights,
                                                  double frequency, double resolution);

/// Pattern quality figures for a cut-plane pattern. The exclusion annulus is
///   halfwidth < |theta - theta_main| and |sin(theta) - sin(theta_main)| <= sin(theta_exc),
/// which reduces to halfwidth < |theta| <= theta_exc for an unsteered lobe.
struct PatternMetrics {
    double psll_db = 0.0;             // max level outside the main-lobe cap
    double exclusion_floor_db = 0.0;  // max level inside the annulus
    bool exclusion_applicable = false;
    double beamwidth_deg = 0.0;       // -3 dB full width in the cut plane
    double main_lobe_level_db = 0.0;  // level at the declared main-lobe direction
};

PatternMetrics metrics(const DirectivityPattern& cut, double main_lobe_theta,
                       double main_lobe_halfwidth, double theta_exc);

/// Brute-force piston-source field summation at a finite microphone distance:
/// per-element spherical spreading, propagation phase and per-element aspect
/// angle. Oracle for total_directivity.
DirectivityPattern piston_field_scan(const PointPattern& pattern,
                                     const std::vector<std::complex<double>>& weights,
                                     const PistonElement& elem,
                                     const std::vector<double>& theta_grid, double phi,
                                     double distance, double frequency, double sound_speed);

/// Uniform theta grid in radians, inclusive of both ends.
std::vector<double> uniform_theta_grid(double start_deg, double stop_deg, double step_deg);

}  // namespace hud
