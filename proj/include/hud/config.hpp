#pragma once

#include <cstdint>
#include <string>

namespace hud {

/// Run-wide defaults shared by the CLI subcommands. Parsed from a flat
/// key = value file with optional [section] headers; command-line flags
/// override file values. Angles here and in all files are degrees.
struct RunConfig {
    // physics
    double sound_speed = 343.0;       // m/s
    double temperature_c = 20.0;      // attenuation defaults
    double relative_humidity = 50.0;  // percent
    double pressure_kpa = 101.325;

    // defaults for generation
    // Box chosen so the chi = 0.5, N = 200 construction lands at a mean
    // nearest-neighbor distance of about 12.9 mm (half the design wavelength
    // at 40/3 kHz and c = 343 m/s).
    double box_length = 0.184;    // meters
    int n_points = 200;
    double chi = 0.5;
    double min_separation = 0.010;
    std::uint64_t seed = 1;

    // numeric thresholds
    double zero_threshold = 1e-8;  // S treated as vanished
    double tolerance = 1e-10;      // per-k optimization target

    // sampling grids
    double cut_step_deg = 0.1;  // theta step for cut planes
    double map_step_deg = 1.0;  // theta/phi step for hemisphere maps
    int n_max = 40;             // reciprocal grid extent for maps

    // piston element (10 mm diameter transducer)
    double element_radius = 0.005;

    std::string output_dir = ".";

    void validate() const;  // throws InvalidArgument on non-positive physicals
};

/// Load key = value config; unknown keys are an error (they are usually
/// typos in batch scripts).
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

}  // namespace hud
