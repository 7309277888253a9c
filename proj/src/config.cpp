#include "hud/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hud/errors.hpp"

namespace hud {

void RunConfig::validate() const {
    if (!(sound_speed > 0.0)) throw InvalidArgument("sound_speed must be positive");
    if (!(box_length > 0.0)) throw InvalidArgument("box_length must be positive");
    if (n_points < 1) throw InvalidArgument("n_points must be >= 1");
    if (!(chi > 0.0) || chi > 0.5) throw InvalidArgument("chi must lie in (0, 0.5]");
    if (min_separation < 0.0) throw InvalidArgument("min_separation must be >= 0");
    if (!(zero_threshold > 0.0)) throw InvalidArgument("zero_threshold must be positive");
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (!(cut_step_deg > 0.0) || !(map_step_deg > 0.0)) {
        throw InvalidArgument("grid steps must be positive");
    }
    if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
    if (element_radius < 0.0) throw InvalidArgument("element_radius must be >= 0");
    if (!(pressure_kpa > 0.0)) throw InvalidArgument("pressure_kpa must be positive");
    if (relative_humidity < 0.0 || relative_humidity > 100.0) {
        throw InvalidArgument("relative_humidity must lie in [0, 100]");
    }
}

namespace {

template <typename T>
void assign(T& field, const std::string& value, const std::string& key, int line);

template <>
void assign(double& field, const std::string& value, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        field = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
        throw ParseError("bad numeric value for " + key, line);
    }
}

template <>
void assign(int& field, const std::string& value, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        field = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
        throw ParseError("bad integer value for " + key, line);
    }
}

template <>
void assign(std::uint64_t& field, const std::string& value, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        field = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
        throw ParseError("bad integer value for " + key, line);
    }
}

template <>
void assign(std::string& field, const std::string& value, const std::string&, int) {
    field = value;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file: " + path);

    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (stripped.front() == '[' && stripped.back() == ']') continue;  // section headers

        const auto eq = stripped.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "sound_speed") assign(config.sound_speed, value, key, line_no);
        else if (key == "temperature_c") assign(config.temperature_c, value, key, line_no);
        else if (key == "relative_humidity") assign(config.relative_humidity, value, key, line_no);
        else if (key == "pressure_kpa") assign(config.pressure_kpa, value, key, line_no);
        else if (key == "box_length") assign(config.box_length, value, key, line_no);
        else if (key == "n_points") assign(config.n_points, value, key, line_no);
        else if (key == "chi") assign(config.chi, value, key, line_no);
        else if (key == "min_separation") assign(config.min_separation, value, key, line_no);
        else if (key == "seed") assign(config.seed, value, key, line_no);
        else if (key == "zero_threshold") assign(config.zero_threshold, value, key, line_no);
        else if (key == "tolerance") assign(config.tolerance, value, key, line_no);
        else if (key == "cut_step_deg") assign(config.cut_step_deg, value, key, line_no);
        else if (key == "map_step_deg") assign(config.map_step_deg, value, key, line_no);
        else if (key == "n_max") assign(config.n_max, value, key, line_no);
        else if (key == "element_radius") assign(config.element_radius, value, key, line_no);
        else if (key == "output_dir") assign(config.output_dir, value, key, line_no);
        else throw ParseError("unknown config key '" + key + "'", line_no);
    }
    config.validate();
    return config;
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open for writing: " + path);
    char buf[128];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g", key, v);
        out << buf << "\n";
    };
    out << "[physics]\n";
    put("sound_speed", config.sound_speed);
    put("temperature_c", config.temperature_c);
    put("relative_humidity", config.relative_humidity);
    put("pressure_kpa", config.pressure_kpa);
    out << "\n[generation]\n";
    put("box_length", config.box_length);
    out << "n_points = " << config.n_points << "\n";
    put("chi", config.chi);
    put("min_separation", config.min_separation);
    out << "seed = " << config.seed << "\n";
    out << "\n[numerics]\n";
    put("zero_threshold", config.zero_threshold);
    put("tolerance", config.tolerance);
    put("cut_step_deg", config.cut_step_deg);
    put("map_step_deg", config.map_step_deg);
    out << "n_max = " << config.n_max << "\n";
    put("element_radius", config.element_radius);
    out << "\n[io]\n";
    out << "output_dir = " << config.output_dir << "\n";
}

}  // namespace hud
