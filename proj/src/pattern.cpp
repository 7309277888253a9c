#include "hud/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hud/errors.hpp"

namespace hud {

double PointPattern::min_pair_distance(int* out_i, int* out_j) const {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double d = periodic_distance(points[i], points[j], box_x, box_y);
            if (d < best) {
                best = d;
                bi = static_cast<int>(i);
                bj = static_cast<int>(j);
            }
        }
    }
    if (out_i) *out_i = bi;
    if (out_j) *out_j = bj;
    return best;
}

double PointPattern::mean_nearest_neighbor_distance() const {
    if (points.size() < 2) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            nearest = std::min(nearest, periodic_distance(points[i], points[j], box_x, box_y));
        }
        sum += nearest;
    }
    return sum / static_cast<double>(points.size());
}

void PointPattern::validate() const {
    if (points.empty()) throw InvalidArgument("pattern has no points");
    if (!(box_x > 0.0) || !(box_y > 0.0)) throw InvalidArgument("pattern box must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec2& p = points[i];
        if (!(p.x >= 0.0) || p.x >= box_x || !(p.y >= 0.0) || p.y >= box_y) {
            std::ostringstream msg;
            msg << "point " << i << " (" << p.x << ", " << p.y << ") outside box [0, "
                << box_x << ") x [0, " << box_y << ")";
            throw InvalidArgument(msg.str());
        }
    }
    if (points.size() > 1 && min_pair_distance() <= 0.0) {
        throw InvalidArgument("pattern contains coincident points");
    }
}

PointPattern generate_periodic(int rows, int cols, double spacing) {
    if (rows < 1 || cols < 1) throw InvalidArgument("rows and cols must be >= 1");
    if (!(spacing > 0.0)) throw InvalidArgument("spacing must be positive");

    const double side = std::max(rows, cols) * spacing;
    PointPattern out;
    out.box_x = side;
    out.box_y = side;
    out.points.reserve(static_cast<std::size_t>(rows) * cols);
    // lattice centered in the box
    const double x0 = 0.5 * side - 0.5 * (cols - 1) * spacing;
    const double y0 = 0.5 * side - 0.5 * (rows - 1) * spacing;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            out.points.push_back({x0 + c * spacing, y0 + r * spacing});
        }
    }
    std::ostringstream label;
    label << "periodic " << rows << "x" << cols << " spacing " << spacing;
    out.label = label.str();
    return out;
}

PointPattern generate_random(int n, double box_length, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("N must be >= 1");
    if (!(box_length > 0.0)) throw InvalidArgument("box length must be positive");

    SeededRng rng(seed);
    PointPattern out;
    out.box_x = box_length;
    out.box_y = box_length;
    out.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.points.push_back({rng.uniform(box_length), rng.uniform(box_length)});
    }
    std::ostringstream label;
    label << "random N=" << n << " seed=" << seed;
    out.label = label.str();
    return out;
}

PointPattern tile(const PointPattern& sub, int reps_x, int reps_y) {
    if (reps_x < 1 || reps_y < 1) throw InvalidArgument("tile repetitions must be >= 1");

    PointPattern out;
    out.box_x = sub.box_x * reps_x;
    out.box_y = sub.box_y * reps_y;
    out.points.reserve(sub.points.size() * reps_x * reps_y);
    for (int i = 0; i < reps_x; ++i) {
        for (int j = 0; j < reps_y; ++j) {
            const Vec2 shift{i * sub.box_x, j * sub.box_y};
            for (const Vec2& p : sub.points) out.points.push_back(p + shift);
        }
    }
    std::ostringstream label;
    label << sub.label << " tiled " << reps_x << "x" << reps_y;
    out.label = label.str();
    return out;
}

void save_pattern(const PointPattern& pattern, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open for writing: " + path);

    char buf[160];
    if (pattern.square_box()) {
        std::snprintf(buf, sizeof buf, "# hudarray pattern v1 L=%.17g N=%zu", pattern.box_x,
                      pattern.points.size());
    } else {
        std::snprintf(buf, sizeof buf, "# hudarray pattern v1 L=%.17g N=%zu Ly=%.17g",
                      pattern.box_x, pattern.points.size(), pattern.box_y);
    }
    out << buf << "\n";
    for (const Vec2& p : pattern.points) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g", p.x, p.y);
        out << buf << "\n";
    }
    if (!out) throw InvalidArgument("write failed: " + path);
}

PointPattern load_pattern(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open pattern file: " + path);

    std::string header;
    if (!std::getline(in, header)) throw ParseError("no points (empty file)");

    PointPattern out;
    std::size_t declared_n = 0;
    {
        std::istringstream hs(header);
        std::string hash, name, tag, token;
        hs >> hash >> name >> tag;
        std::string version;
        hs >> version;
        if (hash != "#" || name != "hudarray" || tag != "pattern" || version != "v1") {
            throw ParseError("bad header, expected '# hudarray pattern v1 ...'", 1);
        }
        bool have_l = false, have_n = false;
        while (hs >> token) {
            if (token.rfind("L=", 0) == 0) {
                out.box_x = std::stod(token.substr(2));
                have_l = true;
            } else if (token.rfind("N=", 0) == 0) {
                declared_n = static_cast<std::size_t>(std::stoull(token.substr(2)));
                have_n = true;
            } else if (token.rfind("Ly=", 0) == 0) {
                out.box_y = std::stod(token.substr(3));
            } else {
                throw ParseError("unknown header token '" + token + "'", 1);
            }
        }
        if (!have_l || !have_n) throw ParseError("header missing L= or N=", 1);
        if (out.box_y == 0.0) out.box_y = out.box_x;
        if (!(out.box_x > 0.0) || !(out.box_y > 0.0)) throw ParseError("non-positive box", 1);
    }

    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        // skip blank and comment lines
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream ls(line);
        double x, y;
        if (!(ls >> x >> y)) throw ParseError("malformed row '" + line + "'", line_no);
        std::string extra;
        if (ls >> extra) throw ParseError("trailing content '" + extra + "'", line_no);
        if (!(x >= 0.0) || x >= out.box_x || !(y >= 0.0) || y >= out.box_y) {
            throw ParseError("coordinate outside box", line_no);
        }
        out.points.push_back({x, y});
    }
    if (out.points.empty()) throw ParseError("no points");
    if (declared_n != out.points.size()) {
        throw ParseError("header N=" + std::to_string(declared_n) + " but file has " +
                         std::to_string(out.points.size()) + " points");
    }
    if (out.points.size() > 1) {
        int i = 0, j = 0;
        if (out.min_pair_distance(&i, &j) <= 0.0) {
            // report the later of the two rows (header is line 1, first point line 2)
            throw ParseError("duplicate point", std::max(i, j) + 2);
        }
    }
    out.label = "loaded from " + path;
    return out;
}

}  // namespace hud
