#pragma once
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "policy.hpp"

namespace disperse {

// ASCII snapshot: '#' wall, '.' free, 'S' source, 'o' settled robot, active
// robots drawn as arrows in their primary-direction state ('*' when the
// policy has no such state).
inline std::string render_ascii(const World& world, const Policy* policy = nullptr) {
    const Environment& env = world.env();
    const BoundingBox& b = env.bounds();
    std::vector<std::string> rows(size_t(b.height()), std::string(size_t(b.width()), '#'));
    auto put = [&](const Cell& c, char ch) {
        rows[size_t(b.max_y - c.y)][size_t(c.x - b.min_x)] = ch;
    };
    for (const Cell& c : env.cells()) put(c, '.');
    put(env.source(), 'S');
    for (int i = 0; i < world.entered(); ++i) {
        const RobotRecord& r = world.robot(i);
        if (r.settled) {
            put(r.pos, 'o');
            continue;
        }
        char glyph = '*';
        if (policy) {
            if (auto dir = policy->primary_of(i)) {
                switch (*dir) {
                    case Direction::Up:    glyph = '^'; break;
                    case Direction::Right: glyph = '>'; break;
                    case Direction::Down:  glyph = 'v'; break;
                    case Direction::Left:  glyph = '<'; break;
                }
            }
        }
        put(r.pos, glyph);
    }
    std::string out;
    for (const std::string& row : rows) {
        out += row;
        out += '\n';
    }
    return out;
}

// SVG snapshot with the same legend: shaded walls, white free cells, green
// source ring, black dots for settled robots, black arrows for active ones.
inline std::string render_svg(const World& world, const Policy* policy = nullptr,
                              int cell_px = 16) {
    const Environment& env = world.env();
    const BoundingBox& b = env.bounds();
    const int W = (b.width() + 2) * cell_px, H = (b.height() + 2) * cell_px;
    auto px = [&](const Cell& c) {  // top-left corner of the cell's square
        return std::pair<int, int>{(c.x - b.min_x + 1) * cell_px,
                                   (b.max_y - c.y + 1) * cell_px};
    };
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << ' ' << H << "'>\n";
    svg << "<rect width='" << W << "' height='" << H << "' fill='#7a9cc6'/>\n";
    for (const Cell& c : env.cells()) {
        auto [x, y] = px(c);
        svg << "<rect x='" << x << "' y='" << y << "' width='" << cell_px << "' height='"
            << cell_px << "' fill='white' stroke='#d8d8d8' stroke-width='1'/>\n";
    }
    {
        auto [x, y] = px(env.source());
        svg << "<circle cx='" << x + cell_px / 2 << "' cy='" << y + cell_px / 2 << "' r='"
            << cell_px * 3 / 8 << "' fill='none' stroke='green' stroke-width='2'/>\n";
    }
    for (int i = 0; i < world.entered(); ++i) {
        const RobotRecord& r = world.robot(i);
        auto [x, y] = px(r.pos);
        const int cx = x + cell_px / 2, cy = y + cell_px / 2;
        if (r.settled) {
            svg << "<circle cx='" << cx << "' cy='" << cy << "' r='" << cell_px / 4
                << "' fill='black'/>\n";
            continue;
        }
        std::optional<Direction> dir;
        if (policy) dir = policy->primary_of(i);
        if (!dir) {
            svg << "<circle cx='" << cx << "' cy='" << cy << "' r='" << cell_px / 4
                << "' fill='black' stroke='white' stroke-width='1'/>\n";
            continue;
        }
        int rot = 0;
        switch (*dir) {
            case Direction::Up:    rot = 0;   break;
            case Direction::Right: rot = 90;  break;
            case Direction::Down:  rot = 180; break;
            case Direction::Left:  rot = 270; break;
        }
        const int h = cell_px * 3 / 8;
        svg << "<polygon points='" << cx << ',' << cy - h << ' ' << cx - h * 3 / 4 << ','
            << cy + h << ' ' << cx + h * 3 / 4 << ',' << cy + h
            << "' fill='black' transform='rotate(" << rot << ' ' << cx << ' ' << cy << ")'/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// Bare-bones polyline chart for ratio series and the like.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

inline std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                                 int width = 640, int height = 400) {
    double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
    bool first = true;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (first) {
                min_x = max_x = x;
                min_y = max_y = y;
                first = false;
            }
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
    if (max_x == min_x) max_x = min_x + 1;
    if (max_y == min_y) max_y = min_y + 1;
    min_y = std::min(min_y, 0.0);
    const int ml = 50, mr = 15, mt = 30, mb = 35;
    auto sx = [&](double x) { return ml + (x - min_x) / (max_x - min_x) * (width - ml - mr); };
    auto sy = [&](double y) { return height - mb - (y - min_y) / (max_y - min_y) * (height - mt - mb); };
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='" << width << "' height='" << height << "' fill='white'/>\n";
    svg << "<text x='" << width / 2 << "' y='18' text-anchor='middle' font-size='13'>" << title
        << "</text>\n";
    svg << "<line x1='" << ml << "' y1='" << sy(min_y) << "' x2='" << width - mr << "' y2='"
        << sy(min_y) << "' stroke='black'/>\n";
    svg << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
        << "' stroke='black'/>\n";
    svg << "<text x='8' y='" << sy(max_y) + 4 << "' font-size='11'>" << max_y << "</text>\n";
    svg << "<text x='" << sx(max_x) << "' y='" << height - 12 << "' font-size='11'>" << max_x
        << "</text>\n";
    for (size_t i = 0; i < series.size(); ++i) {
        svg << "<polyline fill='none' stroke='" << palette[i % 6] << "' stroke-width='1.5' points='";
        for (auto [x, y] : series[i].points) svg << sx(x) << ',' << sy(y) << ' ';
        svg << "'/>\n<text x='" << width - mr - 120 << "' y='" << mt + 14 * int(i + 1)
            << "' font-size='11' fill='" << palette[i % 6] << "'>" << series[i].label
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace disperse
