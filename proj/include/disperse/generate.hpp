#pragma once
#include <string>
#include <vector>

#include "environment.hpp"
#include "rng.hpp"

namespace disperse {

// Full k x k square with the given source.
inline Environment gen_square(int k, Cell source) {
    if (k < 1) throw MapError(MapError::Kind::BadParams, "gen_square: k must be >= 1");
    if (source.x < 0 || source.x >= k || source.y < 0 || source.y >= k)
        throw MapError(MapError::Kind::SourceOutOfBounds,
                       "gen_square: source outside [0," + std::to_string(k) + ")^2");
    std::vector<Cell> cells;
    cells.reserve(size_t(k) * size_t(k));
    for (int y = 0; y < k; ++y)
        for (int x = 0; x < k; ++x) cells.push_back({x, y});
    return Environment(std::move(cells), source);
}

// Straight path of n cells along y = 0 with the source at the left end.
inline Environment gen_path(int n) {
    if (n < 1) throw MapError(MapError::Kind::BadParams, "gen_path: n must be >= 1");
    std::vector<Cell> cells;
    cells.reserve(size_t(n));
    for (int x = 0; x < n; ++x) cells.push_back({x, 0});
    return Environment(std::move(cells), {0, 0});
}

// Random simply connected region: start from a full k x k square with a
// uniformly chosen source, then repeatedly delete a uniformly chosen corner
// cell of the current region (never the source). Corner removal preserves
// simple-connectedness and all surviving pairwise distances, so the result
// is simply connected by construction. Deterministic given seed.
inline Environment gen_carved(int k, int removals, uint64_t seed) {
    if (k < 1 || removals < 0 || removals >= k * k)
        throw MapError(MapError::Kind::BadParams, "gen_carved: need 0 <= removals < k*k");
    SplitMix rng(seed);
    Cell source{int(rng.below(uint64_t(k))), int(rng.below(uint64_t(k)))};

    std::vector<uint8_t> free(size_t(k) * size_t(k), 1);
    auto at = [&](const Cell& c) -> uint8_t& { return free[size_t(c.y) * size_t(k) + size_t(c.x)]; };
    auto is_free = [&](const Cell& c) {
        return c.x >= 0 && c.x < k && c.y >= 0 && c.y < k && at(c);
    };

    std::vector<Cell> corners;
    for (int step = 0; step < removals; ++step) {
        corners.clear();
        for (int y = 0; y < k; ++y)
            for (int x = 0; x < k; ++x) {
                Cell c{x, y};
                if (!at(c) || c == source) continue;
                if (classify_in(is_free, c).is_corner()) corners.push_back(c);
            }
        if (corners.empty())
            throw MapError(MapError::Kind::NoCornerAvailable,
                           "gen_carved: no removable corner (bug: a simply connected region of >= 2 "
                           "cells always has two corners)");
        at(corners[size_t(rng.below(corners.size()))]) = 0;
    }

    std::vector<Cell> cells;
    for (int y = 0; y < k; ++y)
        for (int x = 0; x < k; ++x)
            if (free[size_t(y) * size_t(k) + size_t(x)]) cells.push_back({x, y});
    return Environment(std::move(cells), source);
}

// Multi-column construction G(k, r): 10r width-1 columns spaced 2r apart on a
// bottom row of length 20r^2. Columns 1 and k are one cell taller and are the
// only ones joined to a top row; every other column is a dead-end spike. Not
// simply connected for k >= 2. Source at the bottom-left corner.
inline Environment gen_gkr(int k, int r) {
    if (r < 1 || k < 1 || k > 10 * r)
        throw MapError(MapError::Kind::BadParams, "gen_gkr: need r >= 1 and 1 <= k <= 10r");
    const int columns = 10 * r;
    const int bottom_len = 20 * r * r;
    const int body = 30 * r * r;  // column height; 1 and k gain the top-row cell
    std::vector<Cell> cells;
    for (int x = 0; x < bottom_len; ++x) cells.push_back({x, 0});
    for (int j = 1; j <= columns; ++j) {
        int x = 2 * r * (j - 1);
        for (int y = 1; y <= body; ++y) cells.push_back({x, y});
    }
    int x1 = 0, xk = 2 * r * (k - 1);
    for (int x = x1; x <= xk; ++x) cells.push_back({x, body + 1});
    return Environment(std::move(cells), {0, 0});
}

// ---------------------------------------------------------------------------
// MovingAI map format: `type <t>` / `height H` / `width W` / `map`, then H
// rows of W characters. '.' and 'G' are passable; everything else (@, O, T,
// W, S-swamp, ...) is an obstacle. Row 0 is the top of the map. Movement
// stays 4-connected regardless of the declared type.
// ---------------------------------------------------------------------------

inline Environment load_movingai(const std::string& text, Cell source) {
    std::vector<std::string> lines;
    std::string line;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(line);
            line.clear();
        } else if (ch != '\r') {
            line.push_back(ch);
        }
    }
    if (!line.empty()) lines.push_back(line);

    auto field = [&](size_t idx, const std::string& key) -> std::string {
        if (idx >= lines.size() || lines[idx].rfind(key + " ", 0) != 0)
            throw MapError(MapError::Kind::MalformedHeader,
                           "movingai: expected '" + key + " ...' on line " + std::to_string(idx + 1));
        return lines[idx].substr(key.size() + 1);
    };

    field(0, "type");
    int height = 0, width = 0;
    try {
        height = std::stoi(field(1, "height"));
        width = std::stoi(field(2, "width"));
    } catch (const std::exception&) {
        throw MapError(MapError::Kind::MalformedHeader, "movingai: height/width not integers");
    }
    if (height < 1 || width < 1)
        throw MapError(MapError::Kind::MalformedHeader, "movingai: non-positive dimensions");
    if (lines.size() < 4 || lines[3] != "map")
        throw MapError(MapError::Kind::MalformedHeader, "movingai: missing 'map' line");

    size_t row_count = lines.size() - 4;
    while (row_count > 0 && lines[3 + row_count].empty()) --row_count;  // trailing blank lines
    if (int(row_count) != height)
        throw MapError(MapError::Kind::DimensionMismatch,
                       "movingai: header says height " + std::to_string(height) + " but found " +
                           std::to_string(row_count) + " rows");

    std::vector<Cell> passable;
    bool source_passable = false;
    for (int r = 0; r < height; ++r) {
        const std::string& row = lines[size_t(4 + r)];
        if (int(row.size()) != width)
            throw MapError(MapError::Kind::DimensionMismatch,
                           "movingai: row " + std::to_string(r + 1) + " has length " +
                               std::to_string(row.size()) + ", expected " + std::to_string(width));
        for (int x = 0; x < width; ++x) {
            char ch = row[size_t(x)];
            if (ch != '.' && ch != 'G') continue;
            Cell c{x, height - 1 - r};
            passable.push_back(c);
            if (c == source) source_passable = true;
        }
    }
    if (!source_passable)
        throw MapError(MapError::Kind::SourceBlocked,
                       "movingai: source (" + std::to_string(source.x) + "," +
                           std::to_string(source.y) + ") is not a passable cell");
    return Environment(component_of(passable, source), source);
}

}  // namespace disperse
