#pragma once
#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cell.hpp"

namespace disperse {

// Environment / map construction failures.
class MapError : public std::runtime_error {
public:
    enum class Kind {
        NoSource,
        EmptyRegion,
        MalformedHeader,
        DimensionMismatch,
        SourceBlocked,
        SourceOutOfBounds,
        BadParams,
        NotInRegion,
        NoCornerAvailable,
    };

    MapError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct BoundingBox {
    int min_x = 0, min_y = 0, max_x = -1, max_y = -1;  // empty when max < min
    int width() const { return max_x - min_x + 1; }
    int height() const { return max_y - min_y + 1; }
    bool contains(const Cell& c) const {
        return c.x >= min_x && c.x <= max_x && c.y >= min_y && c.y <= max_y;
    }
};

// An immutable grid region R with a designated source cell. Cells are stored
// both as a list (stable ids, row-major from the bottom-left of the bounding
// box) and as a bitmap over the bounding box for O(1) membership tests.
class Environment {
public:
    Environment(std::vector<Cell> free_cells, Cell source) {
        if (free_cells.empty()) throw MapError(MapError::Kind::EmptyRegion, "region has no free cells");
        std::sort(free_cells.begin(), free_cells.end());
        free_cells.erase(std::unique(free_cells.begin(), free_cells.end()), free_cells.end());

        box_.min_x = box_.max_x = free_cells[0].x;
        box_.min_y = box_.max_y = free_cells[0].y;
        for (const Cell& c : free_cells) {
            box_.min_x = std::min(box_.min_x, c.x);
            box_.max_x = std::max(box_.max_x, c.x);
            box_.min_y = std::min(box_.min_y, c.y);
            box_.max_y = std::max(box_.max_y, c.y);
        }
        grid_.assign(size_t(box_.width()) * size_t(box_.height()), -1);
        cells_ = std::move(free_cells);
        for (size_t i = 0; i < cells_.size(); ++i) grid_[flat(cells_[i])] = int32_t(i);

        if (!in_region(source))
            throw MapError(MapError::Kind::NotInRegion, "source cell is not a free cell of the region");
        source_ = source;

        if (!connected())
            throw MapError(MapError::Kind::BadParams, "region is not 4-connected");
    }

    int size() const { return int(cells_.size()); }
    const Cell& source() const { return source_; }
    const BoundingBox& bounds() const { return box_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const Cell& cell(int id) const { return cells_[size_t(id)]; }

    bool in_region(const Cell& c) const {
        return box_.contains(c) && grid_[flat(c)] >= 0;
    }
    // -1 when c is a wall
    int id_of(const Cell& c) const {
        return box_.contains(c) ? grid_[flat(c)] : -1;
    }

    friend bool operator==(const Environment& a, const Environment& b) {
        return a.source_ == b.source_ && a.cells_ == b.cells_;
    }

private:
    size_t flat(const Cell& c) const {
        return size_t(c.y - box_.min_y) * size_t(box_.width()) + size_t(c.x - box_.min_x);
    }

    bool connected() const;

    std::vector<Cell> cells_;
    std::vector<int32_t> grid_;
    BoundingBox box_;
    Cell source_;
};

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

// Exact 4-connected shortest path distances from origin, indexed by cell id.
inline std::vector<int> bfs_distances(const Environment& env, const Cell& origin) {
    int oid = env.id_of(origin);
    if (oid < 0) throw MapError(MapError::Kind::NotInRegion, "bfs origin is not in the region");
    std::vector<int> dist(size_t(env.size()), -1);
    std::vector<int32_t> queue;
    queue.reserve(size_t(env.size()));
    dist[size_t(oid)] = 0;
    queue.push_back(oid);
    for (size_t head = 0; head < queue.size(); ++head) {
        int id = queue[head];
        const Cell c = env.cell(id);
        for (Direction d : kDirections) {
            int nid = env.id_of(c + delta(d));
            if (nid >= 0 && dist[size_t(nid)] < 0) {
                dist[size_t(nid)] = dist[size_t(id)] + 1;
                queue.push_back(nid);
            }
        }
    }
    return dist;
}

inline bool Environment::connected() const {
    auto dist = [&] {
        std::vector<int> d(cells_.size(), -1);
        std::vector<int32_t> q;
        d[0] = 0;
        q.push_back(0);
        for (size_t h = 0; h < q.size(); ++h) {
            const Cell c = cells_[size_t(q[h])];
            for (Direction dir : kDirections) {
                int nid = id_of(c + delta(dir));
                if (nid >= 0 && d[size_t(nid)] < 0) {
                    d[size_t(nid)] = 1;
                    q.push_back(nid);
                }
            }
        }
        return q.size();
    }();
    return dist == cells_.size();
}

// ---------------------------------------------------------------------------
// Vertex classification (corners and halls)
// ---------------------------------------------------------------------------

// A corner is removable: it has at most one free neighbor, or exactly two
// perpendicular free neighbors whose shared diagonal cell is also free. A
// hall has two perpendicular free neighbors whose shared diagonal is a wall;
// halls are the articulation points of simply connected regions.
struct VertexClass {
    enum class Kind { Corner, Hall, Open };
    Kind kind = Kind::Open;
    std::optional<Cell> diag;

    bool is_corner() const { return kind == Kind::Corner; }
    bool is_hall() const { return kind == Kind::Hall; }
};

// Classify v inside an arbitrary region view (e.g. R(t) = region minus
// settled robots). is_free(c) must be a pure membership predicate.
template <typename FreeFn>
VertexClass classify_in(const FreeFn& is_free, const Cell& v) {
    if (!is_free(v)) throw MapError(MapError::Kind::NotInRegion, "classify: vertex not in region view");
    Cell nbr[4];
    int count = 0;
    for (Direction d : kDirections) {
        Cell c = v + delta(d);
        if (is_free(c)) nbr[count++] = c;
    }
    if (count <= 1) return {VertexClass::Kind::Corner, std::nullopt};
    if (count >= 3) return {VertexClass::Kind::Open, std::nullopt};
    // two free neighbors: collinear -> open; perpendicular -> the shared
    // diagonal w != v decides corner vs hall
    Offset a = nbr[0] - v, b = nbr[1] - v;
    if (a.dx == -b.dx && a.dy == -b.dy) return {VertexClass::Kind::Open, std::nullopt};
    Cell w{v.x + a.dx + b.dx, v.y + a.dy + b.dy};
    if (is_free(w)) return {VertexClass::Kind::Corner, w};
    return {VertexClass::Kind::Hall, w};
}

inline VertexClass classify(const Environment& env, const Cell& v) {
    return classify_in([&](const Cell& c) { return env.in_region(c); }, v);
}

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

// R is simply connected iff R is connected and its complement (walls plus the
// infinite outside) is one 4-connected component. Checked by flood-filling
// walls from a one-cell padded frame around the bounding box: any wall cell
// the flood never reaches is enclosed by free cells.
inline bool is_simply_connected(const Environment& env) {
    const BoundingBox& b = env.bounds();
    int w = b.width() + 2, h = b.height() + 2;
    auto wall_at = [&](int ix, int iy) {
        return !env.in_region({b.min_x - 1 + ix, b.min_y - 1 + iy});
    };
    std::vector<uint8_t> seen(size_t(w) * size_t(h), 0);
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int ix, int iy) {
        if (ix < 0 || iy < 0 || ix >= w || iy >= h) return;
        size_t at = size_t(iy) * size_t(w) + size_t(ix);
        if (seen[at] || !wall_at(ix, iy)) return;
        seen[at] = 1;
        stack.emplace_back(ix, iy);
    };
    push(0, 0);
    while (!stack.empty()) {
        auto [ix, iy] = stack.back();
        stack.pop_back();
        push(ix + 1, iy);
        push(ix - 1, iy);
        push(ix, iy + 1);
        push(ix, iy - 1);
    }
    for (int iy = 0; iy < h; ++iy)
        for (int ix = 0; ix < w; ++ix)
            if (wall_at(ix, iy) && !seen[size_t(iy) * size_t(w) + size_t(ix)]) return false;
    return true;
}

// Number of enclosed wall components (0 for a simply connected region).
inline int hole_count(const Environment& env) {
    const BoundingBox& b = env.bounds();
    int w = b.width() + 2, h = b.height() + 2;
    auto wall_at = [&](int ix, int iy) {
        return !env.in_region({b.min_x - 1 + ix, b.min_y - 1 + iy});
    };
    std::vector<int> comp(size_t(w) * size_t(h), -1);
    int ncomp = 0;
    std::vector<std::pair<int, int>> stack;
    for (int sy = 0; sy < h; ++sy)
        for (int sx = 0; sx < w; ++sx) {
            if (!wall_at(sx, sy) || comp[size_t(sy) * size_t(w) + size_t(sx)] >= 0) continue;
            int id = ncomp++;
            stack.emplace_back(sx, sy);
            comp[size_t(sy) * size_t(w) + size_t(sx)] = id;
            while (!stack.empty()) {
                auto [ix, iy] = stack.back();
                stack.pop_back();
                const int nx[4] = {ix + 1, ix - 1, ix, ix};
                const int ny[4] = {iy, iy, iy + 1, iy - 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
                    size_t at = size_t(ny[k]) * size_t(w) + size_t(nx[k]);
                    if (comp[at] < 0 && wall_at(nx[k], ny[k])) {
                        comp[at] = id;
                        stack.emplace_back(nx[k], ny[k]);
                    }
                }
            }
        }
    return ncomp - 1;  // one component is the outer sea
}

// Cut vertices of the free-cell adjacency graph (iterative DFS low-link).
inline std::vector<Cell> articulation_points(const Environment& env) {
    const int n = env.size();
    std::vector<int> disc(size_t(n), -1), low(size_t(n), 0), parent(size_t(n), -1);
    std::vector<int> child_count(size_t(n), 0);
    std::vector<uint8_t> is_cut(size_t(n), 0);
    int timer = 0;

    struct Frame { int id; int edge; };
    std::vector<Frame> stack;
    for (int root = 0; root < n; ++root) {
        if (disc[size_t(root)] >= 0) continue;
        stack.push_back({root, 0});
        disc[size_t(root)] = low[size_t(root)] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.edge < 4) {
                Direction d = kDirections[f.edge++];
                int nid = env.id_of(env.cell(f.id) + delta(d));
                if (nid < 0) continue;
                if (disc[size_t(nid)] < 0) {
                    parent[size_t(nid)] = f.id;
                    ++child_count[size_t(f.id)];
                    disc[size_t(nid)] = low[size_t(nid)] = timer++;
                    stack.push_back({nid, 0});
                } else if (nid != parent[size_t(f.id)]) {
                    low[size_t(f.id)] = std::min(low[size_t(f.id)], disc[size_t(nid)]);
                }
            } else {
                stack.pop_back();
                int p = parent[size_t(f.id)];
                if (p >= 0) {
                    low[size_t(p)] = std::min(low[size_t(p)], low[size_t(f.id)]);
                    if (parent[size_t(p)] >= 0 && low[size_t(f.id)] >= disc[size_t(p)])
                        is_cut[size_t(p)] = 1;
                }
            }
        }
        if (child_count[size_t(root)] >= 2) is_cut[size_t(root)] = 1;
    }

    std::vector<Cell> out;
    for (int id = 0; id < n; ++id)
        if (is_cut[size_t(id)]) out.push_back(env.cell(id));
    return out;
}

// Fill every wall component that is not connected to the outside of the
// bounding box; the result is simply connected and keeps the outer silhouette.
inline Environment repair_holes(const Environment& env) {
    const BoundingBox& b = env.bounds();
    int w = b.width() + 2, h = b.height() + 2;
    auto wall_at = [&](int ix, int iy) {
        return !env.in_region({b.min_x - 1 + ix, b.min_y - 1 + iy});
    };
    std::vector<uint8_t> outer(size_t(w) * size_t(h), 0);
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int ix, int iy) {
        if (ix < 0 || iy < 0 || ix >= w || iy >= h) return;
        size_t at = size_t(iy) * size_t(w) + size_t(ix);
        if (outer[at] || !wall_at(ix, iy)) return;
        outer[at] = 1;
        stack.emplace_back(ix, iy);
    };
    push(0, 0);
    while (!stack.empty()) {
        auto [ix, iy] = stack.back();
        stack.pop_back();
        push(ix + 1, iy);
        push(ix - 1, iy);
        push(ix, iy + 1);
        push(ix, iy - 1);
    }
    std::vector<Cell> cells = env.cells();
    for (int iy = 1; iy < h - 1; ++iy)
        for (int ix = 1; ix < w - 1; ++ix)
            if (wall_at(ix, iy) && !outer[size_t(iy) * size_t(w) + size_t(ix)])
                cells.push_back({b.min_x - 1 + ix, b.min_y - 1 + iy});
    return Environment(std::move(cells), env.source());
}

// A cell minimizing the sum of distances to all cells (discrete geometric
// median); ties broken by smallest (y, x).
inline Cell optimal_source(const Environment& env) {
    long long best_sum = -1;
    Cell best = env.cell(0);
    for (int id = 0; id < env.size(); ++id) {
        std::vector<int> dist = bfs_distances(env, env.cell(id));
        long long sum = 0;
        for (int d : dist) sum += d;
        if (best_sum < 0 || sum < best_sum ||
            (sum == best_sum && env.cell(id) < best)) {
            best_sum = sum;
            best = env.cell(id);
        }
    }
    return best;
}

// 4-connected component of `cells` containing `seed`, for loaders that must
// discard unreachable pockets before constructing an Environment.
inline std::vector<Cell> component_of(const std::vector<Cell>& cells, const Cell& seed) {
    if (cells.empty()) return {};
    int min_x = cells[0].x, max_x = cells[0].x, min_y = cells[0].y, max_y = cells[0].y;
    for (const Cell& c : cells) {
        min_x = std::min(min_x, c.x);
        max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y);
        max_y = std::max(max_y, c.y);
    }
    int w = max_x - min_x + 1, h = max_y - min_y + 1;
    auto flat = [&](const Cell& c) {
        return size_t(c.y - min_y) * size_t(w) + size_t(c.x - min_x);
    };
    std::vector<uint8_t> free(size_t(w) * size_t(h), 0), seen(size_t(w) * size_t(h), 0);
    for (const Cell& c : cells) free[flat(c)] = 1;
    std::vector<Cell> out, stack;
    if (seed.x < min_x || seed.x > max_x || seed.y < min_y || seed.y > max_y || !free[flat(seed)])
        return out;
    seen[flat(seed)] = 1;
    stack.push_back(seed);
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        out.push_back(c);
        for (Direction d : kDirections) {
            Cell nc = c + delta(d);
            if (nc.x < min_x || nc.x > max_x || nc.y < min_y || nc.y > max_y) continue;
            if (free[flat(nc)] && !seen[flat(nc)]) {
                seen[flat(nc)] = 1;
                stack.push_back(nc);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ASCII map format: '.' free, '#' wall, 'S' source (exactly one, free).
// Cells outside the text are walls. The region is the 4-connected component
// of free cells containing 'S'. Line 0 of the text is the top row.
// ---------------------------------------------------------------------------

inline Environment from_ascii(const std::string& text) {
    std::vector<std::string> rows;
    std::string line;
    for (char ch : text) {
        if (ch == '\n') {
            rows.push_back(line);
            line.clear();
        } else if (ch != '\r') {
            line.push_back(ch);
        }
    }
    if (!line.empty()) rows.push_back(line);

    const int height = int(rows.size());
    std::optional<Cell> source;
    std::vector<Cell> raw;
    int sources = 0;
    for (int r = 0; r < height; ++r) {
        for (int x = 0; x < int(rows[size_t(r)].size()); ++x) {
            char ch = rows[size_t(r)][size_t(x)];
            if (ch != '.' && ch != 'S') continue;
            Cell c{x, height - 1 - r};
            raw.push_back(c);
            if (ch == 'S') {
                ++sources;
                source = c;
            }
        }
    }
    if (raw.empty()) throw MapError(MapError::Kind::EmptyRegion, "map has no free cells");
    if (sources != 1)
        throw MapError(MapError::Kind::NoSource,
                       "map must contain exactly one 'S', found " + std::to_string(sources));
    return Environment(component_of(raw, *source), *source);
}

inline std::string to_ascii(const Environment& env) {
    const BoundingBox& b = env.bounds();
    std::string out;
    out.reserve(size_t(b.width() + 1) * size_t(b.height()));
    for (int y = b.max_y; y >= b.min_y; --y) {
        for (int x = b.min_x; x <= b.max_x; ++x) {
            Cell c{x, y};
            if (c == env.source())
                out.push_back('S');
            else
                out.push_back(env.in_region(c) ? '.' : '#');
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace disperse
