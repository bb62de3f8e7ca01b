#pragma once
#include <cstdint>
#include <functional>

namespace disperse {

// Grid cell. x grows right, y grows up. Two cells are adjacent iff their
// Manhattan distance is exactly 1; diagonals are never adjacent.
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell& a, const Cell& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }
    // lexicographic (y, x): used for deterministic tie-breaking
    friend bool operator<(const Cell& a, const Cell& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

struct Offset {
    int dx = 0;
    int dy = 0;
    friend bool operator==(const Offset& a, const Offset& b) { return a.dx == b.dx && a.dy == b.dy; }
    friend bool operator!=(const Offset& a, const Offset& b) { return !(a == b); }
    friend Offset operator-(const Offset& a, const Offset& b) { return {a.dx - b.dx, a.dy - b.dy}; }
};

inline Cell operator+(const Cell& c, const Offset& o) { return {c.x + o.dx, c.y + o.dy}; }
inline Offset operator-(const Cell& a, const Cell& b) { return {a.x - b.x, a.y - b.y}; }

inline int manhattan(const Cell& a, const Cell& b) {
    int dx = a.x - b.x, dy = a.y - b.y;
    return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
}

// Clockwise order starting from "up": up, right, down, left. This single
// convention fixes every scan and tie-break in the project.
enum class Direction : uint8_t { Up = 0, Right = 1, Down = 2, Left = 3 };

inline Offset delta(Direction d) {
    switch (d) {
        case Direction::Up:    return {0, 1};
        case Direction::Right: return {1, 0};
        case Direction::Down:  return {0, -1};
        default:               return {-1, 0};
    }
}

inline Direction clockwise(Direction d)  { return Direction((uint8_t(d) + 1) & 3); }
inline Direction opposite(Direction d)   { return Direction((uint8_t(d) + 2) & 3); }
// the secondary direction of a primary is always its 90-degree clockwise rotation
inline Direction secondary_of(Direction d) { return clockwise(d); }

inline const char* to_string(Direction d) {
    switch (d) {
        case Direction::Up:    return "up";
        case Direction::Right: return "right";
        case Direction::Down:  return "down";
        default:               return "left";
    }
}

constexpr Direction kDirections[4] = {Direction::Up, Direction::Right, Direction::Down,
                                      Direction::Left};

}  // namespace disperse

template <>
struct std::hash<disperse::Cell> {
    size_t operator()(const disperse::Cell& c) const noexcept {
        return std::hash<int64_t>()((int64_t(c.x) << 32) ^ uint32_t(c.y));
    }
};
