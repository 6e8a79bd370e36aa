#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace beasst {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Row/column index into a grid. row 0 is the first map line, col 0 the
// first character of a line.
struct Cell {
    int row = 0;
    int col = 0;

    bool operator==(const Cell& o) const { return row == o.row && col == o.col; }
    bool operator!=(const Cell& o) const { return !(*this == o); }
    bool operator<(const Cell& o) const {
        return row != o.row ? row < o.row : col < o.col;
    }
};

struct CellHash {
    std::size_t operator()(const Cell& c) const {
        return std::hash<std::int64_t>()((static_cast<std::int64_t>(c.row) << 32) ^
                                         static_cast<std::uint32_t>(c.col));
    }
};

// Smallest absolute angular difference, in [0, pi].
inline double angle_between(double a, double b) {
    double d = std::fmod(std::fabs(a - b), 2.0 * M_PI);
    return d > M_PI ? 2.0 * M_PI - d : d;
}

}  // namespace beasst
