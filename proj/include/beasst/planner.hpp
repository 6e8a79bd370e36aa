#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "beasst/grid.hpp"

namespace beasst {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Per-cell shortest-path distances in meters, kUnreachable where no path
// exists (occupied cells included).
struct DistanceMap {
    int width = 0;
    int height = 0;
    double resolution = 1.0;
    std::vector<double> d;

    double at(const Cell& c) const {
        return d[static_cast<std::size_t>(c.row) * width + c.col];
    }
    // Bilinear interpolation over the four surrounding cell centers.
    // Non-finite corners (walls, unreachable pockets) are padded to the
    // largest finite corner plus one cell so queries near walls stay
    // finite and slope away from them; all-infinite neighborhoods stay
    // unreachable.
    double interpolate(const Vec2& p) const;
};

// Exact 8-connected shortest-path distance through truth-free cells,
// diagonal cost sqrt(2)*resolution. Throws if a source sits on an
// occupied cell.
DistanceMap dijkstra_distance_map(const OccupancyGrid& grid, const Vec2& source);

std::vector<DistanceMap> dijkstra_distance_maps(const OccupancyGrid& grid,
                                                const std::vector<Vec2>& sources);

struct Path {
    std::vector<Vec2> points;  // cell centers, start..goal inclusive
    double cost = 0.0;         // meters, equals Dijkstra distance on known cells
};

// 8-connected A* through known-free cells with octile heuristic.
// nullopt when unreachable (the caller drops the target).
std::optional<Path> a_star_path(const OccupancyGrid& grid, const Vec2& start,
                                const Vec2& goal);

}  // namespace beasst
