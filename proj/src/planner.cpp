#include "beasst/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace beasst {

namespace {
constexpr int kDr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr int kDc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

double step_cost(int k, double res) {
    return (kDr[k] != 0 && kDc[k] != 0) ? res * std::sqrt(2.0) : res;
}

struct QueueEntry {
    double priority;
    int row;
    int col;
    bool operator>(const QueueEntry& o) const {
        if (priority != o.priority) return priority > o.priority;
        if (row != o.row) return row > o.row;
        return col > o.col;
    }
};
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;
}  // namespace

double DistanceMap::interpolate(const Vec2& p) const {
    const double gx = p.x / resolution - 0.5;
    const double gy = p.y / resolution - 0.5;
    const int c0 = std::clamp(static_cast<int>(std::floor(gx)), 0, width - 1);
    const int r0 = std::clamp(static_cast<int>(std::floor(gy)), 0, height - 1);
    const int c1 = std::min(c0 + 1, width - 1);
    const int r1 = std::min(r0 + 1, height - 1);
    const double fx = std::clamp(gx - c0, 0.0, 1.0);
    const double fy = std::clamp(gy - r0, 0.0, 1.0);

    double corner[4] = {at({r0, c0}), at({r0, c1}), at({r1, c0}), at({r1, c1})};
    double max_finite = -1.0;
    for (double v : corner) {
        if (std::isfinite(v)) max_finite = std::max(max_finite, v);
    }
    if (max_finite < 0.0) return kUnreachable;
    for (double& v : corner) {
        if (!std::isfinite(v)) v = max_finite + resolution;
    }
    const double top = corner[0] * (1.0 - fx) + corner[1] * fx;
    const double bot = corner[2] * (1.0 - fx) + corner[3] * fx;
    return top * (1.0 - fy) + bot * fy;
}

DistanceMap dijkstra_distance_map(const OccupancyGrid& grid, const Vec2& source) {
    const Cell sc = grid.world_to_cell(source);
    if (!grid.in_bounds(sc) || !grid.truth_free(sc)) {
        throw std::invalid_argument("dijkstra: source not on a free cell");
    }
    DistanceMap map;
    map.width = grid.width();
    map.height = grid.height();
    map.resolution = grid.resolution();
    map.d.assign(grid.cell_count(), kUnreachable);

    auto idx = [&](int r, int c) { return static_cast<std::size_t>(r) * map.width + c; };
    MinQueue open;
    map.d[idx(sc.row, sc.col)] = 0.0;
    open.push({0.0, sc.row, sc.col});
    while (!open.empty()) {
        const auto [dist, r, c] = open.top();
        open.pop();
        if (dist > map.d[idx(r, c)]) continue;
        for (int k = 0; k < 8; ++k) {
            const int nr = r + kDr[k];
            const int nc = c + kDc[k];
            if (!grid.truth_free({nr, nc})) continue;
            const double nd = dist + step_cost(k, map.resolution);
            if (nd < map.d[idx(nr, nc)]) {
                map.d[idx(nr, nc)] = nd;
                open.push({nd, nr, nc});
            }
        }
    }
    return map;
}

std::vector<DistanceMap> dijkstra_distance_maps(const OccupancyGrid& grid,
                                                const std::vector<Vec2>& sources) {
    std::vector<DistanceMap> maps;
    maps.reserve(sources.size());
    for (const Vec2& s : sources) maps.push_back(dijkstra_distance_map(grid, s));
    return maps;
}

std::optional<Path> a_star_path(const OccupancyGrid& grid, const Vec2& start,
                                const Vec2& goal) {
    const Cell sc = grid.world_to_cell(start);
    const Cell gc = grid.world_to_cell(goal);
    if (!grid.known_free(sc) || !grid.known_free(gc)) return std::nullopt;

    const double res = grid.resolution();
    auto heuristic = [&](int r, int c) {
        const double dr = std::abs(r - gc.row);
        const double dc = std::abs(c - gc.col);
        return res * (std::max(dr, dc) + (std::sqrt(2.0) - 1.0) * std::min(dr, dc));
    };
    auto idx = [&](int r, int c) { return static_cast<std::size_t>(r) * grid.width() + c; };

    std::vector<double> g(grid.cell_count(), kUnreachable);
    std::vector<int> parent(grid.cell_count(), -1);
    MinQueue open;
    g[idx(sc.row, sc.col)] = 0.0;
    open.push({heuristic(sc.row, sc.col), sc.row, sc.col});
    while (!open.empty()) {
        const auto [f, r, c] = open.top();
        open.pop();
        if (r == gc.row && c == gc.col) break;
        if (f > g[idx(r, c)] + heuristic(r, c) + 1e-12) continue;
        for (int k = 0; k < 8; ++k) {
            const int nr = r + kDr[k];
            const int nc = c + kDc[k];
            if (!grid.known_free({nr, nc})) continue;
            const double ng = g[idx(r, c)] + step_cost(k, res);
            if (ng < g[idx(nr, nc)]) {
                g[idx(nr, nc)] = ng;
                parent[idx(nr, nc)] = static_cast<int>(idx(r, c));
                open.push({ng + heuristic(nr, nc), nr, nc});
            }
        }
    }
    if (!std::isfinite(g[idx(gc.row, gc.col)])) return std::nullopt;

    Path path;
    path.cost = g[idx(gc.row, gc.col)];
    std::vector<Vec2> rev;
    for (int at = static_cast<int>(idx(gc.row, gc.col)); at >= 0; at = parent[at]) {
        rev.push_back(grid.cell_center({at / grid.width(), at % grid.width()}));
        if (at == static_cast<int>(idx(sc.row, sc.col))) break;
    }
    path.points.assign(rev.rbegin(), rev.rend());
    return path;
}

}  // namespace beasst
