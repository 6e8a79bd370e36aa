#include "beasst/sensing.hpp"

#include <cmath>
#include <queue>

namespace beasst {

namespace {

// Amanatides-Woo traversal of one ray; reveals cells until the first
// occupied cell, the range limit, or the grid edge.
std::size_t cast_ray(OccupancyGrid& grid, const Vec2& origin, double angle, double range) {
    std::size_t revealed = 0;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    Cell cur = grid.world_to_cell(origin);
    if (!grid.in_bounds(cur)) return 0;

    const double res = grid.resolution();
    const int step_c = dx > 0 ? 1 : -1;
    const int step_r = dy > 0 ? 1 : -1;
    const double inf = std::numeric_limits<double>::infinity();
    double t_max_x = inf, t_max_y = inf, t_delta_x = inf, t_delta_y = inf;
    if (dx != 0.0) {
        const double next_x = (cur.col + (dx > 0 ? 1.0 : 0.0)) * res;
        t_max_x = (next_x - origin.x) / dx;
        t_delta_x = res / std::fabs(dx);
    }
    if (dy != 0.0) {
        const double next_y = (cur.row + (dy > 0 ? 1.0 : 0.0)) * res;
        t_max_y = (next_y - origin.y) / dy;
        t_delta_y = res / std::fabs(dy);
    }

    double t = 0.0;
    while (t <= range) {
        if (grid.reveal(cur)) ++revealed;
        if (grid.truth(cur) == CellState::Occupied) break;
        if (t_max_x < t_max_y) {
            t = t_max_x;
            t_max_x += t_delta_x;
            cur.col += step_c;
        } else {
            t = t_max_y;
            t_max_y += t_delta_y;
            cur.row += step_r;
        }
        if (!grid.in_bounds(cur)) break;
    }
    return revealed;
}

}  // namespace

std::size_t raycast_sense(OccupancyGrid& grid, const Vec2& pose, double range, int n_rays) {
    std::size_t revealed = 0;
    for (int k = 0; k < n_rays; ++k) {
        const double angle = 2.0 * M_PI * k / n_rays;
        revealed += cast_ray(grid, pose, angle, range);
    }
    return revealed;
}

bool is_frontier_cell(const OccupancyGrid& grid, const Cell& c) {
    if (!grid.in_bounds(c) || grid.known(c) != CellState::Free) return false;
    const Cell nbrs[4] = {{c.row - 1, c.col}, {c.row + 1, c.col},
                          {c.row, c.col - 1}, {c.row, c.col + 1}};
    for (const Cell& n : nbrs) {
        if (grid.in_bounds(n) && grid.known(n) == CellState::Unknown) return true;
    }
    return false;
}

std::vector<Frontier> extract_frontiers(const OccupancyGrid& grid) {
    std::vector<std::uint8_t> mark(grid.cell_count(), 0);
    auto idx = [&](const Cell& c) {
        return static_cast<std::size_t>(c.row) * grid.width() + c.col;
    };

    std::vector<Frontier> frontiers;
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            Cell seed{r, c};
            if (mark[idx(seed)] || !is_frontier_cell(grid, seed)) continue;
            Frontier f;
            std::queue<Cell> open;
            open.push(seed);
            mark[idx(seed)] = 1;
            while (!open.empty()) {
                const Cell cur = open.front();
                open.pop();
                f.cells.push_back(cur);
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        Cell n{cur.row + dr, cur.col + dc};
                        if (!grid.in_bounds(n) || mark[idx(n)] || !is_frontier_cell(grid, n)) {
                            continue;
                        }
                        mark[idx(n)] = 1;
                        open.push(n);
                    }
                }
            }
            Vec2 sum{0.0, 0.0};
            for (const Cell& cell : f.cells) sum += grid.cell_center(cell);
            f.centroid = sum * (1.0 / f.cells.size());
            frontiers.push_back(std::move(f));
        }
    }
    return frontiers;
}

}  // namespace beasst
