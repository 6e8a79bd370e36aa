#include "beasst/grid.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beasst {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution)
    : width_(width), height_(height), res_(resolution) {
    if (width <= 0 || height <= 0 || !(resolution > 0.0)) {
        throw std::invalid_argument("OccupancyGrid: non-positive dimensions");
    }
    truth_.assign(static_cast<std::size_t>(width) * height, CellState::Free);
    known_.assign(truth_.size(), CellState::Unknown);
}

bool OccupancyGrid::reveal(const Cell& c) {
    auto& k = known_[index(c)];
    if (k != CellState::Unknown) return false;
    k = truth_[index(c)];
    ++known_cells_;
    return true;
}

void OccupancyGrid::reveal_all() {
    known_ = truth_;
    known_cells_ = truth_.size();
}

namespace {

template <typename FreePred>
std::optional<Cell> ring_search(const OccupancyGrid& g, const Cell& c, const Vec2& target,
                                FreePred free) {
    const int max_r = std::max(g.width(), g.height());
    for (int r = 0; r <= max_r; ++r) {
        std::optional<Cell> best;
        double best_d = 0.0;
        for (int dr = -r; dr <= r; ++dr) {
            for (int dc = -r; dc <= r; ++dc) {
                if (std::max(std::abs(dr), std::abs(dc)) != r) continue;
                Cell cand{c.row + dr, c.col + dc};
                if (!g.in_bounds(cand) || !free(cand)) continue;
                const double d = distance(g.cell_center(cand), target);
                if (!best || d < best_d - 1e-12 ||
                    (d < best_d + 1e-12 && cand < *best)) {
                    best = cand;
                    best_d = d;
                }
            }
        }
        if (best) return best;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Cell> OccupancyGrid::nearest_free_cell(const Cell& c, const Vec2& target) const {
    return ring_search(*this, c, target, [this](const Cell& x) { return truth_free(x); });
}

std::optional<Cell> OccupancyGrid::nearest_known_free_cell(const Cell& c,
                                                           const Vec2& target) const {
    return ring_search(*this, c, target, [this](const Cell& x) { return known_free(x); });
}

OccupancyGrid parse_map(const std::string& text) {
    std::istringstream in(text);
    int w = 0, h = 0;
    double res = 0.0;
    if (!(in >> w >> h >> res)) {
        throw std::runtime_error("map: bad header, expected 'W H RES'");
    }
    std::string line;
    std::getline(in, line);  // rest of header line
    OccupancyGrid grid(w, h, res);
    for (int r = 0; r < h; ++r) {
        if (!std::getline(in, line) || static_cast<int>(line.size()) < w) {
            throw std::runtime_error("map: row " + std::to_string(r) + " truncated");
        }
        for (int c = 0; c < w; ++c) {
            switch (line[c]) {
                case '.': break;
                case '#': grid.set_truth({r, c}, CellState::Occupied); break;
                default:
                    throw std::runtime_error("map: unexpected character '" +
                                             std::string(1, line[c]) + "'");
            }
        }
    }
    return grid;
}

OccupancyGrid load_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("map: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_map(ss.str());
}

std::string serialize_map(const OccupancyGrid& grid) {
    std::ostringstream out;
    out << grid.width() << ' ' << grid.height() << ' ' << grid.resolution() << '\n';
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            out << (grid.truth({r, c}) == CellState::Occupied ? '#' : '.');
        }
        out << '\n';
    }
    return out.str();
}

OccupancyGrid make_arena(int width, int height, double resolution) {
    OccupancyGrid grid(width, height, resolution);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            if (r == 0 || c == 0 || r == height - 1 || c == width - 1) {
                grid.set_truth({r, c}, CellState::Occupied);
            }
        }
    }
    return grid;
}

OccupancyGrid make_rooms(int width, int height, double resolution, int rooms_x,
                         int rooms_y, int door_cells, std::uint64_t seed) {
    if (rooms_x < 1 || rooms_y < 1) {
        throw std::invalid_argument("make_rooms: need at least one room per axis");
    }
    OccupancyGrid grid = make_arena(width, height, resolution);
    Rng rng(seed);

    // Interior wall lines at even divisions.
    std::vector<int> wall_cols, wall_rows;
    for (int i = 1; i < rooms_x; ++i) wall_cols.push_back(i * (width - 1) / rooms_x);
    for (int i = 1; i < rooms_y; ++i) wall_rows.push_back(i * (height - 1) / rooms_y);

    for (int wc : wall_cols) {
        for (int r = 0; r < height; ++r) grid.set_truth({r, wc}, CellState::Occupied);
    }
    for (int wr : wall_rows) {
        for (int c = 0; c < width; ++c) grid.set_truth({wr, c}, CellState::Occupied);
    }

    auto punch_door = [&](bool vertical_wall, int wall_line, int seg_lo, int seg_hi) {
        // [seg_lo, seg_hi] is the open span of the wall segment between
        // crossing walls; carve door_cells consecutive cells at a seeded spot.
        const int usable = seg_hi - seg_lo + 1 - door_cells;
        if (usable < 0) return;
        const int at = seg_lo + rng.uniform_int(0, usable);
        for (int k = 0; k < door_cells; ++k) {
            Cell c = vertical_wall ? Cell{at + k, wall_line} : Cell{wall_line, at + k};
            grid.set_truth(c, CellState::Free);
        }
    };

    // One door per shared wall segment between each pair of adjacent rooms:
    // the room lattice stays fully connected.
    std::vector<int> col_bounds{0};
    for (int wc : wall_cols) col_bounds.push_back(wc);
    col_bounds.push_back(width - 1);
    std::vector<int> row_bounds{0};
    for (int wr : wall_rows) row_bounds.push_back(wr);
    row_bounds.push_back(height - 1);

    for (std::size_t wi = 0; wi < wall_cols.size(); ++wi) {
        for (std::size_t ri = 0; ri + 1 < row_bounds.size(); ++ri) {
            punch_door(true, wall_cols[wi], row_bounds[ri] + 1, row_bounds[ri + 1] - 1);
        }
    }
    for (std::size_t wi = 0; wi < wall_rows.size(); ++wi) {
        for (std::size_t ci = 0; ci + 1 < col_bounds.size(); ++ci) {
            punch_door(false, wall_rows[wi], col_bounds[ci] + 1, col_bounds[ci + 1] - 1);
        }
    }
    return grid;
}

OccupancyGrid make_maze(int width, int height, double resolution, int corridor_cells,
                        std::uint64_t seed) {
    if (corridor_cells < 1) throw std::invalid_argument("make_maze: corridor_cells < 1");
    const int unit = corridor_cells + 1;  // corridor + wall
    const int lat_w = std::max(1, (width - 1) / unit);
    const int lat_h = std::max(1, (height - 1) / unit);

    OccupancyGrid grid(width, height, resolution);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) grid.set_truth({r, c}, CellState::Occupied);
    }

    auto carve_node = [&](int lr, int lc) {
        for (int dr = 0; dr < corridor_cells; ++dr) {
            for (int dc = 0; dc < corridor_cells; ++dc) {
                Cell cell{1 + lr * unit + dr, 1 + lc * unit + dc};
                if (grid.in_bounds(cell)) grid.set_truth(cell, CellState::Free);
            }
        }
    };
    auto carve_link = [&](int lr, int lc, int nr, int nc) {
        const int r0 = 1 + std::min(lr, nr) * unit;
        const int c0 = 1 + std::min(lc, nc) * unit;
        const int rows = (lr == nr) ? corridor_cells : unit + corridor_cells;
        const int cols = (lc == nc) ? corridor_cells : unit + corridor_cells;
        for (int dr = 0; dr < rows; ++dr) {
            for (int dc = 0; dc < cols; ++dc) {
                Cell cell{r0 + dr, c0 + dc};
                if (grid.in_bounds(cell)) grid.set_truth(cell, CellState::Free);
            }
        }
    };

    // Iterative depth-first backtracker over the lattice.
    Rng rng(seed);
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(lat_w) * lat_h, 0);
    auto vid = [&](int r, int c) { return static_cast<std::size_t>(r) * lat_w + c; };
    std::vector<std::pair<int, int>> stack{{0, 0}};
    visited[0] = 1;
    carve_node(0, 0);
    const int drs[4] = {-1, 1, 0, 0};
    const int dcs[4] = {0, 0, -1, 1};
    while (!stack.empty()) {
        auto [r, c] = stack.back();
        int order[4] = {0, 1, 2, 3};
        for (int i = 3; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
        bool advanced = false;
        for (int k = 0; k < 4 && !advanced; ++k) {
            const int nr = r + drs[order[k]];
            const int nc = c + dcs[order[k]];
            if (nr < 0 || nr >= lat_h || nc < 0 || nc >= lat_w || visited[vid(nr, nc)]) continue;
            visited[vid(nr, nc)] = 1;
            carve_node(nr, nc);
            carve_link(r, c, nr, nc);
            stack.emplace_back(nr, nc);
            advanced = true;
        }
        if (!advanced) stack.pop_back();
    }
    return grid;
}

}  // namespace beasst
