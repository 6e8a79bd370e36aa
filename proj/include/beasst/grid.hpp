#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beasst/geometry.hpp"
#include "beasst/rng.hpp"

namespace beasst {

enum class CellState : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

// Discretized 2-D world. `truth` is ground truth {Free, Occupied};
// `known` is what raycast sensing has revealed so far and never
// contradicts truth. Cell (row, col) has its center at
// ((col + 0.5) * res, (row + 0.5) * res); row 0 is the first map line.
class OccupancyGrid {
public:
    OccupancyGrid(int width, int height, double resolution);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return res_; }
    std::size_t cell_count() const { return truth_.size(); }

    bool in_bounds(const Cell& c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    bool in_world_bounds(const Vec2& p) const {
        return p.x >= 0.0 && p.x < width_ * res_ && p.y >= 0.0 && p.y < height_ * res_;
    }

    Cell world_to_cell(const Vec2& p) const {
        return {static_cast<int>(p.y / res_), static_cast<int>(p.x / res_)};
    }
    Vec2 cell_center(const Cell& c) const {
        return {(c.col + 0.5) * res_, (c.row + 0.5) * res_};
    }

    CellState truth(const Cell& c) const { return truth_[index(c)]; }
    CellState known(const Cell& c) const { return known_[index(c)]; }
    bool truth_free(const Cell& c) const { return in_bounds(c) && truth(c) == CellState::Free; }
    bool known_free(const Cell& c) const { return in_bounds(c) && known(c) == CellState::Free; }

    void set_truth(const Cell& c, CellState s) { truth_[index(c)] = s; }

    // Reveal a cell from its truth value. No-op if already known;
    // returns true when the cell was newly revealed.
    bool reveal(const Cell& c);

    std::size_t known_count() const { return known_cells_; }
    void reveal_all();

    // Nearest truth-free cell to `c` by expanding ring search, preferring
    // the candidate whose center is closest to `target`; deterministic
    // tie-break by (row, col). Empty when no free cell exists.
    std::optional<Cell> nearest_free_cell(const Cell& c, const Vec2& target) const;
    std::optional<Cell> nearest_known_free_cell(const Cell& c, const Vec2& target) const;

private:
    std::size_t index(const Cell& c) const {
        return static_cast<std::size_t>(c.row) * width_ + c.col;
    }

    int width_;
    int height_;
    double res_;
    std::vector<CellState> truth_;
    std::vector<CellState> known_;
    std::size_t known_cells_ = 0;
};

// Connected set of frontier cells: known-free cells 4-adjacent to at
// least one unknown cell. Components are joined under 8-adjacency.
struct Frontier {
    std::vector<Cell> cells;
    Vec2 centroid;
};

// --- Map file format -------------------------------------------------------
//
// Header line "W H RES" followed by H rows of W characters, '.' free and
// '#' occupied. Row 0 of the grid is the first map line.

OccupancyGrid load_map(const std::string& path);
OccupancyGrid parse_map(const std::string& text);
std::string serialize_map(const OccupancyGrid& grid);

// --- Generators -------------------------------------------------------------

// Open rectangle with a 1-cell occupied border.
OccupancyGrid make_arena(int width, int height, double resolution);

// rooms_x * rooms_y rooms separated by 1-cell walls, one door of
// `door_cells` width per shared wall segment at a seeded position.
OccupancyGrid make_rooms(int width, int height, double resolution, int rooms_x,
                         int rooms_y, int door_cells, std::uint64_t seed);

// Depth-first maze carved on a coarse lattice with corridors
// `corridor_cells` wide.
OccupancyGrid make_maze(int width, int height, double resolution, int corridor_cells,
                        std::uint64_t seed);

}  // namespace beasst
