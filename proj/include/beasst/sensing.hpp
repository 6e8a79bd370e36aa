#pragma once

#include <vector>

#include "beasst/grid.hpp"

namespace beasst {

// Reveal cells visible from `pose`: casts n_rays evenly spaced rays out
// to `range` meters, marking traversed cells from truth and stopping at
// the first occupied cell (which is also revealed). Returns the number
// of newly known cells. Idempotent for a repeated pose.
std::size_t raycast_sense(OccupancyGrid& grid, const Vec2& pose, double range, int n_rays);

// All frontier components: known-free cells 4-adjacent to unknown,
// grouped by 8-adjacency, in deterministic scan order.
std::vector<Frontier> extract_frontiers(const OccupancyGrid& grid);

bool is_frontier_cell(const OccupancyGrid& grid, const Cell& c);

}  // namespace beasst
