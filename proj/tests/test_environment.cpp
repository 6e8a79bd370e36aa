#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "beasst/grid.hpp"
#include "beasst/planner.hpp"
#include "beasst/rng.hpp"
#include "beasst/sensing.hpp"

using namespace beasst;

namespace {

// Brute-force oracle: repeated relaxation over all 8-neighbor edges until
// a fixed point. O(V^2 * E) and obviously correct.
std::vector<double> brute_force_distances(const OccupancyGrid& g, const Cell& src) {
    const double res = g.resolution();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(g.cell_count(), inf);
    auto idx = [&](int r, int c) { return static_cast<std::size_t>(r) * g.width() + c; };
    d[idx(src.row, src.col)] = 0.0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < g.height(); ++r) {
            for (int c = 0; c < g.width(); ++c) {
                if (!g.truth_free({r, c}) || !std::isfinite(d[idx(r, c)])) continue;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        if (!g.truth_free({r + dr, c + dc})) continue;
                        const double w = (dr != 0 && dc != 0) ? res * std::sqrt(2.0) : res;
                        if (d[idx(r, c)] + w < d[idx(r + dr, c + dc)] - 1e-12) {
                            d[idx(r + dr, c + dc)] = d[idx(r, c)] + w;
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    return d;
}

OccupancyGrid bisected_grid() {
    // 9x9 arena-free grid with a vertical wall at col 4, one gap at row 7.
    OccupancyGrid g(9, 9, 1.0);
    for (int r = 0; r < 9; ++r) {
        if (r != 7) g.set_truth({r, 4}, CellState::Occupied);
    }
    return g;
}

}  // namespace

TEST_CASE("grid map round-trip") {
    OccupancyGrid g = make_rooms(21, 17, 0.5, 2, 2, 2, 99);
    const std::string text = serialize_map(g);
    OccupancyGrid back = parse_map(text);
    CHECK(back.width() == g.width());
    CHECK(back.height() == g.height());
    CHECK(back.resolution() == g.resolution());
    CHECK(serialize_map(back) == text);
}

TEST_CASE("map parse errors") {
    CHECK_THROWS(parse_map("not a header"));
    CHECK_THROWS(parse_map("3 3 1.0\n..\n...\n...\n"));
    CHECK_THROWS(parse_map("2 2 1.0\n.x\n..\n"));
}

TEST_CASE("dijkstra on empty grid matches straight-line and diagonal costs") {
    OccupancyGrid g(5, 5, 1.0);
    auto map = dijkstra_distance_map(g, g.cell_center({0, 0}));
    CHECK(map.at({0, 3}) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(map.at({2, 2}) == doctest::Approx(2.8284271247461901).epsilon(1e-12));
}

TEST_CASE("dijkstra agrees with brute-force relaxation oracle") {
    OccupancyGrid g = bisected_grid();
    auto map = dijkstra_distance_map(g, g.cell_center({1, 1}));
    auto oracle = brute_force_distances(g, {1, 1});
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
            const double got = map.at({r, c});
            const double want = oracle[static_cast<std::size_t>(r) * g.width() + c];
            if (std::isfinite(want)) {
                CHECK(got == doctest::Approx(want).epsilon(1e-12));
            } else {
                CHECK(!std::isfinite(got));
            }
        }
    }
    // Detour through the gap is strictly longer than Euclidean.
    const Vec2 a = g.cell_center({1, 1});
    const Vec2 b = g.cell_center({1, 7});
    CHECK(map.at({1, 7}) > distance(a, b) + 1.0);
}

TEST_CASE("dijkstra rejects a source on an occupied cell") {
    OccupancyGrid g = bisected_grid();
    CHECK_THROWS_AS(dijkstra_distance_map(g, g.cell_center({0, 4})), std::invalid_argument);
}

TEST_CASE("distance symmetry on random free pairs") {
    OccupancyGrid g = make_rooms(25, 25, 1.0, 2, 2, 2, 7);
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        Cell a{rng.uniform_int(0, 24), rng.uniform_int(0, 24)};
        Cell b{rng.uniform_int(0, 24), rng.uniform_int(0, 24)};
        if (!g.truth_free(a) || !g.truth_free(b)) continue;
        auto da = dijkstra_distance_map(g, g.cell_center(a));
        auto db = dijkstra_distance_map(g, g.cell_center(b));
        if (std::isfinite(da.at(b))) {
            CHECK(da.at(b) == doctest::Approx(db.at(a)).epsilon(1e-9));
        }
    }
}

TEST_CASE("a_star start equals goal") {
    OccupancyGrid g(5, 5, 1.0);
    g.reveal_all();
    auto p = a_star_path(g, g.cell_center({2, 2}), g.cell_center({2, 2}));
    REQUIRE(p.has_value());
    CHECK(p->points.size() == 1);
    CHECK(p->cost == 0.0);
}

TEST_CASE("a_star straight corridor is the diagonal/straight optimum") {
    OccupancyGrid g(8, 3, 1.0);
    g.reveal_all();
    auto p = a_star_path(g, g.cell_center({1, 0}), g.cell_center({1, 7}));
    REQUIRE(p.has_value());
    CHECK(p->cost == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(p->points.front().x == doctest::Approx(0.5));
    CHECK(p->points.back().x == doctest::Approx(7.5));
}

TEST_CASE("a_star cost equals dijkstra distance on random solvable instances") {
    Rng rng(21);
    int solved = 0;
    while (solved < 50) {
        OccupancyGrid g = make_rooms(20, 20, 1.0,
                                     rng.uniform_int(1, 3), rng.uniform_int(1, 3), 1,
                                     rng.uniform_int(0, 1 << 20));
        g.reveal_all();
        Cell a{rng.uniform_int(0, 19), rng.uniform_int(0, 19)};
        Cell b{rng.uniform_int(0, 19), rng.uniform_int(0, 19)};
        if (!g.truth_free(a) || !g.truth_free(b)) continue;
        auto dm = dijkstra_distance_map(g, g.cell_center(a));
        auto path = a_star_path(g, g.cell_center(a), g.cell_center(b));
        if (!std::isfinite(dm.at(b))) {
            CHECK(!path.has_value());
            continue;
        }
        REQUIRE(path.has_value());
        CHECK(path->cost == doctest::Approx(dm.at(b)).epsilon(1e-9));
        ++solved;
    }
}

TEST_CASE("a_star reports unreachable goals") {
    OccupancyGrid g = bisected_grid();
    g.reveal_all();
    // Block the single gap.
    g.set_truth({7, 4}, CellState::Occupied);
    g.reveal_all();
    auto p = a_star_path(g, g.cell_center({1, 1}), g.cell_center({1, 7}));
    CHECK(!p.has_value());
}

TEST_CASE("raycast reveals the whole empty grid from open space") {
    OccupancyGrid g(20, 20, 1.0);
    const std::size_t n = raycast_sense(g, g.cell_center({10, 10}), 100.0, 720);
    CHECK(n == g.cell_count());
    CHECK(g.known_count() == g.cell_count());

    // Idempotence: second identical call reveals nothing.
    CHECK(raycast_sense(g, g.cell_center({10, 10}), 100.0, 720) == 0);
}

TEST_CASE("raycast occlusion keeps cells behind a wall unknown") {
    OccupancyGrid g(15, 15, 1.0);
    for (int r = 0; r < 15; ++r) g.set_truth({r, 7}, CellState::Occupied);
    raycast_sense(g, g.cell_center({7, 3}), 100.0, 720);
    // Wall cells facing the sensor become known-occupied...
    CHECK(g.known({7, 7}) == CellState::Occupied);
    // ...but everything beyond stays unknown.
    for (int r = 0; r < 15; ++r) {
        for (int c = 8; c < 15; ++c) {
            CHECK(g.known({r, c}) == CellState::Unknown);
        }
    }
}

TEST_CASE("knowledge is monotone nondecreasing") {
    OccupancyGrid g = make_rooms(25, 25, 1.0, 2, 2, 2, 3);
    Rng rng(9);
    std::size_t prev = 0;
    for (int i = 0; i < 30; ++i) {
        Vec2 pose = g.cell_center({rng.uniform_int(1, 23), rng.uniform_int(1, 23)});
        if (!g.truth_free(g.world_to_cell(pose))) continue;
        raycast_sense(g, pose, rng.uniform(2.0, 12.0), 180);
        CHECK(g.known_count() >= prev);
        prev = g.known_count();
    }
}

TEST_CASE("frontier extraction matches the exhaustive cell scan") {
    OccupancyGrid g = make_rooms(30, 30, 1.0, 2, 2, 2, 17);
    raycast_sense(g, g.cell_center({5, 5}), 9.0, 720);

    std::set<std::pair<int, int>> expected;
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
            if (is_frontier_cell(g, {r, c})) expected.insert({r, c});
        }
    }
    std::set<std::pair<int, int>> got;
    for (const auto& f : extract_frontiers(g)) {
        CHECK(!f.cells.empty());
        for (const auto& cell : f.cells) got.insert({cell.row, cell.col});
    }
    CHECK(got == expected);
}

TEST_CASE("fully known grid has no frontiers") {
    OccupancyGrid g(10, 10, 1.0);
    g.reveal_all();
    CHECK(extract_frontiers(g).empty());
}

TEST_CASE("half-revealed empty grid yields a single frontier component") {
    OccupancyGrid g(20, 20, 1.0);
    for (int r = 0; r < 20; ++r) {
        for (int c = 0; c < 10; ++c) g.reveal({r, c});
    }
    auto fs = extract_frontiers(g);
    REQUIRE(fs.size() == 1);
    for (const auto& cell : fs[0].cells) CHECK(cell.col == 9);
}

TEST_CASE("two rooms revealed through separate doors give two components") {
    // Corridor along the top, two rooms below, each with its own door.
    OccupancyGrid g(21, 12, 1.0);
    for (int c = 0; c < 21; ++c) g.set_truth({3, c}, CellState::Occupied);
    for (int r = 3; r < 12; ++r) g.set_truth({r, 10}, CellState::Occupied);
    g.set_truth({3, 4}, CellState::Free);    // door into the left room
    g.set_truth({3, 16}, CellState::Free);   // door into the right room
    // Reveal the corridor including its wall row, plus one cell inside
    // each room just past the doors.
    for (int r = 0; r <= 3; ++r) {
        for (int c = 0; c < 21; ++c) g.reveal({r, c});
    }
    g.reveal({4, 4});
    g.reveal({4, 16});

    auto fs = extract_frontiers(g);
    CHECK(fs.size() == 2);
}

TEST_CASE("generated maps are fully connected over free cells") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        OccupancyGrid rooms = make_rooms(33, 29, 1.0, 3, 2, 2, seed);
        OccupancyGrid maze = make_maze(31, 31, 1.0, 2, seed);
        for (OccupancyGrid* g : {&rooms, &maze}) {
            Cell first{-1, -1};
            for (int r = 0; r < g->height() && first.row < 0; ++r) {
                for (int c = 0; c < g->width(); ++c) {
                    if (g->truth_free({r, c})) {
                        first = {r, c};
                        break;
                    }
                }
            }
            REQUIRE(first.row >= 0);
            auto dm = dijkstra_distance_map(*g, g->cell_center(first));
            for (int r = 0; r < g->height(); ++r) {
                for (int c = 0; c < g->width(); ++c) {
                    if (g->truth_free({r, c})) {
                        CHECK(std::isfinite(dm.at({r, c})));
                    }
                }
            }
        }
    }
}

TEST_CASE("distance map interpolation is exact at centers and finite near walls") {
    OccupancyGrid g = bisected_grid();
    auto dm = dijkstra_distance_map(g, g.cell_center({1, 1}));
    CHECK(dm.interpolate(g.cell_center({5, 2})) ==
          doctest::Approx(dm.at({5, 2})).epsilon(1e-12));
    // Query right next to the wall stays finite on the free side.
    CHECK(std::isfinite(dm.interpolate({3.6, 2.5})));
}
