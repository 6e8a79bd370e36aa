#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "beasst/seeker.hpp"

using namespace beasst;

namespace {

SeekerParams test_params() {
    SeekerParams p;
    p.tau = 1e-6;
    return p;
}

LogNormalField bump_field() {
    return LogNormalField({60.0, 45.0}, 6.0, 1.5, 0.5, {{0.0, 0.0}, {120.0, 90.0}});
}

// Independent Shannon-gradient stepper: next = x + clip(gamma * (1/p) * grad p).
Vec2 shannon_step(const Vec2& x, const SignalField& f, const SeekerParams& params) {
    const double p = f.value(x);
    Vec2 step = field_gradient(f, x, params.fd_step) * (params.gamma / p);
    const double n = step.norm();
    if (n > params.max_step) step = step * (params.max_step / n);
    Vec2 next = x + step;
    const Rect b = f.bounds();
    next.x = std::clamp(next.x, b.lo.x, b.hi.x);
    next.y = std::clamp(next.y, b.lo.y, b.hi.y);
    return next;
}

}  // namespace

TEST_CASE("SeekerParams validation") {
    SeekerParams p;
    CHECK_NOTHROW(p.validate());
    p.alpha_min = 3.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SeekerParams{};
    p.tau = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("adaptive_alpha midpoint, limits, and default range") {
    SeekerParams p;
    CHECK(adaptive_alpha(Probability(p.rho_p0), p) ==
          doctest::Approx((p.alpha_max + p.alpha_min) / 2.0).epsilon(1e-12));
    SeekerParams steep = p;
    steep.rho_k = 200.0;
    CHECK(adaptive_alpha(Probability(1e-9), steep) ==
          doctest::Approx(p.alpha_max).epsilon(1e-9));
    CHECK(adaptive_alpha(Probability(1.0), steep) ==
          doctest::Approx(p.alpha_min).epsilon(1e-9));
    for (int i = 0; i <= 100; ++i) {
        const double a = adaptive_alpha(Probability(0.01 * i), p);
        CHECK(a >= p.alpha_min);
        CHECK(a <= p.alpha_max);
    }
}

TEST_CASE("adaptive_alpha is nonincreasing over a 1000-point sweep") {
    SeekerParams p;
    double prev = adaptive_alpha(Probability(1e-9), p);
    for (int i = 1; i <= 1000; ++i) {
        const double a = adaptive_alpha(Probability(static_cast<double>(i) / 1000.0), p);
        CHECK(a <= prev + 1e-15);
        prev = a;
    }
}

TEST_CASE("disturbance vectors respect the bound") {
    for (auto kind : {DisturbanceModel::Kind::UniformBall, DisturbanceModel::Kind::FixedDirection}) {
        DisturbanceModel d(kind, 0.37, 99);
        for (int i = 0; i < 200; ++i) CHECK(d.draw().norm() <= 0.37 + 1e-12);
    }
    DisturbanceModel none(DisturbanceModel::Kind::None, 1.0, 7);
    CHECK(none.draw().norm() == 0.0);
}

TEST_CASE("behavioral_step at the source is an equilibrium") {
    auto grid = std::make_shared<OccupancyGrid>(41, 41, 1.0);
    ExpDecayField field(0.1, {grid->cell_center({20, 20})}, grid);
    SeekerParams params = test_params();
    DisturbanceModel none;
    for (double alpha : {1.0, 2.0, 2.5}) {
        auto rec = behavioral_step(field.peak(), field, params, AlphaPolicy::fixed(alpha),
                                   none, grid.get());
        CHECK(!rec.signal_lost);
        CHECK(rec.step_norm <= grid->resolution());
    }
    // alpha < 1 at the exact peak: saturated scale, zeroed step.
    auto rec = behavioral_step(field.peak(), field, params, AlphaPolicy::fixed(0.5), none,
                               grid.get());
    CHECK(rec.saturated);
    CHECK(rec.step_norm == 0.0);
}

TEST_CASE("behavioral_step with alpha=beta=1 equals the independent Shannon step") {
    LogNormalField field = bump_field();
    SeekerParams params = test_params();
    DisturbanceModel none;
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const Vec2 x{rng.uniform(5.0, 115.0), rng.uniform(5.0, 85.0)};
        auto rec = behavioral_step(x, field, params, AlphaPolicy::fixed(1.0, 1.0), none);
        const Vec2 want = shannon_step(x, field, params);
        CHECK(std::fabs(rec.position.x - want.x) <= 1e-12);
        CHECK(std::fabs(rec.position.y - want.y) <= 1e-12);
    }
}

TEST_CASE("pipeline scaled gradient matches the 1-D closed form") {
    // p = exp(-kappa |x - xs|) along a free strip; at kappa|x-xs| = 2 and
    // alpha = 2 the scaled slope is beta*alpha*kappa*(kappa d)^(alpha-1)
    // toward the source.
    auto grid = std::make_shared<OccupancyGrid>(45, 3, 1.0);
    const Vec2 src = grid->cell_center({1, 2});
    ExpDecayField field(0.1, {src}, grid);
    const Vec2 x = grid->cell_center({1, 22});  // 20 m right of the source

    const double p = field.value(x);
    const auto scale = log_weight_gradient_scale(Probability(p), PrelecParams(2.0, 1.0));
    REQUIRE(!scale.saturated);
    const Vec2 grad = field_gradient(field, x, 1.0);
    const double pipeline = scale.value * grad.x;
    const double closed_form = -1.0 * 2.0 * 0.1 * std::pow(0.1 * 20.0, 1.0);
    CHECK(pipeline == doctest::Approx(closed_form).epsilon(1e-4));
    CHECK(std::fabs(grad.y) < 1e-12);
}

TEST_CASE("signal lost below the probability floor") {
    auto grid = std::make_shared<OccupancyGrid>(11, 11, 1.0);
    for (int r = 0; r < 11; ++r) grid->set_truth({r, 5}, CellState::Occupied);
    ExpDecayField field(0.1, {grid->cell_center({5, 2})}, grid);
    SeekerParams params = test_params();
    DisturbanceModel none;
    auto rec = behavioral_step(grid->cell_center({5, 8}), field, params,
                               AlphaPolicy::adaptive(), none, grid.get());
    CHECK(rec.signal_lost);
    CHECK(rec.position.x == grid->cell_center({5, 8}).x);
}

TEST_CASE("steps never cross walls") {
    auto grid = std::make_shared<OccupancyGrid>(31, 31, 1.0);
    for (int r = 5; r < 26; ++r) grid->set_truth({r, 15}, CellState::Occupied);
    // Source on the far side of the wall; path-loss ignores walls in its
    // distance term, so the gradient points straight at the wall.
    PathLossField::Params pl;
    pl.n_exp = 2.0;
    PathLossField field(pl, grid->cell_center({15, 20}), grid);
    SeekerParams params = test_params();
    params.gamma = 50.0;  // force a large desired step
    DisturbanceModel none;
    const Vec2 x = grid->cell_center({15, 12});
    auto rec = behavioral_step(x, field, params, AlphaPolicy::fixed(1.0), none, grid.get());
    CHECK(rec.projected);
    // Never teleports past the wall.
    CHECK(rec.position.x < 15.0);
}

TEST_CASE("seek_trajectory from the source converges in zero steps") {
    LogNormalField field = bump_field();
    SeekerParams params = test_params();
    auto trace = seek_trajectory(field.peak(), field, params, AlphaPolicy::adaptive(),
                                 DisturbanceModel{}, 100);
    CHECK(trace.converged);
    CHECK(trace.steps == 0);
    CHECK(trace.positions.size() == 1);
}

TEST_CASE("log-normal field: near and far starts converge; adaptive beats fixed(1,1) far") {
    LogNormalField field = bump_field();
    SeekerParams params = test_params();
    const Vec2 near{70.0, 52.0};
    const Vec2 far{5.0, 5.0};

    for (const Vec2& start : {near, far}) {
        auto adaptive = seek_trajectory(start, field, params, AlphaPolicy::adaptive(),
                                        DisturbanceModel{}, 20'000);
        auto shannon = seek_trajectory(start, field, params, AlphaPolicy::fixed(1.0, 1.0),
                                       DisturbanceModel{}, 20'000);
        CHECK(adaptive.converged);
        CHECK(shannon.converged);
        if (start.x == far.x) {
            CHECK(adaptive.steps < shannon.steps);
        }
    }
}

TEST_CASE("Lyapunov non-increase holds on almost all steps for fixed alpha") {
    auto grid = std::make_shared<OccupancyGrid>(61, 61, 1.0);
    ExpDecayField field(0.1, {grid->cell_center({30, 28})}, grid);
    SeekerParams params = test_params();
    Rng rng(8);
    for (double alpha : {0.5, 1.0, 2.0}) {
        std::size_t total = 0, violations = 0;
        for (int run = 0; run < 10; ++run) {
            const Vec2 start{rng.uniform(2.0, 59.0), rng.uniform(2.0, 59.0)};
            auto trace = seek_trajectory(start, field, params, AlphaPolicy::fixed(alpha),
                                         DisturbanceModel{}, 5'000, grid.get());
            CHECK(trace.converged);
            for (std::size_t i = 1; i < trace.lyapunov_values.size(); ++i) {
                ++total;
                if (trace.lyapunov_values[i] > trace.lyapunov_values[i - 1] + 1e-9) {
                    ++violations;
                }
            }
        }
        REQUIRE(total > 0);
        CHECK(static_cast<double>(violations) <= 0.01 * static_cast<double>(total));
    }
}

TEST_CASE("fixed(1,1) trajectory is pointwise identical to the Shannon stepper") {
    LogNormalField field = bump_field();
    SeekerParams params = test_params();
    const Vec2 start{20.0, 15.0};
    auto trace = seek_trajectory(start, field, params, AlphaPolicy::fixed(1.0, 1.0),
                                 DisturbanceModel{}, 10'000);
    REQUIRE(trace.converged);

    Vec2 x = start;
    for (std::size_t i = 1; i < trace.positions.size(); ++i) {
        x = shannon_step(x, field, params);
        CHECK(std::fabs(trace.positions[i].x - x.x) <= 1e-12);
        CHECK(std::fabs(trace.positions[i].y - x.y) <= 1e-12);
    }
}

TEST_CASE("equilibria coincide with the peak on obstacle-free unimodal fields") {
    auto grid = std::make_shared<OccupancyGrid>(41, 41, 1.0);
    ExpDecayField field(0.1, {grid->cell_center({20, 19})}, grid);
    SeekerParams params = test_params();
    DisturbanceModel none;
    for (double alpha : {0.5, 1.0, 2.0}) {
        for (int r = 0; r < grid->height(); ++r) {
            for (int c = 0; c < grid->width(); ++c) {
                const Vec2 x = grid->cell_center({r, c});
                auto rec = behavioral_step(x, field, params, AlphaPolicy::fixed(alpha),
                                           none, grid.get());
                if (rec.step_norm < 1e-6 * params.gamma) {
                    CHECK(distance(x, field.peak()) <= params.eps_converge);
                }
            }
        }
    }
}

TEST_CASE("terminal distance grows with the disturbance bound") {
    LogNormalField field = bump_field();
    SeekerParams params = test_params();
    const Vec2 start{35.0, 30.0};
    const double levels[3] = {0.0, 0.05, 0.1};
    double mean_dist[3] = {0.0, 0.0, 0.0};
    const int runs = 20;
    const std::size_t n_steps = 1500;
    for (int li = 0; li < 3; ++li) {
        for (int run = 0; run < runs; ++run) {
            DisturbanceModel d(DisturbanceModel::Kind::UniformBall,
                               levels[li] * params.max_step, 1000 + run);
            auto trace = seek_trajectory(start, field, params, AlphaPolicy::adaptive(), d,
                                         n_steps, nullptr, /*halt_on_arrival=*/false);
            mean_dist[li] += distance(trace.positions.back(), field.peak()) / runs;
            if (levels[li] == 0.0) CHECK(trace.converged);
        }
    }
    CHECK(mean_dist[0] <= mean_dist[1] + 1e-9);
    CHECK(mean_dist[1] <= mean_dist[2] + 1e-9);
}

TEST_CASE("seek trace CSV shape") {
    LogNormalField field = bump_field();
    SeekerParams params = test_params();
    auto trace = seek_trajectory({40.0, 40.0}, field, params, AlphaPolicy::adaptive(),
                                 DisturbanceModel{}, 500);
    std::ostringstream out;
    write_seek_trace_csv(out, trace);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "step,x,y,p,alpha,V,step_norm");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == trace.positions.size());
}
