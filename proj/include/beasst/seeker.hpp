#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "beasst/entropy.hpp"
#include "beasst/geometry.hpp"
#include "beasst/grid.hpp"
#include "beasst/rng.hpp"
#include "beasst/signal_field.hpp"

namespace beasst {

struct SeekerParams {
    double alpha_min = 0.5;
    double alpha_max = 2.5;
    double rho_k = 10.0;     // logistic steepness of the tuner
    double rho_p0 = 0.5;     // logistic midpoint
    double gamma = 1.0;      // step size, m per unit of log-weight gradient
    double tau = 0.05;       // detection threshold on normalized strength
    double max_step = 5.0;   // m, clip on the control step
    double eps_converge = 1.5;  // m, arrival ball around the field peak
    double beta = 1.0;       // uniform weighting scale; accepted, never adapted
    double fd_step = 1.0;    // m, finite-difference stencil when sampling gradients

    void validate() const;
};

// alpha source for a step: the logistic tuner, or a fixed (alpha, beta).
struct AlphaPolicy {
    enum class Mode { Adaptive, Fixed };
    Mode mode = Mode::Adaptive;
    double alpha = 1.0;
    double beta = 1.0;

    static AlphaPolicy adaptive() { return {Mode::Adaptive, 0.0, 1.0}; }
    static AlphaPolicy fixed(double alpha, double beta = 1.0) {
        return {Mode::Fixed, alpha, beta};
    }
};

// Bounded additive step disturbance; every emitted vector has norm at
// most omega_bar.
class DisturbanceModel {
public:
    enum class Kind { None, UniformBall, FixedDirection };

    DisturbanceModel() : rng_(0) {}
    DisturbanceModel(Kind kind, double omega_bar, std::uint64_t seed);

    Vec2 draw();
    double omega_bar() const { return omega_bar_; }
    Kind kind() const { return kind_; }

private:
    Kind kind_ = Kind::None;
    double omega_bar_ = 0.0;
    Rng rng_;
    Vec2 fixed_dir_{1.0, 0.0};
};

// Logistic tuner: alpha_t = alpha_max - (alpha_max - alpha_min) * rho(p),
// rho(p) = 1 / (1 + exp(-rho_k (p - rho_p0))). Nonincreasing in p:
// aggressive (large alpha) in weak signal, cautious near the source.
double adaptive_alpha(Probability p, const SeekerParams& params);

struct StepRecord {
    Vec2 position;           // pose after the step
    double p = 0.0;          // normalized strength at the starting pose
    double alpha = 1.0;      // alpha used for this step
    double lyapunov = 0.0;   // V = beta * (-log p)^alpha at the starting pose
    double step_norm = 0.0;
    bool signal_lost = false;
    bool saturated = false;  // gradient scale hit the cap
    bool projected = false;  // obstacle or bounds shortened the step
};

// One control update: next = x + clip(gamma * scale * grad p) + omega,
// with scale the log-weight gradient factor and grad p analytic when the
// field provides it. The motion segment stops at the first occupied cell
// when a grid is given, and the landing point is projected to the nearest
// free cell if needed. A reading at the probability floor reports
// signal_lost instead of moving.
StepRecord behavioral_step(const Vec2& x, const SignalField& field,
                           const SeekerParams& params, const AlphaPolicy& policy,
                           DisturbanceModel& disturbance,
                           const OccupancyGrid* grid = nullptr);

struct SeekTrace {
    std::vector<Vec2> positions;       // steps + 1 entries, start first
    std::vector<double> p_values;      // per position
    std::vector<double> alpha_values;  // per position
    std::vector<double> lyapunov_values;
    std::vector<double> step_norms;    // per transition (steps entries)
    bool converged = false;
    bool signal_lost = false;
    std::size_t steps = 0;
};

// Iterate behavioral_step until within eps_converge of the field peak or
// max_steps. Budget exhaustion returns converged = false with the full
// trace. halt_on_arrival = false keeps stepping after first arrival
// (used to measure stationary containment under disturbances).
SeekTrace seek_trajectory(const Vec2& start, const SignalField& field,
                          const SeekerParams& params, const AlphaPolicy& policy,
                          DisturbanceModel disturbance, std::size_t max_steps,
                          const OccupancyGrid* grid = nullptr,
                          bool halt_on_arrival = true);

// CSV with header step,x,y,p,alpha,V,step_norm.
void write_seek_trace_csv(std::ostream& out, const SeekTrace& trace);

}  // namespace beasst
