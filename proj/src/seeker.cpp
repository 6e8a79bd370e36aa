#include "beasst/seeker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beasst {

void SeekerParams::validate() const {
    if (!(alpha_min > 0.0) || !(alpha_max > 0.0) || alpha_min > alpha_max) {
        throw std::invalid_argument("SeekerParams: need 0 < alpha_min <= alpha_max");
    }
    if (!(rho_k > 0.0)) throw std::invalid_argument("SeekerParams: rho_k must be positive");
    if (!(rho_p0 > 0.0) || !(rho_p0 < 1.0)) {
        throw std::invalid_argument("SeekerParams: rho_p0 must lie in (0, 1)");
    }
    if (!(gamma > 0.0)) throw std::invalid_argument("SeekerParams: gamma must be positive");
    if (!(tau > 0.0) || !(tau < 1.0)) {
        throw std::invalid_argument("SeekerParams: tau must lie in (0, 1)");
    }
    if (!(max_step > 0.0) || !(eps_converge > 0.0) || !(fd_step > 0.0)) {
        throw std::invalid_argument("SeekerParams: step sizes must be positive");
    }
    if (!(beta > 0.0)) throw std::invalid_argument("SeekerParams: beta must be positive");
}

DisturbanceModel::DisturbanceModel(Kind kind, double omega_bar, std::uint64_t seed)
    : kind_(kind), omega_bar_(omega_bar), rng_(substream_seed(seed, "disturbance")) {
    if (omega_bar_ < 0.0) throw std::invalid_argument("DisturbanceModel: omega_bar < 0");
    if (kind_ == Kind::FixedDirection) {
        const double angle = rng_.uniform(0.0, 2.0 * M_PI);
        fixed_dir_ = {std::cos(angle), std::sin(angle)};
    }
}

Vec2 DisturbanceModel::draw() {
    switch (kind_) {
        case Kind::None: return {0.0, 0.0};
        case Kind::UniformBall: return rng_.in_unit_disk() * omega_bar_;
        case Kind::FixedDirection: return fixed_dir_ * omega_bar_;
    }
    return {0.0, 0.0};
}

double adaptive_alpha(Probability p, const SeekerParams& params) {
    const double rho = 1.0 / (1.0 + std::exp(-params.rho_k * (p.value() - params.rho_p0)));
    return params.alpha_max - (params.alpha_max - params.alpha_min) * rho;
}

namespace {

// March along the segment x -> desired and stop before the first
// truth-occupied cell. Sampling step is a quarter cell.
Vec2 clip_to_free_segment(const Vec2& x, const Vec2& desired, const OccupancyGrid& grid,
                          bool* projected) {
    const Vec2 delta = desired - x;
    const double len = delta.norm();
    if (len < 1e-12) return desired;
    const double ds = grid.resolution() / 4.0;
    const int n = std::max(1, static_cast<int>(std::ceil(len / ds)));
    Vec2 last_free = x;
    for (int i = 1; i <= n; ++i) {
        const Vec2 p = x + delta * (static_cast<double>(i) / n);
        const Cell c = grid.world_to_cell(p);
        if (!grid.in_bounds(c) || grid.truth(c) == CellState::Occupied) {
            *projected = true;
            return last_free;
        }
        last_free = p;
    }
    return last_free;
}

Vec2 clamp_to_rect(const Vec2& p, const Rect& b, double margin, bool* projected) {
    Vec2 out{std::clamp(p.x, b.lo.x + margin, b.hi.x - margin),
             std::clamp(p.y, b.lo.y + margin, b.hi.y - margin)};
    if (out.x != p.x || out.y != p.y) *projected = true;
    return out;
}

}  // namespace

StepRecord behavioral_step(const Vec2& x, const SignalField& field,
                           const SeekerParams& params, const AlphaPolicy& policy,
                           DisturbanceModel& disturbance, const OccupancyGrid* grid) {
    StepRecord rec;
    rec.position = x;
    rec.p = field.value(x);
    if (rec.p <= kProbabilityFloor) {
        rec.signal_lost = true;
        return rec;
    }
    const Probability p(rec.p);
    rec.alpha = policy.mode == AlphaPolicy::Mode::Adaptive ? adaptive_alpha(p, params)
                                                           : policy.alpha;
    const double beta = policy.mode == AlphaPolicy::Mode::Adaptive ? params.beta : policy.beta;
    const PrelecParams prelec(rec.alpha, beta);
    rec.lyapunov = lyapunov_value(p, prelec);

    const ScaleResult scale = log_weight_gradient_scale(p, prelec);
    rec.saturated = scale.saturated;

    Vec2 control{0.0, 0.0};
    // At the peak itself (p = 1) a saturated scale multiplies a vanishing
    // gradient; the step is zeroed rather than amplifying noise.
    if (!(scale.saturated && rec.p >= 1.0)) {
        const Vec2 grad = field_gradient(field, x, params.fd_step);
        control = grad * (params.gamma * scale.value);
        const double norm = control.norm();
        if (norm > params.max_step) control = control * (params.max_step / norm);
    }

    Vec2 desired = x + control + disturbance.draw();
    const double margin = grid ? grid->resolution() * 1e-6 : 0.0;
    desired = clamp_to_rect(desired, field.bounds(), margin, &rec.projected);

    if (grid) {
        Vec2 landed = clip_to_free_segment(x, desired, *grid, &rec.projected);
        const Cell lc = grid->world_to_cell(landed);
        if (!grid->truth_free(lc)) {
            const auto free_cell = grid->nearest_free_cell(lc, desired);
            if (free_cell) {
                landed = grid->cell_center(*free_cell);
                rec.projected = true;
            } else {
                landed = x;
            }
        }
        rec.position = landed;
    } else {
        rec.position = desired;
    }
    rec.step_norm = (rec.position - x).norm();
    return rec;
}

SeekTrace seek_trajectory(const Vec2& start, const SignalField& field,
                          const SeekerParams& params, const AlphaPolicy& policy,
                          DisturbanceModel disturbance, std::size_t max_steps,
                          const OccupancyGrid* grid, bool halt_on_arrival) {
    params.validate();
    SeekTrace trace;
    Vec2 x = start;
    const Vec2 goal = field.peak();

    auto record_state = [&](const Vec2& pos) {
        const double pv = field.value(pos);
        const Probability p(pv);
        const double alpha = policy.mode == AlphaPolicy::Mode::Adaptive
                                 ? adaptive_alpha(p, params)
                                 : policy.alpha;
        const double beta =
            policy.mode == AlphaPolicy::Mode::Adaptive ? params.beta : policy.beta;
        trace.positions.push_back(pos);
        trace.p_values.push_back(pv);
        trace.alpha_values.push_back(alpha);
        trace.lyapunov_values.push_back(lyapunov_value(p, PrelecParams(alpha, beta)));
    };

    record_state(x);
    if (distance(x, goal) <= params.eps_converge) trace.converged = true;

    while (trace.steps < max_steps) {
        if (halt_on_arrival && trace.converged) break;
        StepRecord rec = behavioral_step(x, field, params, policy, disturbance, grid);
        if (rec.signal_lost) {
            trace.signal_lost = true;
            break;
        }
        x = rec.position;
        ++trace.steps;
        trace.step_norms.push_back(rec.step_norm);
        record_state(x);
        if (distance(x, goal) <= params.eps_converge) trace.converged = true;
    }
    return trace;
}

void write_seek_trace_csv(std::ostream& out, const SeekTrace& trace) {
    out << "step,x,y,p,alpha,V,step_norm\n";
    out.precision(12);
    for (std::size_t i = 0; i < trace.positions.size(); ++i) {
        const double step_norm = i < trace.step_norms.size() ? trace.step_norms[i] : 0.0;
        out << i << ',' << trace.positions[i].x << ',' << trace.positions[i].y << ','
            << trace.p_values[i] << ',' << trace.alpha_values[i] << ','
            << trace.lyapunov_values[i] << ',' << step_norm << '\n';
    }
}

}  // namespace beasst
