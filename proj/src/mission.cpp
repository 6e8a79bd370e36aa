#include "beasst/mission.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beasst/planner.hpp"
#include "beasst/sensing.hpp"

namespace beasst {

std::vector<double> sense_sources(const Vec2& pose,
                                  const std::vector<std::shared_ptr<SignalField>>& fields,
                                  const std::set<std::size_t>& found) {
    std::vector<double> readings(fields.size(), kProbabilityFloor);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (found.count(i)) continue;  // suppressed after UpdateSignalMap
        readings[i] = fields[i]->value(pose);
    }
    return readings;
}

Mission::Mission(MissionWorld world, MissionConfig config)
    : world_(std::move(world)),
      config_(std::move(config)),
      disturbance_(config_.disturbance_kind, config_.omega_bar,
                   substream_seed(config_.seed, "mission")),
      frontier_rng_(substream_seed(config_.seed, "frontier_random")) {
    config_.seeker.validate();
    if (world_.source_fields.empty()) {
        throw std::invalid_argument("Mission: no source fields configured");
    }
    const Cell start_cell = world_.grid->world_to_cell(world_.start);
    if (!world_.grid->truth_free(start_cell)) {
        throw std::invalid_argument("Mission: start is not on a free cell");
    }
    state_.pose = world_.start;
    for (const auto& f : world_.source_fields) source_locations_.push_back(f->peak());
    cooldown_until_.assign(world_.source_fields.size(), 0);

    // Initial sensing sweep so the first explore tick has frontiers.
    raycast_sense(*world_.grid, state_.pose, config_.sense_range, config_.n_rays);
}

std::vector<double> Mission::sense() const {
    return sense_sources(state_.pose, world_.source_fields, state_.found_sources);
}

bool Mission::source_in_cooldown(std::size_t id) const {
    return state_.tick < cooldown_until_[id];
}

void Mission::upsert_virtual_frontier(std::size_t id, const Vec2& point, double strength) {
    auto it = std::find_if(state_.virtual_frontiers.begin(), state_.virtual_frontiers.end(),
                           [&](const VirtualFrontier& v) { return v.source_id == id; });
    if (it == state_.virtual_frontiers.end()) {
        state_.virtual_frontiers.push_back({id, point, strength});
    } else if (strength > it->strength) {
        it->point = point;
        it->strength = strength;
    }
}

void Mission::engage_or_update_virtual_frontiers(const std::vector<double>& readings,
                                                 std::optional<std::size_t> pursued) {
    // Every detected-but-not-pursued source is parked (or refreshed) as a
    // virtual frontier at the pose where the reading was taken.
    for (std::size_t i = 0; i < readings.size(); ++i) {
        if (state_.found_sources.count(i)) continue;
        if (pursued && *pursued == i) continue;
        if (readings[i] <= config_.seeker.tau) continue;
        upsert_virtual_frontier(i, state_.pose, readings[i]);
    }
}

void Mission::arrive(std::size_t id) {
    state_.found_sources.insert(id);
    state_.s_detected = state_.found_sources.size();
    found_ticks_.push_back(state_.tick);
    std::erase_if(state_.virtual_frontiers,
                  [&](const VirtualFrontier& v) { return v.source_id == id; });
    state_.active_source.reset();
    state_.mode = MissionMode::Explore;
    current_path_.clear();
    stall_count_ = 0;
}

void Mission::move_to(const Vec2& next) {
    const Vec2 delta = next - state_.pose;
    const double norm = delta.norm();
    if (norm > 1e-12) {
        state_.heading = std::atan2(delta.y, delta.x);
        path_length_ += norm;
        state_.pose = next;
    }
}

std::string Mission::seek_step(const std::vector<double>& readings, TickRecord& rec) {
    const std::size_t id = *state_.active_source;
    const SignalField& field = *world_.source_fields[id];

    if (readings[id] <= config_.seeker.tau) {
        // Dropped below the detection threshold mid-seek: no gradient step,
        // park the last-seen spot and hand back to exploration.
        upsert_virtual_frontier(id, state_.pose, readings[id]);
        state_.active_source.reset();
        state_.mode = MissionMode::Explore;
        stall_count_ = 0;
        return "seek_abort_weak:" + std::to_string(id);
    }

    StepRecord step = behavioral_step(state_.pose, field, config_.seeker, config_.policy,
                                      disturbance_, world_.grid.get());
    rec.alpha = step.alpha;
    if (step.signal_lost) {
        // Reading fell to the floor mid-pursuit: hand back to exploration.
        state_.active_source.reset();
        state_.mode = MissionMode::Explore;
        stall_count_ = 0;
        return "seek_abort_lost:" + std::to_string(id);
    }
    const double moved = distance(step.position, state_.pose);
    move_to(step.position);

    if (distance(state_.pose, source_locations_[id]) <= config_.seeker.eps_converge) {
        arrive(id);
        return "arrive_source:" + std::to_string(id);
    }

    if (moved < config_.stall_min_progress) {
        if (++stall_count_ >= config_.stall_window) {
            // Wedged against geometry the gradient cannot see (common with
            // wall-blind path-loss readings). Park and cool down.
            engage_or_update_virtual_frontiers(readings, std::nullopt);
            cooldown_until_[id] = state_.tick + config_.seek_cooldown;
            state_.active_source.reset();
            state_.mode = MissionMode::Explore;
            stall_count_ = 0;
            current_path_.clear();
            return "seek_abort_stall:" + std::to_string(id);
        }
    } else {
        stall_count_ = 0;
    }
    return "seek_step:" + std::to_string(id);
}

bool Mission::replan_explore_target() {
    current_path_.clear();

    // Virtual frontiers outrank map frontiers until exhausted: strongest
    // recorded reading first.
    std::vector<std::size_t> vf_order(state_.virtual_frontiers.size());
    for (std::size_t i = 0; i < vf_order.size(); ++i) vf_order[i] = i;
    std::sort(vf_order.begin(), vf_order.end(), [&](std::size_t a, std::size_t b) {
        const auto& va = state_.virtual_frontiers[a];
        const auto& vb = state_.virtual_frontiers[b];
        if (va.strength != vb.strength) return va.strength > vb.strength;
        return va.source_id < vb.source_id;
    });
    for (std::size_t i : vf_order) {
        const VirtualFrontier& vf = state_.virtual_frontiers[i];
        if (source_in_cooldown(vf.source_id)) continue;
        const Cell target = world_.grid->world_to_cell(vf.point);
        const auto cell = world_.grid->nearest_known_free_cell(target, vf.point);
        if (!cell) continue;
        auto path = a_star_path(*world_.grid, state_.pose, world_.grid->cell_center(*cell));
        if (path) {
            current_path_.assign(path->points.begin() + (path->points.size() > 1 ? 1 : 0),
                                 path->points.end());
            return true;
        }
    }

    std::vector<Frontier> frontiers = extract_frontiers(*world_.grid);
    if (frontiers.empty()) return false;

    // GP model only for the strategies that need it.
    GPOccupancyModel model;
    const auto kind = config_.frontier.kind;
    if (kind == FrontierStrategy::Kind::GpUtility ||
        kind == FrontierStrategy::Kind::MeanShannonEntropy ||
        kind == FrontierStrategy::Kind::MeanBehavioralEntropy) {
        model = gp_fit(*world_.grid, config_.gp);
    }

    auto mean_entropy_pick = [&](bool behavioral) -> std::optional<std::size_t> {
        std::optional<std::size_t> best;
        double best_score = -1e300;
        for (std::size_t i = 0; i < frontiers.size(); ++i) {
            double score = 0.0;
            for (const Cell& c : frontiers[i].cells) {
                const double s2 = model.predict(world_.grid->cell_center(c)).sigma2;
                if (behavioral) {
                    // Prelec-weighted surprise of the normalized variance.
                    const Probability u(s2 / model.prior_variance());
                    const PrelecParams prelec(config_.frontier.alpha, 1.0);
                    const double w = prelec_weight(u, prelec);
                    score += w <= 0.0 ? 0.0 : -w * std::log(w);
                } else {
                    score += cell_entropy(s2);
                }
            }
            score /= static_cast<double>(frontiers[i].cells.size());
            const bool better =
                score > best_score + 1e-12 ||
                (std::fabs(score - best_score) <= 1e-12 && best &&
                 world_.grid->world_to_cell(frontiers[i].centroid) <
                     world_.grid->world_to_cell(frontiers[*best].centroid));
            if (!best || better) {
                best = i;
                best_score = score;
            }
        }
        return best;
    };

    // Rank candidates, then walk down the ranking until one is reachable.
    std::vector<Frontier> remaining = frontiers;
    while (!remaining.empty()) {
        std::optional<std::size_t> pick;
        switch (kind) {
            case FrontierStrategy::Kind::GpUtility:
                pick = select_frontier(model, remaining, *world_.grid, state_.pose,
                                       state_.heading, FrontierMode::GpUtility,
                                       config_.utility, frontier_rng_);
                break;
            case FrontierStrategy::Kind::Nearest:
                pick = select_frontier(model, remaining, *world_.grid, state_.pose,
                                       state_.heading, FrontierMode::Nearest,
                                       config_.utility, frontier_rng_);
                break;
            case FrontierStrategy::Kind::Random:
                pick = select_frontier(model, remaining, *world_.grid, state_.pose,
                                       state_.heading, FrontierMode::Random,
                                       config_.utility, frontier_rng_);
                break;
            case FrontierStrategy::Kind::MeanShannonEntropy:
                pick = mean_entropy_pick(false);
                break;
            case FrontierStrategy::Kind::MeanBehavioralEntropy:
                pick = mean_entropy_pick(true);
                break;
        }
        if (!pick) return false;
        const Frontier& f = remaining[*pick];
        const Cell cc = world_.grid->world_to_cell(f.centroid);
        auto target = world_.grid->nearest_known_free_cell(cc, f.centroid);
        std::optional<Path> path;
        if (target) {
            path = a_star_path(*world_.grid, state_.pose, world_.grid->cell_center(*target));
        }
        if (!path) {
            path = a_star_path(*world_.grid, state_.pose,
                               world_.grid->cell_center(f.cells.front()));
        }
        if (path) {
            current_path_.assign(path->points.begin() + (path->points.size() > 1 ? 1 : 0),
                                 path->points.end());
            return true;
        }
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(*pick));
    }
    return false;
}

std::string Mission::explore_step(TickRecord& rec) {
    rec.alpha = 0.0;
    if (!current_path_.empty()) {
        // Drop waypoints invalidated by newly sensed walls.
        const Cell next_cell = world_.grid->world_to_cell(current_path_.front());
        if (world_.grid->known(next_cell) == CellState::Occupied) current_path_.clear();
    }
    if (current_path_.empty() && !replan_explore_target()) {
        failure_reason_ = "trapped: no reachable frontier, no detectable signal";
        return "trapped";
    }
    const Vec2 next = current_path_.front();
    current_path_.erase(current_path_.begin());
    move_to(next);
    return "explore_step";
}

TickRecord Mission::tick() {
    if (complete() || failed()) {
        throw std::logic_error("Mission::tick called after completion or failure");
    }
    TickRecord rec;
    rec.tick = state_.tick;

    const std::vector<double> readings = sense();
    double best_p = 0.0;
    std::optional<std::size_t> best_eligible;
    for (std::size_t i = 0; i < readings.size(); ++i) {
        if (state_.found_sources.count(i)) continue;
        best_p = std::max(best_p, readings[i]);
        if (readings[i] > config_.seeker.tau && !source_in_cooldown(i)) {
            if (!best_eligible || readings[i] > readings[*best_eligible]) best_eligible = i;
        }
    }
    rec.best_p = best_p;

    std::string action;
    if (state_.mode == MissionMode::Seek && state_.active_source &&
        !state_.found_sources.count(*state_.active_source)) {
        engage_or_update_virtual_frontiers(readings, state_.active_source);
        action = seek_step(readings, rec);
    } else if (best_eligible) {
        // Pursue the strongest eligible source; park the rest.
        state_.mode = MissionMode::Seek;
        state_.active_source = best_eligible;
        current_path_.clear();
        stall_count_ = 0;
        engage_or_update_virtual_frontiers(readings, best_eligible);
        if (distance(state_.pose, source_locations_[*best_eligible]) <=
            config_.seeker.eps_converge) {
            arrive(*best_eligible);
            action = "arrive_source:" + std::to_string(*best_eligible);
        } else {
            action = seek_step(readings, rec);
        }
    } else {
        state_.mode = MissionMode::Explore;
        action = explore_step(rec);
    }

    raycast_sense(*world_.grid, state_.pose, config_.sense_range, config_.n_rays);

    rec.mode = state_.mode;
    rec.pose = state_.pose;
    rec.s_detected = state_.s_detected;
    rec.action = action;
    ++state_.tick;
    return rec;
}

MissionOutcome Mission::run() {
    MissionOutcome out;
    while (!complete() && !failed() && state_.tick < config_.tick_budget) {
        out.trace.push_back(tick());
    }
    out.metrics.path_length = path_length_;
    out.metrics.steps = state_.tick;
    out.metrics.success = complete();
    out.metrics.time_per_source = found_ticks_;
    if (!complete()) {
        out.failure_reason = failed() ? failure_reason_ : "tick budget exhausted";
    }
    return out;
}

void write_mission_trace_csv(std::ostream& out, const std::vector<TickRecord>& trace) {
    out << "tick,mode,x,y,best_p,alpha,s_detected,action\n";
    out.precision(12);
    for (const TickRecord& r : trace) {
        out << r.tick << ',' << (r.mode == MissionMode::Seek ? "seek" : "explore") << ','
            << r.pose.x << ',' << r.pose.y << ',' << r.best_p << ',' << r.alpha << ','
            << r.s_detected << ',' << r.action << '\n';
    }
}

}  // namespace beasst
