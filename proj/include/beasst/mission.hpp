#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "beasst/gp_explore.hpp"
#include "beasst/grid.hpp"
#include "beasst/seeker.hpp"
#include "beasst/signal_field.hpp"

namespace beasst {

enum class MissionMode { Explore, Seek };

// Location worth revisiting: a source was detected here but deferred
// (another one was stronger, or pursuit stalled against a wall).
struct VirtualFrontier {
    std::size_t source_id = 0;
    Vec2 point;
    double strength = 0.0;  // last-seen normalized reading
};

struct MissionState {
    MissionMode mode = MissionMode::Explore;
    std::size_t s_detected = 0;
    std::optional<std::size_t> active_source;
    std::vector<VirtualFrontier> virtual_frontiers;
    std::set<std::size_t> found_sources;
    Vec2 pose;
    double heading = 0.0;
    std::size_t tick = 0;
};

// How the explore branch ranks candidate frontiers.
struct FrontierStrategy {
    enum class Kind {
        GpUtility,              // weighted (u, a, theta) utility
        MeanShannonEntropy,     // mean Gaussian differential entropy over cells
        MeanBehavioralEntropy,  // mean -w(u) log w(u) of normalized variance, fixed alpha
        Nearest,
        Random,
    };
    Kind kind = Kind::GpUtility;
    double alpha = 1.0;  // MeanBehavioralEntropy weighting exponent
};

struct MissionConfig {
    SeekerParams seeker;
    AlphaPolicy policy = AlphaPolicy::adaptive();
    GPHyperparams gp;
    UtilityWeights utility;
    FrontierStrategy frontier;
    std::size_t tick_budget = 20'000;
    double sense_range = 8.0;
    int n_rays = 720;
    DisturbanceModel::Kind disturbance_kind = DisturbanceModel::Kind::None;
    double omega_bar = 0.0;
    std::uint64_t seed = 0;
    // Seek stall handling: abort pursuit after stall_window consecutive
    // ticks with displacement below stall_min_progress, park the source as
    // a virtual frontier, and ignore it for seek_cooldown ticks.
    std::size_t stall_window = 8;
    double stall_min_progress = 0.25;  // m
    std::size_t seek_cooldown = 50;
};

struct MissionWorld {
    std::shared_ptr<OccupancyGrid> grid;
    std::vector<std::shared_ptr<SignalField>> source_fields;  // one per source
    Vec2 start;
};

// One normalized reading per source; found sources are suppressed to the
// probability floor and never re-trigger pursuit.
std::vector<double> sense_sources(const Vec2& pose,
                                  const std::vector<std::shared_ptr<SignalField>>& fields,
                                  const std::set<std::size_t>& found);

struct TickRecord {
    std::size_t tick = 0;
    MissionMode mode = MissionMode::Explore;
    Vec2 pose;
    double best_p = 0.0;
    double alpha = 0.0;
    std::size_t s_detected = 0;
    std::string action;
};

struct RunMetrics {
    double path_length = 0.0;            // m, sum of step norms
    std::size_t steps = 0;               // ticks consumed
    bool success = false;
    std::vector<std::size_t> time_per_source;  // tick at which each source was found
};

struct MissionOutcome {
    RunMetrics metrics;
    std::vector<TickRecord> trace;
    std::string failure_reason;  // empty on success
};

// The full search loop: sense, switch between gradient pursuit and
// GP-frontier exploration on the threshold tau, track virtual frontiers,
// and update the map by raycast sensing every tick. Owns its world and
// state exclusively; deterministic given the config seed.
class Mission {
public:
    Mission(MissionWorld world, MissionConfig config);

    // One decision step. Call only while !complete() and !failed().
    TickRecord tick();

    bool complete() const { return state_.s_detected == world_.source_fields.size(); }
    bool failed() const { return !failure_reason_.empty(); }
    const MissionState& state() const { return state_; }
    const std::string& failure_reason() const { return failure_reason_; }

    // Loop tick() to completion, failure, or the tick budget.
    MissionOutcome run();

private:
    std::vector<double> sense() const;
    void upsert_virtual_frontier(std::size_t id, const Vec2& point, double strength);
    void engage_or_update_virtual_frontiers(const std::vector<double>& readings,
                                            std::optional<std::size_t> pursued);
    bool source_in_cooldown(std::size_t id) const;
    void arrive(std::size_t id);
    std::string seek_step(const std::vector<double>& readings, TickRecord& rec);
    std::string explore_step(TickRecord& rec);
    bool replan_explore_target();
    void move_to(const Vec2& next);

    MissionWorld world_;
    MissionConfig config_;
    MissionState state_;
    std::string failure_reason_;

    DisturbanceModel disturbance_;
    Rng frontier_rng_;
    std::vector<Vec2> source_locations_;
    std::vector<std::size_t> cooldown_until_;  // per source, tick index
    std::vector<std::size_t> found_ticks_;
    double path_length_ = 0.0;

    std::vector<Vec2> current_path_;  // remaining explore waypoints, front first
    std::size_t stall_count_ = 0;
};

// CSV with header tick,mode,x,y,best_p,alpha,s_detected,action.
void write_mission_trace_csv(std::ostream& out, const std::vector<TickRecord>& trace);

}  // namespace beasst
