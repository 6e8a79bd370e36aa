#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "beasst/entropy.hpp"
#include "beasst/geometry.hpp"
#include "beasst/grid.hpp"
#include "beasst/planner.hpp"

namespace beasst {

struct Rect {
    Vec2 lo;
    Vec2 hi;
    bool contains(const Vec2& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
};

// Ground-truth signal strength over the world, normalized into (0, 1]
// with value ~1 at the source. Immutable after construction; queries are
// read-only and thread-safe.
class SignalField {
public:
    virtual ~SignalField() = default;

    // Normalized strength at x, clamped into [kProbabilityFloor, 1].
    virtual double value(const Vec2& x) const = 0;

    // Closed-form strength gradient where the model admits one.
    virtual std::optional<Vec2> analytic_gradient(const Vec2&) const { return std::nullopt; }

    // Location of the field's global maximum.
    virtual Vec2 peak() const = 0;

    virtual Rect bounds() const = 0;
    virtual std::string kind() const = 0;
    virtual std::string params_string() const = 0;
};

struct GradientSample {
    Vec2 grad;
    bool one_sided = false;  // a boundary forced a one-sided difference
};

// Finite-difference estimate of grad(value) at x with stencil width h;
// falls back to a flagged one-sided difference against the field bounds.
GradientSample sampled_gradient(const SignalField& field, const Vec2& x, double h);

// Analytic gradient when the field provides one, sampled otherwise.
Vec2 field_gradient(const SignalField& field, const Vec2& x, double h);

// Linear-domain normalization of a dBm reading against the a-priori peak:
// 10^((p_dbm - p_max_dbm)/10), clamped into (kProbabilityFloor, 1].
double normalize_dbm(double p_dbm, double p_max_dbm);

// --- Exponential decay model -------------------------------------------------
//
// strength(x) = exp(-kappa * d~(x)) with d~ the soft minimum
// -log(sum_i exp(-d_sp(x, s_i))) of obstacle-aware shortest-path
// distances. Obstacle avoidance is baked into the distances.
class ExpDecayField : public SignalField {
public:
    ExpDecayField(double kappa, std::vector<Vec2> sources,
                  std::shared_ptr<const OccupancyGrid> grid);

    // Soft minimum of the per-source shortest-path distances; equals the
    // single-source distance exactly, and is unreachable only where every
    // source is.
    double soft_min_distance(const Vec2& x) const;

    double value(const Vec2& x) const override;
    // grad strength = -kappa * strength * grad d~, with grad d~ from
    // central differences of the distance surface.
    std::optional<Vec2> analytic_gradient(const Vec2& x) const override;
    Vec2 peak() const override { return peak_; }
    Rect bounds() const override;
    std::string kind() const override { return "exp_decay"; }
    std::string params_string() const override;

    double kappa() const { return kappa_; }
    const std::vector<Vec2>& sources() const { return sources_; }

private:
    double kappa_;
    std::vector<Vec2> sources_;
    std::shared_ptr<const OccupancyGrid> grid_;
    std::vector<DistanceMap> distance_maps_;
    Vec2 peak_;
};

// --- Log-distance path loss ---------------------------------------------------
//
// dbm(x) = l0 - 10 n log10(max(d_ref, |x - s|)) - walls * shadow_db_per_wall
//          - fading(cell), with the per-cell fading draw frozen by seed.
// Shadowing counts occupied cells on the Bresenham segment to the source.
class PathLossField : public SignalField {
public:
    struct Params {
        double l0_dbm = -40.0;
        double n_exp = 2.0;
        double shadow_db_per_wall = 0.0;
        double fading_sigma_db = 0.0;
        std::uint64_t seed = 0;
        // Peak used for normalization; defaults to the model value at the
        // reference distance with zero noise (= l0_dbm).
        std::optional<double> p_max_dbm;
    };

    PathLossField(const Params& params, Vec2 source,
                  std::shared_ptr<const OccupancyGrid> grid);

    double strength_dbm(const Vec2& x) const;
    int wall_count(const Vec2& x) const;

    double value(const Vec2& x) const override;
    Vec2 peak() const override;
    Rect bounds() const override;
    std::string kind() const override { return "path_loss"; }
    std::string params_string() const override;

    double p_max_dbm() const { return p_max_dbm_; }

private:
    Params params_;
    Vec2 source_;
    std::shared_ptr<const OccupancyGrid> grid_;
    double p_max_dbm_;
};

// --- Log-normal test field ----------------------------------------------------
//
// Anisotropic unimodal bump with a log-compressed radial profile: with
// (u, v) the rotated offsets from mu scaled by the skewed axes,
// value = exp(-log(1 + q)^2 / 2), q = hypot(u, v). Peak value exactly 1
// at mu; heavier-than-Gaussian tail.
class LogNormalField : public SignalField {
public:
    LogNormalField(Vec2 mu, double sigma, double skew, double rot_rad, Rect bounds);

    double value(const Vec2& x) const override;
    std::optional<Vec2> analytic_gradient(const Vec2& x) const override;
    Vec2 peak() const override { return mu_; }
    Rect bounds() const override { return bounds_; }
    std::string kind() const override { return "log_normal"; }
    std::string params_string() const override;

private:
    Vec2 mu_;
    double sigma_;
    double skew_;
    double rot_;
    Rect bounds_;
};

// Plain-text grid dump: header "width height resolution kind params",
// then row-major space-separated values sampled at cell centers.
void dump_field_values(std::ostream& out, int width, int height, double resolution,
                       const std::string& kind, const std::string& params,
                       const std::function<double(const Vec2&)>& sample);

}  // namespace beasst
