#include "beasst/signal_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "beasst/rng.hpp"

namespace beasst {

GradientSample sampled_gradient(const SignalField& field, const Vec2& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("sampled_gradient: h must be positive");
    const Rect b = field.bounds();
    GradientSample out;
    const Vec2 axes[2] = {{h, 0.0}, {0.0, h}};
    double* comp[2] = {&out.grad.x, &out.grad.y};
    for (int i = 0; i < 2; ++i) {
        const Vec2 plus = x + axes[i];
        const Vec2 minus = x - axes[i];
        const bool ok_plus = b.contains(plus);
        const bool ok_minus = b.contains(minus);
        if (ok_plus && ok_minus) {
            *comp[i] = (field.value(plus) - field.value(minus)) / (2.0 * h);
        } else if (ok_plus) {
            *comp[i] = (field.value(plus) - field.value(x)) / h;
            out.one_sided = true;
        } else if (ok_minus) {
            *comp[i] = (field.value(x) - field.value(minus)) / h;
            out.one_sided = true;
        } else {
            *comp[i] = 0.0;
            out.one_sided = true;
        }
    }
    return out;
}

Vec2 field_gradient(const SignalField& field, const Vec2& x, double h) {
    if (auto g = field.analytic_gradient(x)) return *g;
    return sampled_gradient(field, x, h).grad;
}

double normalize_dbm(double p_dbm, double p_max_dbm) {
    return Probability(std::pow(10.0, (p_dbm - p_max_dbm) / 10.0)).value();
}

// --- ExpDecayField -----------------------------------------------------------

ExpDecayField::ExpDecayField(double kappa, std::vector<Vec2> sources,
                             std::shared_ptr<const OccupancyGrid> grid)
    : kappa_(kappa), sources_(std::move(sources)), grid_(std::move(grid)) {
    if (!(kappa_ > 0.0)) throw std::invalid_argument("ExpDecayField: kappa must be positive");
    if (sources_.empty()) throw std::invalid_argument("ExpDecayField: no sources");
    distance_maps_ = dijkstra_distance_maps(*grid_, sources_);

    // Global argmax by full-grid scan; ties cannot occur away from the
    // sources (geodesic distances have no interior minima).
    double best = -1.0;
    for (int r = 0; r < grid_->height(); ++r) {
        for (int c = 0; c < grid_->width(); ++c) {
            const Vec2 p = grid_->cell_center({r, c});
            const double v = value(p);
            if (v > best) {
                best = v;
                peak_ = p;
            }
        }
    }
}

double ExpDecayField::soft_min_distance(const Vec2& x) const {
    // Max-shifted log-sum-exp of -d_i: stable for distant sources and an
    // exact identity for a single one.
    double dmin = kUnreachable;
    for (const auto& dm : distance_maps_) dmin = std::min(dmin, dm.interpolate(x));
    if (!std::isfinite(dmin)) return kUnreachable;
    double sum = 0.0;
    for (const auto& dm : distance_maps_) {
        const double d = dm.interpolate(x);
        if (std::isfinite(d)) sum += std::exp(-(d - dmin));
    }
    return dmin - std::log(sum);
}

double ExpDecayField::value(const Vec2& x) const {
    const double d = soft_min_distance(x);
    if (!std::isfinite(d)) return kProbabilityFloor;
    return Probability(std::exp(-kappa_ * d)).value();
}

std::optional<Vec2> ExpDecayField::analytic_gradient(const Vec2& x) const {
    const double h = grid_->resolution();
    const Rect b = bounds();
    auto dist = [this](const Vec2& p) { return soft_min_distance(p); };
    Vec2 grad_d;
    const Vec2 axes[2] = {{h, 0.0}, {0.0, h}};
    double* comp[2] = {&grad_d.x, &grad_d.y};
    for (int i = 0; i < 2; ++i) {
        const Vec2 plus = x + axes[i];
        const Vec2 minus = x - axes[i];
        const double dp = b.contains(plus) ? dist(plus) : dist(x);
        const double dm = b.contains(minus) ? dist(minus) : dist(x);
        const double span = (b.contains(plus) ? h : 0.0) + (b.contains(minus) ? h : 0.0);
        if (span == 0.0 || !std::isfinite(dp) || !std::isfinite(dm)) {
            *comp[i] = 0.0;
        } else {
            *comp[i] = (dp - dm) / span;
        }
    }
    const double v = value(x);
    return Vec2{-kappa_ * v * grad_d.x, -kappa_ * v * grad_d.y};
}

Rect ExpDecayField::bounds() const {
    return {{0.0, 0.0},
            {grid_->width() * grid_->resolution(), grid_->height() * grid_->resolution()}};
}

std::string ExpDecayField::params_string() const {
    std::ostringstream ss;
    ss << "kappa=" << kappa_ << " sources=" << sources_.size();
    return ss.str();
}

// --- PathLossField -----------------------------------------------------------

namespace {
constexpr double kReferenceDistance = 1.0;  // m; the model diverges at d = 0
}

PathLossField::PathLossField(const Params& params, Vec2 source,
                             std::shared_ptr<const OccupancyGrid> grid)
    : params_(params), source_(source), grid_(std::move(grid)) {
    if (!(params_.n_exp > 0.0)) throw std::invalid_argument("PathLossField: n_exp <= 0");
    if (params_.shadow_db_per_wall < 0.0 || params_.fading_sigma_db < 0.0) {
        throw std::invalid_argument("PathLossField: negative noise magnitude");
    }
    if (!grid_->truth_free(grid_->world_to_cell(source_))) {
        throw std::invalid_argument("PathLossField: source not on a free cell");
    }
    p_max_dbm_ = params_.p_max_dbm.value_or(params_.l0_dbm);
}

int PathLossField::wall_count(const Vec2& x) const {
    // Bresenham segment between the cell containing x and the source cell.
    Cell a = grid_->world_to_cell(x);
    const Cell b = grid_->world_to_cell(source_);
    int dr = std::abs(b.row - a.row);
    int dc = std::abs(b.col - a.col);
    const int sr = a.row < b.row ? 1 : -1;
    const int sc = a.col < b.col ? 1 : -1;
    int err = dc - dr;
    int count = 0;
    for (;;) {
        if (grid_->in_bounds(a) && grid_->truth(a) == CellState::Occupied) ++count;
        if (a == b) break;
        const int e2 = 2 * err;
        if (e2 > -dr) {
            err -= dr;
            a.col += sc;
        }
        if (e2 < dc) {
            err += dc;
            a.row += sr;
        }
    }
    return count;
}

double PathLossField::strength_dbm(const Vec2& x) const {
    const double d = std::max(kReferenceDistance, distance(x, source_));
    double dbm = params_.l0_dbm - 10.0 * params_.n_exp * std::log10(d);
    dbm -= wall_count(x) * params_.shadow_db_per_wall;
    if (params_.fading_sigma_db > 0.0) {
        const Cell c = grid_->world_to_cell(x);
        const auto cell_id =
            static_cast<std::uint64_t>(c.row) * grid_->width() + static_cast<std::uint64_t>(c.col);
        Rng rng = substream(params_.seed, "fading", cell_id);
        dbm -= rng.normal(0.0, params_.fading_sigma_db);
    }
    return dbm;
}

double PathLossField::value(const Vec2& x) const {
    return normalize_dbm(strength_dbm(x), p_max_dbm_);
}

Vec2 PathLossField::peak() const {
    return grid_->cell_center(grid_->world_to_cell(source_));
}

Rect PathLossField::bounds() const {
    return {{0.0, 0.0},
            {grid_->width() * grid_->resolution(), grid_->height() * grid_->resolution()}};
}

std::string PathLossField::params_string() const {
    std::ostringstream ss;
    ss << "l0_dbm=" << params_.l0_dbm << " n_exp=" << params_.n_exp
       << " shadow_db_per_wall=" << params_.shadow_db_per_wall
       << " fading_sigma_db=" << params_.fading_sigma_db << " seed=" << params_.seed
       << " p_max_dbm=" << p_max_dbm_;
    return ss.str();
}

// --- LogNormalField ----------------------------------------------------------

LogNormalField::LogNormalField(Vec2 mu, double sigma, double skew, double rot_rad,
                               Rect bounds)
    : mu_(mu), sigma_(sigma), skew_(skew), rot_(rot_rad), bounds_(bounds) {
    if (!(sigma_ > 0.0) || !(skew_ > 0.0)) {
        throw std::invalid_argument("LogNormalField: sigma and skew must be positive");
    }
}

double LogNormalField::value(const Vec2& x) const {
    const double dx = x.x - mu_.x;
    const double dy = x.y - mu_.y;
    const double cu = std::cos(rot_);
    const double su = std::sin(rot_);
    const double u = (cu * dx + su * dy) / (sigma_ * skew_);
    const double v = (-su * dx + cu * dy) / sigma_;
    const double q = std::hypot(u, v);
    const double L = std::log1p(q);
    return Probability(std::exp(-0.5 * L * L)).value();
}

std::optional<Vec2> LogNormalField::analytic_gradient(const Vec2& x) const {
    const double dx = x.x - mu_.x;
    const double dy = x.y - mu_.y;
    const double cu = std::cos(rot_);
    const double su = std::sin(rot_);
    const double ax = sigma_ * skew_;
    const double ay = sigma_;
    const double u = (cu * dx + su * dy) / ax;
    const double v = (-su * dx + cu * dy) / ay;
    const double q = std::hypot(u, v);
    if (q == 0.0) return Vec2{0.0, 0.0};
    const double L = std::log1p(q);
    const double val = std::exp(-0.5 * L * L);
    if (val < kProbabilityFloor) return Vec2{0.0, 0.0};  // clamped plateau
    const double dval_dq = -val * L / (1.0 + q);
    // dq/d(x,y) through the rotated, scaled frame.
    const double du_dx = cu / ax, du_dy = su / ax;
    const double dv_dx = -su / ay, dv_dy = cu / ay;
    const double dq_dx = (u * du_dx + v * dv_dx) / q;
    const double dq_dy = (u * du_dy + v * dv_dy) / q;
    return Vec2{dval_dq * dq_dx, dval_dq * dq_dy};
}

std::string LogNormalField::params_string() const {
    std::ostringstream ss;
    ss << "mu=(" << mu_.x << "," << mu_.y << ") sigma=" << sigma_ << " skew=" << skew_
       << " rot=" << rot_;
    return ss.str();
}

// --- Dumps --------------------------------------------------------------------

void dump_field_values(std::ostream& out, int width, int height, double resolution,
                       const std::string& kind, const std::string& params,
                       const std::function<double(const Vec2&)>& sample) {
    out << width << ' ' << height << ' ' << resolution << ' ' << kind << ' ' << params
        << '\n';
    out.precision(12);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const Vec2 p{(c + 0.5) * resolution, (r + 0.5) * resolution};
            if (c) out << ' ';
            out << sample(p);
        }
        out << '\n';
    }
}

}  // namespace beasst
