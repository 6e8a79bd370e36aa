#include "beasst/gp_explore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beasst/planner.hpp"

namespace beasst {

namespace {
inline double se_kernel(const Vec2& a, const Vec2& b, const GPHyperparams& hp) {
    const double d2 = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
    return hp.signal_var * std::exp(-0.5 * d2 / (hp.lengthscale * hp.lengthscale));
}
}  // namespace

GPOccupancyModel GPOccupancyModel::fit(
    const std::vector<std::pair<Vec2, double>>& observations, const GPHyperparams& hp) {
    if (!(hp.lengthscale > 0.0) || !(hp.signal_var > 0.0) || hp.noise_var < 0.0) {
        throw std::invalid_argument("gp_fit: invalid hyperparameters");
    }
    GPOccupancyModel model(hp);
    if (observations.empty()) return model;

    const auto n = static_cast<Eigen::Index>(observations.size());
    Eigen::MatrixXd K(n, n);
    Eigen::VectorXd y(n);
    model.train_x_.reserve(observations.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        model.train_x_.push_back(observations[i].first);
        y(i) = observations[i].second - 0.5;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double k = se_kernel(model.train_x_[i], model.train_x_[j], hp);
            K(i, j) = k;
            K(j, i) = k;
        }
        K(i, i) += hp.noise_var + hp.jitter;
    }
    model.chol_.compute(K);
    if (model.chol_.info() != Eigen::Success) {
        throw std::runtime_error("gp_fit: kernel matrix not positive definite after jitter");
    }
    model.alpha_ = model.chol_.solve(y);
    if (!model.alpha_.allFinite()) {
        throw std::runtime_error("gp_fit: kernel solve produced non-finite weights");
    }
    model.fitted_ = true;
    return model;
}

GPOccupancyModel::Prediction GPOccupancyModel::predict(const Vec2& x) const {
    Prediction out;
    out.sigma2 = prior_variance();
    if (!fitted_) return out;

    const auto n = static_cast<Eigen::Index>(train_x_.size());
    Eigen::VectorXd ks(n);
    for (Eigen::Index i = 0; i < n; ++i) ks(i) = se_kernel(x, train_x_[i], hp_);
    out.mu = 0.5 + ks.dot(alpha_);
    const Eigen::VectorXd v = chol_.solve(ks);
    const double quad = ks.dot(v);
    out.sigma2 = std::max(hp_.signal_var + hp_.noise_var - quad, 1e-12);
    return out;
}

std::vector<std::pair<Vec2, double>> gp_training_set(const OccupancyGrid& grid,
                                                     std::size_t max_train) {
    std::vector<std::pair<Vec2, double>> all;
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            const CellState s = grid.known({r, c});
            if (s == CellState::Unknown) continue;
            all.emplace_back(grid.cell_center({r, c}), s == CellState::Occupied ? 1.0 : 0.0);
        }
    }
    if (all.size() <= max_train || max_train == 0) return all;
    const std::size_t stride = (all.size() + max_train - 1) / max_train;
    std::vector<std::pair<Vec2, double>> sampled;
    for (std::size_t i = 0; i < all.size(); i += stride) sampled.push_back(all[i]);
    return sampled;
}

GPOccupancyModel gp_fit(const OccupancyGrid& grid, const GPHyperparams& hp) {
    return GPOccupancyModel::fit(gp_training_set(grid, hp.max_train), hp);
}

double cell_entropy(double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("cell_entropy: sigma2 must be positive");
    return 0.5 * std::log(2.0 * M_PI * M_E) + 0.5 * std::log(sigma2);
}

std::vector<FrontierScore> score_frontiers(const GPOccupancyModel& model,
                                           const std::vector<Frontier>& frontiers,
                                           const OccupancyGrid& grid, const Vec2& pose,
                                           double heading, const UtilityWeights& weights) {
    std::vector<FrontierScore> scores;
    scores.reserve(frontiers.size());
    const double hv_threshold = weights.hv_threshold_fraction * model.prior_variance();

    for (std::size_t i = 0; i < frontiers.size(); ++i) {
        const Frontier& f = frontiers[i];
        FrontierScore s;
        s.frontier_index = i;

        double var_sum = 0.0;
        for (const Cell& c : f.cells) var_sum += model.predict(grid.cell_center(c)).sigma2;
        s.u = var_sum / static_cast<double>(f.cells.size());

        // High-variance cell count in a square window clipped to the disk
        // of r_hv cells around the centroid.
        const Cell cc = grid.world_to_cell(f.centroid);
        const int r_hv = weights.r_hv_cells;
        int hv = 0;
        for (int dr = -r_hv; dr <= r_hv; ++dr) {
            for (int dc = -r_hv; dc <= r_hv; ++dc) {
                if (dr * dr + dc * dc > r_hv * r_hv) continue;
                const Cell c{cc.row + dr, cc.col + dc};
                if (!grid.in_bounds(c)) continue;
                if (model.predict(grid.cell_center(c)).sigma2 > hv_threshold) ++hv;
            }
        }
        s.a = hv;

        const Vec2 to_frontier = f.centroid - pose;
        s.theta = to_frontier.norm() > 1e-12
                      ? angle_between(std::atan2(to_frontier.y, to_frontier.x), heading)
                      : 0.0;
        scores.push_back(s);
    }

    // Min-max normalize u and a across the candidate set; a constant term
    // contributes zero so it cannot perturb the ranking.
    double lo_u = 1e300, hi_u = -1e300, lo_a = 1e300, hi_a = -1e300;
    for (const auto& s : scores) {
        lo_u = std::min(lo_u, s.u);
        hi_u = std::max(hi_u, s.u);
        lo_a = std::min(lo_a, s.a);
        hi_a = std::max(hi_a, s.a);
    }
    for (auto& s : scores) {
        const double nu = hi_u > lo_u ? (s.u - lo_u) / (hi_u - lo_u) : 0.0;
        const double na = hi_a > lo_a ? (s.a - lo_a) / (hi_a - lo_a) : 0.0;
        s.utility = weights.w_u * nu + weights.w_a * na -
                    weights.w_theta * (s.theta / M_PI);
    }
    return scores;
}

std::optional<std::size_t> select_frontier(const GPOccupancyModel& model,
                                           const std::vector<Frontier>& frontiers,
                                           const OccupancyGrid& grid, const Vec2& pose,
                                           double heading, FrontierMode mode,
                                           const UtilityWeights& weights, Rng& rng) {
    if (frontiers.empty()) return std::nullopt;

    auto nearest_by_cost = [&]() -> std::optional<std::size_t> {
        std::optional<std::size_t> best;
        double best_cost = kUnreachable;
        for (std::size_t i = 0; i < frontiers.size(); ++i) {
            const Vec2 target = grid.cell_center(grid.world_to_cell(frontiers[i].centroid));
            auto path = a_star_path(grid, pose, target);
            if (!path) {
                // Centroid of a concave frontier can fall on a wall; try the
                // first member cell instead.
                path = a_star_path(grid, pose, grid.cell_center(frontiers[i].cells.front()));
            }
            if (path && path->cost < best_cost) {
                best_cost = path->cost;
                best = i;
            }
        }
        return best;
    };

    switch (mode) {
        case FrontierMode::Random:
            return static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(frontiers.size()) - 1));
        case FrontierMode::Nearest:
            return nearest_by_cost();
        case FrontierMode::GpUtility: {
            auto scores = score_frontiers(model, frontiers, grid, pose, heading, weights);
            const double hv_threshold = weights.hv_threshold_fraction * model.prior_variance();
            double max_u = 0.0;
            for (const auto& s : scores) max_u = std::max(max_u, s.u);
            if (max_u < hv_threshold) {
                // Every candidate lies in already-certain space.
                return nearest_by_cost();
            }
            std::size_t best = 0;
            for (std::size_t i = 1; i < scores.size(); ++i) {
                if (scores[i].utility > scores[best].utility + 1e-12) {
                    best = i;
                } else if (std::fabs(scores[i].utility - scores[best].utility) <= 1e-12) {
                    const Cell ci = grid.world_to_cell(frontiers[i].centroid);
                    const Cell cb = grid.world_to_cell(frontiers[best].centroid);
                    if (ci < cb) best = i;
                }
            }
            return best;
        }
    }
    return std::nullopt;
}

}  // namespace beasst
