#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "beasst/grid.hpp"
#include "beasst/rng.hpp"

namespace beasst {

struct GPHyperparams {
    double lengthscale = 2.0;  // m
    double signal_var = 1.0;
    double noise_var = 0.01;
    double jitter = 1e-8;
    std::size_t max_train = 512;  // strided downsampling above this
};

// Exact GP regression over observed occupancy with a squared-exponential
// kernel and a constant prior mean of 0.5 (maximum-uncertainty occupancy).
// Predictive variance includes the noise term, so the prior variance at an
// unobserved point is signal_var + noise_var.
class GPOccupancyModel {
public:
    GPOccupancyModel() = default;  // zero training points: prior everywhere
    explicit GPOccupancyModel(GPHyperparams hp) : hp_(hp) {}

    struct Prediction {
        double mu = 0.5;
        double sigma2 = 0.0;
    };

    Prediction predict(const Vec2& x) const;

    double prior_variance() const { return hp_.signal_var + hp_.noise_var; }
    const GPHyperparams& hyperparams() const { return hp_; }
    std::size_t train_size() const { return train_x_.size(); }

    // Fit to (cell center, occupancy in {0,1}) pairs. Throws when the
    // kernel matrix is not positive definite after jitter.
    static GPOccupancyModel fit(const std::vector<std::pair<Vec2, double>>& observations,
                                const GPHyperparams& hp);

private:
    GPHyperparams hp_;
    std::vector<Vec2> train_x_;
    Eigen::VectorXd alpha_;   // (K + noise I)^-1 (y - 0.5)
    Eigen::LLT<Eigen::MatrixXd> chol_;
    bool fitted_ = false;
};

// Collect (center, occupancy) training pairs from the known cells of the
// grid, strided down to at most max_train points.
std::vector<std::pair<Vec2, double>> gp_training_set(const OccupancyGrid& grid,
                                                     std::size_t max_train);

GPOccupancyModel gp_fit(const OccupancyGrid& grid, const GPHyperparams& hp);

// Differential entropy of a Gaussian with variance sigma2:
// 0.5 log(2 pi e) + 0.5 log(sigma2). Negative for small variances.
double cell_entropy(double sigma2);

struct FrontierScore {
    std::size_t frontier_index = 0;
    double u = 0.0;      // mean predictive variance over frontier cells
    double a = 0.0;      // count of high-variance cells within r_hv of the centroid
    double theta = 0.0;  // heading change toward the centroid, in [0, pi]
    double utility = 0.0;
};

struct UtilityWeights {
    double w_u = 0.5;
    double w_a = 0.3;
    double w_theta = 0.2;
    double hv_threshold_fraction = 0.5;  // of prior variance
    int r_hv_cells = 5;
};

// Score every candidate frontier: utility = w_u * norm(u) + w_a * norm(a)
// - w_theta * (theta / pi), with u and a min-max normalized across the
// candidate set (constant terms normalize to zero).
std::vector<FrontierScore> score_frontiers(const GPOccupancyModel& model,
                                           const std::vector<Frontier>& frontiers,
                                           const OccupancyGrid& grid, const Vec2& pose,
                                           double heading, const UtilityWeights& weights);

enum class FrontierMode { GpUtility, Nearest, Random };

// Choose a frontier index. GpUtility takes the max-utility candidate
// (ties: lowest centroid (row, col)); if every candidate sits in
// already-certain space (max u below the high-variance threshold) it
// reverts to Nearest. Nearest minimizes A* cost from the pose. Random is
// a seeded uniform choice. nullopt on an empty list or when no candidate
// is reachable.
std::optional<std::size_t> select_frontier(const GPOccupancyModel& model,
                                           const std::vector<Frontier>& frontiers,
                                           const OccupancyGrid& grid, const Vec2& pose,
                                           double heading, FrontierMode mode,
                                           const UtilityWeights& weights, Rng& rng);

}  // namespace beasst
