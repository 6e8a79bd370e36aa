#pragma once

#include <cstddef>
#include <vector>

namespace beasst {

// Clamp floor for surrogate probabilities. Keeps log terms and gradient
// scales finite without affecting values in the meaningful range.
inline constexpr double kProbabilityFloor = 1e-9;

// Cap on gradient scale factors. The behavioral/Shannon scale ratio has
// genuinely infinite limits (alpha < 1 at p -> 1, alpha > 1 at p -> 0);
// a simulator needs bounded velocities, so those limits come back capped
// and flagged.
inline constexpr double kScaleCap = 1e6;

// Subjective-perception parameters of the Prelec weighting function.
// alpha = beta = 1 is the Shannon-equivalence point.
struct PrelecParams {
    double alpha = 1.0;
    double beta = 1.0;

    PrelecParams(double a, double b);
};

// Normalized signal strength treated as a surrogate probability.
// Values outside (0, 1] are clamped into [kProbabilityFloor, 1].
class Probability {
public:
    explicit Probability(double v);
    double value() const { return v_; }

private:
    double v_;
};

// Rectangular patch of surrogate probabilities around the robot, with the
// world area of one cell. Used to discretize the local entropy integral as
// a midpoint Riemann sum.
struct EntropyPatch {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Probability> samples;  // row-major, rows*cols entries
    double cell_area = 1.0;            // m^2

    EntropyPatch(std::size_t r, std::size_t c, std::vector<Probability> s, double area);
};

// Scale factor together with a saturation marker. `saturated` means the
// true value is a divergent limit (or exceeded kScaleCap) and `value`
// carries the cap instead.
struct ScaleResult {
    double value = 0.0;
    bool saturated = false;
};

// Prelec weighting w(p) = exp(-beta * (-log p)^alpha).
// Strictly increasing in p, w(1) = 1, identity map when alpha = beta = 1.
double prelec_weight(Probability p, const PrelecParams& params);

// Scalar multiplying grad(p) in the behavioral velocity field:
//   d/dp log w(p) = (beta * alpha / p) * (-log p)^(alpha - 1).
// Reduces to 1/p at alpha = beta = 1. Diverges for alpha < 1 at p = 1;
// that case returns {kScaleCap, saturated=true} so a caller can zero the
// step at the peak.
ScaleResult log_weight_gradient_scale(Probability p, const PrelecParams& params);

// Ratio of the behavioral gradient scale to the Shannon gradient scale:
//   G_r(p) = beta * alpha * (-log p)^(alpha - 1).
// Constant beta*alpha at alpha = 1; characterizes aggressive (alpha > 1,
// amplified far from the source) vs cautious (alpha < 1) regimes.
// Divergent limits are capped and flagged as in log_weight_gradient_scale.
ScaleResult gradient_ratio(Probability p, const PrelecParams& params);

// Behavioral entropy of a patch: sum over cells of -w(p) log w(p) times
// cell_area (nats * m^2). Midpoint Riemann sum of the differential form.
double behavioral_entropy_patch(const EntropyPatch& patch, const PrelecParams& params);

// Shannon counterpart (identity weighting): sum of -p log p times cell_area.
double shannon_entropy_patch(const EntropyPatch& patch);

// Lyapunov value V(p) = -log w(p) = beta * (-log p)^alpha.
// Nonnegative, zero exactly at p = 1.
double lyapunov_value(Probability p, const PrelecParams& params);

}  // namespace beasst
