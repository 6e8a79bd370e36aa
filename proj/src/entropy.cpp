#include "beasst/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beasst {

PrelecParams::PrelecParams(double a, double b) : alpha(a), beta(b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("PrelecParams: alpha and beta must be positive");
    }
}

Probability::Probability(double v) : v_(std::clamp(v, kProbabilityFloor, 1.0)) {}

EntropyPatch::EntropyPatch(std::size_t r, std::size_t c, std::vector<Probability> s,
                           double area)
    : rows(r), cols(c), samples(std::move(s)), cell_area(area) {
    if (rows == 0 || cols == 0 || samples.size() != rows * cols) {
        throw std::invalid_argument("EntropyPatch: empty or inconsistent sample grid");
    }
    if (!(cell_area > 0.0)) {
        throw std::invalid_argument("EntropyPatch: cell_area must be positive");
    }
}

double prelec_weight(Probability p, const PrelecParams& params) {
    const double t = -std::log(p.value());
    if (t == 0.0) return 1.0;
    return std::exp(-params.beta * std::pow(t, params.alpha));
}

ScaleResult log_weight_gradient_scale(Probability p, const PrelecParams& params) {
    const double pv = p.value();
    const double t = -std::log(pv);
    if (t == 0.0) {
        if (params.alpha > 1.0) return {0.0, false};
        if (params.alpha == 1.0) return {params.beta, false};
        return {kScaleCap, true};  // (-log p)^(alpha-1) -> inf at p = 1
    }
    const double v = params.beta * params.alpha / pv * std::pow(t, params.alpha - 1.0);
    if (v > kScaleCap) return {kScaleCap, true};
    return {v, false};
}

ScaleResult gradient_ratio(Probability p, const PrelecParams& params) {
    const double t = -std::log(p.value());
    if (t == 0.0) {
        if (params.alpha > 1.0) return {0.0, false};
        if (params.alpha == 1.0) return {params.beta * params.alpha, false};
        return {kScaleCap, true};
    }
    const double v = params.beta * params.alpha * std::pow(t, params.alpha - 1.0);
    if (v > kScaleCap) return {kScaleCap, true};
    return {v, false};
}

namespace {
// -w log w evaluated as s*exp(-s) with s = beta*(-log p)^alpha. Stable as
// w underflows: the product tends to 0, never NaN.
inline double be_integrand(double p, double alpha, double beta) {
    const double t = -std::log(p);
    if (t == 0.0) return 0.0;
    const double s = beta * std::pow(t, alpha);
    return s * std::exp(-s);
}
}  // namespace

double behavioral_entropy_patch(const EntropyPatch& patch, const PrelecParams& params) {
    double sum = 0.0;
    for (const Probability& p : patch.samples) {
        sum += be_integrand(p.value(), params.alpha, params.beta);
    }
    return sum * patch.cell_area;
}

double shannon_entropy_patch(const EntropyPatch& patch) {
    double sum = 0.0;
    for (const Probability& p : patch.samples) {
        const double t = -std::log(p.value());
        sum += p.value() * t;
    }
    return sum * patch.cell_area;
}

double lyapunov_value(Probability p, const PrelecParams& params) {
    const double t = -std::log(p.value());
    if (t == 0.0) return 0.0;
    return params.beta * std::pow(t, params.alpha);
}

}  // namespace beasst
