#pragma once

#include <span>
#include <vector>

#include "mixamp/model.hpp"

namespace mixamp {

/// Moments of x given one observation y = x + N(0, sigma2).
struct ScalarPosterior {
    double mean;
    double variance;
};

/// Output of a separable denoiser: the estimates and the average derivative <eta'>
/// that feeds the Onsager correction.
struct DenoiserOutput {
    std::vector<double> estimates;
    double mean_derivative = 0.0;
};

ScalarPosterior bernoulli_posterior(double y, double theta, double sigma2) noexcept;
ScalarPosterior bg_posterior(double y, const BgParams& params, double sigma2) noexcept;

ScalarPosterior spike_slab_posterior(double y, const SpikeSlab& prior, double sigma2) noexcept;
ScalarPosterior posterior(double y, const SignalModel& model, double sigma2) noexcept;

/// Known-parameter conditional mean, applied component-wise. The derivative uses
/// d E[x|y] / dy = Var[x|y] / sigma2, which is exact for Gaussian noise.
DenoiserOutput bayes_denoise(std::span<const double> y, const SignalModel& model, double sigma2);

}  // namespace mixamp
